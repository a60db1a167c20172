import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from seqdecomp.errors import DivisionByZero, NotMonic, NotPrime, Reducible, TooLarge
from seqdecomp.field import field_from_json, is_prime, make_extension, make_prime_field

F = make_prime_field(10009)
F5 = make_prime_field(5)
L5 = make_extension(F5, [2, 1, 1])  # Z^2 + Z + 2
L = make_extension(F, [2, 1, 1])

elements = st.integers(0, F.p - 1)
ext_elements = st.tuples(elements, elements)


def test_is_prime_small():
    assert [k for k in range(30) if is_prime(k)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert is_prime(2**61 - 1) and not is_prime(2**61 + 1)


@pytest.mark.parametrize("p,exc", [(10, NotPrime), (2, NotPrime), (1, NotPrime), (2**64 + 13, TooLarge)])
def test_bad_characteristic(p, exc):
    with pytest.raises(exc):
        make_prime_field(p)


def test_bad_modulus():
    with pytest.raises(Reducible):
        make_extension(F5, [4, 0, 1])  # Z^2 - 1
    with pytest.raises(NotMonic):
        make_extension(F5, [2, 1, 2])
    with pytest.raises(Reducible):
        make_extension(F5, [1, 1])


def test_inverse_of_generator():
    z = L5.gen()
    assert L5.inv(z) == (2, 2)  # 2z + 2
    assert L5.mul(z, L5.inv(z)) == L5.one


def test_division_by_zero():
    with pytest.raises(DivisionByZero):
        F.inv(0)
    with pytest.raises(ZeroDivisionError):
        L.inv(L.zero)


def test_embedding():
    assert L.embed(3) == (3, 0)
    assert L.in_base(L.embed(3)) and not L.in_base(L.gen())
    assert L.base == F


def test_json_roundtrip():
    assert field_from_json(L5.describe()) == L5
    assert field_from_json(F.describe()) == F
    a = L.mul(L.gen(), L.embed(17))
    assert L.from_json(L.to_json(a)) == a


def test_format():
    z = L5.gen()
    assert L5.format(z) == "z"
    assert L5.format(L5.add(z, L5.one)) == "(z + 1)"
    assert F.format(F(-1)) == "-1"


def test_random_is_seeded():
    assert F.random_vec(5, random.Random(3)) == F.random_vec(5, random.Random(3))


@given(elements, elements, elements)
def test_prime_field_axioms(a, b, c):
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.sub(F.add(a, b), b) == a
    if a:
        assert F.mul(a, F.inv(a)) == 1
        assert F.div(F.mul(a, b), a) == b


@given(ext_elements, ext_elements, ext_elements)
def test_extension_axioms(a, b, c):
    assert L.mul(a, L.add(b, c)) == L.add(L.mul(a, b), L.mul(a, c))
    assert L.mul(L.mul(a, b), c) == L.mul(a, L.mul(b, c))
    if a != L.zero:
        assert L.mul(a, L.inv(a)) == L.one


@given(ext_elements)
def test_frobenius_fixes_base(a):
    # x -> x^p is a field automorphism of order 2 fixing exactly F_p
    frob = L.pow(a, F.p)
    assert L.pow(frob, F.p) == a
    assert (frob == a) == L.in_base(a)
