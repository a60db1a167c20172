import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from seqdecomp.errors import DivisionByZero
from seqdecomp.field import make_prime_field
from seqdecomp.linalg import Echelon, identity, in_span, inverse, matmul, matvec, nullspace, rank, rref
from seqdecomp.mpoly import MPoly, divides, mono_mul, mono_str
from seqdecomp.quotient import CostCounter

F = make_prime_field(10007)
F7 = make_prime_field(7)


def small_matrix(rows, cols, seed, density=0.5, ctx=F7):
    rng = random.Random(seed)
    return [[ctx.random(rng) if rng.random() < density else 0 for _ in range(cols)] for _ in range(rows)]


@settings(max_examples=50)
@given(st.integers(1, 5), st.integers(1, 5), st.integers(0, 10**6))
def test_rank_nullity(r, c, seed):
    A = small_matrix(r, c, seed)
    R, pivots = rref(F7, A, c)
    assert len(pivots) == rank(F7, A, c)
    N = nullspace(F7, A, c)
    assert len(pivots) + len(N) == c
    for v in N:
        assert not any(matvec(F7, A, v))


@settings(max_examples=30)
@given(st.integers(1, 5), st.integers(0, 10**6))
def test_inverse(d, seed):
    A = small_matrix(d, d, seed, density=1.0, ctx=F)
    try:
        B = inverse(F, A)
    except DivisionByZero:
        assert rank(F, A) < d
        return
    assert matmul(F, A, B) == identity(F, d)


def test_singular_inverse():
    with pytest.raises(DivisionByZero):
        inverse(F, [[1, 2], [2, 4]])


@settings(max_examples=30)
@given(st.integers(0, 10**6))
def test_echelon_coefficients(seed):
    rng = random.Random(seed)
    cost = CostCounter()
    ech = Echelon(F7, cost)
    vecs = [small_matrix(1, 4, rng.random())[0] for _ in range(6)]
    accepted = [v for v in vecs if ech.add(v)[0]]
    assert ech.rank == len(accepted) == rank(F7, vecs, 4) == cost.rref_pivots
    w = [F7.random(rng) for _ in range(4)]
    residual, coeffs = ech.reduce(w)
    # w = residual + sum coeffs[k] * accepted[k]
    acc = list(residual)
    for c, v in zip(coeffs, accepted):
        acc = F7.axpy(c, v, acc)
    assert acc == w
    assert (not any(residual)) == in_span(F7, accepted, w)


def test_monomials():
    assert mono_mul((1, 2), (0, 3)) == (1, 5)
    assert divides((1, 0), (1, 2)) and not divides((0, 3), (1, 2))
    assert mono_str((2, 0, 1)) == "X1^2*X3"
    assert mono_str((0, 0)) == "1"


def test_mpoly_arithmetic_and_translate():
    x, y = MPoly.var(F, 2, 0), MPoly.var(F, 2, 1)
    f = x * x * F(3) - x * y + MPoly.const(F, 2, F(5))
    assert f.lm() == (2, 0) and f.lc() == 3
    assert f.monic().lc() == 1
    assert f.evaluate([2, 7]) == F(3 * 4 - 14 + 5)
    g = f.translate([1, 2])
    assert g.evaluate([0, 0]) == f.evaluate([1, 2])
    assert g.evaluate([4, 9]) == f.evaluate([5, 11])
    assert MPoly.from_json(F, 2, f.to_json()) == f
    assert (f - f).is_zero() and f.total_degree() == 2
    assert f.format() == "3*X1^2 - X1*X2 + 5"
