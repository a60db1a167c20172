import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from seqdecomp.errors import DegreeTooLargeForChar, NotInvertible, NotOverPrimeField
from seqdecomp.field import make_extension, make_prime_field
from seqdecomp.unipoly import (
    UniPoly,
    berlekamp_massey,
    build_subproduct_tree,
    factor,
    gcd,
    invmod,
    is_irreducible,
    random_irreducible,
    shape_recover,
    squarefree_decomposition,
    squarefree_part,
    xgcd,
)

F = make_prime_field(10007)
F5 = make_prime_field(5)
polys = st.lists(st.integers(0, F.p - 1), min_size=0, max_size=8).map(lambda c: UniPoly(F, c))
nonzero = polys.filter(lambda f: not f.is_zero())


def P(*coeffs, ctx=F):
    return UniPoly.from_ints(ctx, coeffs)


def test_basics():
    x = UniPoly.x(F)
    f = x**2 - P(1)
    assert f.deg == 2 and f.coeffs == (F.p - 1, 0, 1)
    assert f(3) == 8
    assert (f // (x - P(1))) == x + P(1)
    assert f.format() == "X^2 - 1"
    assert UniPoly.from_json(F, f.to_json()) == f
    assert f.derivative() == x * F(2)
    assert UniPoly(F, []).deg == -1


def test_fibonacci_recurrence():
    F101 = make_prime_field(101)
    fib = [0, 1]
    while len(fib) < 20:
        fib.append((fib[-1] + fib[-2]) % 101)
    assert berlekamp_massey(fib, 10, F101).coeffs == (100, 100, 1)  # X^2 - X - 1


def test_berlekamp_massey_zero_and_geometric():
    assert berlekamp_massey([0] * 10, 5, F).is_one()
    assert berlekamp_massey([pow(7, i, F.p) for i in range(10)], 5, F) == P(-7, 1)


def test_factor_x2_minus_1_over_f5():
    fd = factor(P(4, 0, 1, ctx=F5))
    assert sorted(f.poly.coeffs for f in fd.factors) == [(1, 1), (4, 1)]  # X + 1 and X + 4 = X - 1
    assert all(f.e == 1 and f.f == 1 for f in fd.factors)


def test_factor_orders_multiple_factors_first():
    a, b, c = P(1, 1), P(2, 0, 1), P(3, 1)
    fd = factor(a * b**2 * c**3)
    assert sorted(f.e for f in fd.factors[:2]) == [2, 3] and fd.factors[2].e == 1
    assert fd.L == 2 and fd.K == 3
    assert fd.product() == a * b**2 * c**3


def test_factor_rejects_extension():
    L = make_extension(F5, [2, 1, 1])
    with pytest.raises(NotOverPrimeField):
        factor(UniPoly(L, [L.one, L.one]))


def test_squarefree_part_degree_limit():
    with pytest.raises(DegreeTooLargeForChar):
        squarefree_part(P(1, 0, 0, 0, 0, 1, ctx=F5))


def test_squarefree_decomposition_in_small_characteristic():
    # (X + 1)^5 = X^5 + 1 over F_5 has zero derivative
    f = P(1, 0, 0, 0, 0, 1, ctx=F5) * P(2, 1, ctx=F5)
    parts = squarefree_decomposition(f)
    assert sorted((g.coeffs, e) for g, e in parts) == [((1, 1), 5), ((2, 1), 1)]


def test_invmod_failure():
    with pytest.raises(NotInvertible):
        invmod(P(1, 1), P(1, 1) * P(2, 1))


def test_random_irreducible_and_subproduct_tree():
    rng = random.Random(1)
    leaves = [random_irreducible(F, d, rng) for d in (1, 2, 3, 1, 2)]
    assert all(is_irreducible(g) and g.deg == d for g, d in zip(leaves, (1, 2, 3, 1, 2)))
    tree = build_subproduct_tree(leaves)
    prod = UniPoly.one(F)
    for g in leaves:
        prod = prod * g
    assert tree.root.label == prod
    assert tree.depth == 3
    assert [leaf.index for leaf in tree.leaves] == list(range(5))


def test_shape_recover_on_points():
    rng = random.Random(2)
    xs = rng.sample(range(1, F.p), 4)
    ys = [F.random(rng) for _ in xs]
    w = [F.random(rng) or 1 for _ in xs]
    D = len(xs)
    s = [F.sum(F.mul(wi, pow(b, k, F.p)) for wi, b in zip(w, xs)) for k in range(2 * D)]
    t = [[F.sum(F.mul(F.mul(wi, a), pow(b, k, F.p)) for wi, a, b in zip(w, ys, xs)) for k in range(D)]]
    pmin, Prad, (G,) = shape_recover(s, t, D, F)
    assert pmin == Prad and all(pmin(b) == 0 for b in xs)
    assert [G(b) for b in xs] == ys


@given(polys, nonzero)
def test_divmod(a, b):
    q, r = divmod(a, b)
    assert q * b + r == a and r.deg < b.deg


@given(polys, polys)
def test_xgcd(a, b):
    g, s, t = xgcd(a, b)
    assert s * a + t * b == g
    assert g == gcd(a, b)
    if not g.is_zero():
        assert (a % g).is_zero() and (b % g).is_zero()


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(1, 3), st.integers(1, 3)), min_size=1, max_size=3), st.integers(0, 10**6))
def test_factor_reconstructs(shape, seed):
    rng = random.Random(seed)
    f = UniPoly.one(F)
    used: dict[UniPoly, int] = {}
    for d, e in shape:
        g = random_irreducible(F, d, rng)
        if g not in used:
            used[g] = e
            f = f * g**e
    fd = factor(f, seed)
    assert fd.product() == f
    assert all(is_irreducible(fac.poly) and fac.f == fac.poly.deg for fac in fd.factors)
    assert sorted((fac.poly.coeffs, fac.e) for fac in fd.factors) == sorted((g.coeffs, e) for g, e in used.items())


@settings(max_examples=40)
@given(st.lists(st.integers(0, F.p - 1), min_size=1, max_size=6), st.integers(0, 10**6))
def test_berlekamp_massey_recovers_recurrence(char, seed):
    c = UniPoly(F, list(char) + [F.one])  # monic recurrence of degree len(char)
    d = c.deg
    rng = random.Random(seed)
    seq = [F.random(rng) for _ in range(d)]
    while len(seq) < 2 * d + 4:
        i = len(seq) - d
        seq.append(F.neg(F.sum(F.mul(c.coeffs[j], seq[i + j]) for j in range(d))))
    m = berlekamp_massey(seq, d + 2, F)
    assert (c % m).is_zero()
    for i in range(len(seq) - m.deg):
        assert F.sum(F.mul(m.coeffs[j], seq[i + j]) for j in range(m.deg + 1)) == 0


def test_golden_minimal_polynomial():
    G = make_prime_field(10009)
    assert pow(G.p - 7, (G.p - 1) // 2, G.p) == G.p - 1
    f = P(4, 4, 5, 2, 1, ctx=G)
    fd = factor(f)
    assert [(fac.poly.coeffs, fac.e, fac.f) for fac in fd.factors] == [((2, 1, 1), 2, 2)]
    assert squarefree_part(f) == P(2, 1, 1, ctx=G)
    # mod 10007 the same polynomial splits into linear factors
    assert all(fac.f == 1 for fac in factor(P(4, 4, 5, 2, 1)).factors)
