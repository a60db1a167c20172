"""Dense univariate polynomials over a :class:`~seqdecomp.field.FieldCtx`.

Besides ring arithmetic this module hosts the univariate machinery of the
decomposition: Berlekamp-Massey, squarefree parts, factorisation over F_p,
subproduct trees and the recovery of the radical parametrisation from
projection values.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

from .errors import DegreeTooLargeForChar, NotInvertible, NotOverPrimeField
from .field import FieldCtx


class UniPoly:
    """Immutable polynomial; ``coeffs`` is a low-to-high tuple without leading zeros."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: FieldCtx, coeffs: Sequence = ()):
        c = list(coeffs)
        z = ctx.zero
        while c and c[-1] == z:
            c.pop()
        self.ctx = ctx
        self.coeffs = tuple(c)

    # -- constructors -----------------------------------------------------
    @classmethod
    def from_ints(cls, ctx: FieldCtx, values: Sequence) -> "UniPoly":
        return cls(ctx, [ctx(v) for v in values])

    @classmethod
    def x(cls, ctx: FieldCtx) -> "UniPoly":
        return cls(ctx, [ctx.zero, ctx.one])

    @classmethod
    def const(cls, ctx: FieldCtx, c) -> "UniPoly":
        return cls(ctx, [ctx(c) if isinstance(c, int) else c])

    @classmethod
    def one(cls, ctx: FieldCtx) -> "UniPoly":
        return cls(ctx, [ctx.one])

    # -- inspection -------------------------------------------------------
    @property
    def deg(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return self.coeffs == (self.ctx.one,)

    @property
    def lc(self):
        return self.coeffs[-1] if self.coeffs else self.ctx.zero

    def __getitem__(self, i: int):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.ctx.zero

    def __len__(self) -> int:
        return len(self.coeffs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, UniPoly):
            return NotImplemented
        return self.ctx == other.ctx and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.ctx, self.coeffs))

    def __repr__(self) -> str:
        return f"UniPoly({self.format()})"

    def format(self, var: str = "X") -> str:
        ctx = self.ctx
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(self.deg, -1, -1):
            c = self.coeffs[i]
            if c == ctx.zero:
                continue
            cs = ctx.format(c)
            mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
            if not mono:
                parts.append(cs)
            elif cs == "1":
                parts.append(mono)
            elif cs == "-1":
                parts.append("-" + mono)
            else:
                parts.append(f"{cs}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other: "UniPoly") -> "UniPoly":
        ctx = self.ctx
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, y in enumerate(b):
            out[i] = ctx.add(out[i], y)
        return UniPoly(ctx, out)

    def __neg__(self) -> "UniPoly":
        return UniPoly(self.ctx, [self.ctx.neg(c) for c in self.coeffs])

    def __sub__(self, other: "UniPoly") -> "UniPoly":
        return self + (-other)

    def __mul__(self, other) -> "UniPoly":
        ctx = self.ctx
        if not isinstance(other, UniPoly):
            return UniPoly(ctx, [ctx.mul(c, other) for c in self.coeffs])
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return UniPoly(ctx)
        if ctx.is_prime_field:
            p = ctx.p
            out = [0] * (len(a) + len(b) - 1)
            for i, x in enumerate(a):
                if x:
                    for j, y in enumerate(b):
                        out[i + j] += x * y
            return UniPoly(ctx, [c % p for c in out])
        out = [ctx.zero] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x != ctx.zero:
                for j, y in enumerate(b):
                    out[i + j] = ctx.add(out[i + j], ctx.mul(x, y))
        return UniPoly(ctx, out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "UniPoly":
        result, base = UniPoly.one(self.ctx), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __divmod__(self, other: "UniPoly") -> tuple["UniPoly", "UniPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        ctx = self.ctx
        r = list(self.coeffs)
        db = other.deg
        inv_lc = ctx.inv(other.lc)
        q = [ctx.zero] * max(len(r) - db, 0)
        b = other.coeffs
        for k in range(len(r) - 1, db - 1, -1):
            c = r[k]
            if c == ctx.zero:
                continue
            c = ctx.mul(c, inv_lc)
            q[k - db] = c
            for i in range(db + 1):
                r[k - db + i] = ctx.sub(r[k - db + i], ctx.mul(c, b[i]))
        return UniPoly(ctx, q), UniPoly(ctx, r[:db] if db > 0 else [])

    def __floordiv__(self, other: "UniPoly") -> "UniPoly":
        return divmod(self, other)[0]

    def __mod__(self, other: "UniPoly") -> "UniPoly":
        return divmod(self, other)[1]

    def __call__(self, a):
        """Horner evaluation at a field element of the same context."""
        ctx = self.ctx
        acc = ctx.zero
        for c in reversed(self.coeffs):
            acc = ctx.add(ctx.mul(acc, a), c)
        return acc

    def monic(self) -> "UniPoly":
        if self.is_zero():
            return self
        return self * self.ctx.inv(self.lc)

    def derivative(self) -> "UniPoly":
        ctx = self.ctx
        return UniPoly(ctx, [ctx.scale(i, c) for i, c in enumerate(self.coeffs)][1:])

    def powmod(self, e: int, m: "UniPoly") -> "UniPoly":
        result, base = UniPoly.one(self.ctx) % m, self % m
        while e:
            if e & 1:
                result = (result * base) % m
            base = (base * base) % m
            e >>= 1
        return result

    def change_ring(self, ctx: FieldCtx) -> "UniPoly":
        """Embed coefficients into ``ctx`` (prime field -> extension)."""
        return UniPoly(ctx, [ctx.embed(c) for c in self.coeffs])

    # -- serialisation ----------------------------------------------------
    def to_json(self) -> list:
        return [self.ctx.to_json(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, ctx: FieldCtx, obj: Sequence) -> "UniPoly":
        return cls(ctx, [ctx.from_json(c) for c in obj])


# -- gcd and friends ----------------------------------------------------------

def gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Monic gcd; ``gcd(0, 0) = 0``."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def xgcd(a: UniPoly, b: UniPoly) -> tuple[UniPoly, UniPoly, UniPoly]:
    """Return ``(g, s, t)`` with ``s*a + t*b = g`` and ``g`` monic."""
    ctx = a.ctx
    r0, r1 = a, b
    s0, s1 = UniPoly.one(ctx), UniPoly(ctx)
    t0, t1 = UniPoly(ctx), UniPoly.one(ctx)
    while not r1.is_zero():
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return r0, s0, t0
    c = ctx.inv(r0.lc)
    return r0 * c, s0 * c, t0 * c


def invmod(a: UniPoly, m: UniPoly) -> UniPoly:
    g, s, _ = xgcd(a % m, m)
    if not g.is_one():
        raise NotInvertible(f"{a.format()} is not invertible modulo {m.format()}")
    return s % m


def squarefree_part(f: UniPoly) -> UniPoly:
    """``f / gcd(f, f')``, valid because we require ``deg f < p``."""
    if f.is_zero():
        raise ValueError("squarefree part of the zero polynomial")
    if f.deg >= f.ctx.p:
        raise DegreeTooLargeForChar(f"degree {f.deg} >= characteristic {f.ctx.p}")
    return (f // gcd(f, f.derivative())).monic()


# -- Berlekamp-Massey ---------------------------------------------------------

def berlekamp_massey(values: Sequence, bound: int, ctx: FieldCtx) -> UniPoly:
    """Monic minimal polynomial of the linearly recurrent sequence ``values``.

    The result ``c_0 + ... + c_d X^d`` satisfies ``sum_j c_j values[i + j] = 0``
    on the window ``values[:2*bound]``.  The zero sequence gives ``1``.
    """
    s = list(values[: 2 * bound])
    C, B = [ctx.one], [ctx.one]
    L, m, b = 0, 1, ctx.one
    for n, sn in enumerate(s):
        d = sn
        for i in range(1, L + 1):
            if i < len(C):
                d = ctx.add(d, ctx.mul(C[i], s[n - i]))
        if d == ctx.zero:
            m += 1
            continue
        coef = ctx.div(d, b)
        newC = list(C) + [ctx.zero] * max(0, len(B) + m - len(C))
        for i, bi in enumerate(B):
            newC[i + m] = ctx.sub(newC[i + m], ctx.mul(coef, bi))
        if 2 * L <= n:
            B, L, b, m = C, n + 1 - L, d, 1
        else:
            m += 1
        C = newC
    C = list(C) + [ctx.zero] * (L + 1 - len(C))
    return UniPoly(ctx, [C[L - k] for k in range(L + 1)])


# -- factorisation over F_p ---------------------------------------------------

class Factor(NamedTuple):
    poly: UniPoly
    e: int
    f: int


@dataclass
class FactorData:
    """Irreducible factorisation, factors with multiplicity >= 2 first."""

    factors: list[Factor]

    @property
    def K(self) -> int:
        return len(self.factors)

    @property
    def L(self) -> int:
        return sum(1 for fac in self.factors if fac.e >= 2)

    def product(self) -> UniPoly:
        ctx = self.factors[0].poly.ctx
        out = UniPoly.one(ctx)
        for fac in self.factors:
            out = out * fac.poly**fac.e
        return out

    def powers(self) -> list[UniPoly]:
        return [fac.poly**fac.e for fac in self.factors]


def _pth_root(f: UniPoly) -> UniPoly:
    p = f.ctx.p
    return UniPoly(f.ctx, f.coeffs[::p])


def squarefree_decomposition(f: UniPoly) -> list[tuple[UniPoly, int]]:
    """``f`` monic as ``prod g_i^i`` with squarefree, pairwise coprime ``g_i``."""
    out: list[tuple[UniPoly, int]] = []
    c = gcd(f, f.derivative())
    w = f // c
    i = 1
    while w.deg > 0:
        y = gcd(w, c)
        fac = w // y
        if fac.deg > 0:
            out.append((fac.monic(), i))
        w, c, i = y, c // y, i + 1
    if c.deg > 0:
        p = f.ctx.p
        out.extend((g, e * p) for g, e in squarefree_decomposition(_pth_root(c).monic()))
    return out


def _distinct_degree(g: UniPoly) -> list[tuple[UniPoly, int]]:
    ctx = g.ctx
    x = UniPoly.x(ctx)
    out, h, i = [], x, 1
    while g.deg >= 2 * i:
        h = h.powmod(ctx.p, g)
        d = gcd(h - x, g)
        if d.deg > 0:
            out.append((d, i))
            g = g // d
            h = h % g
        i += 1
    if g.deg > 0:
        out.append((g.monic(), g.deg))
    return out


def _equal_degree(g: UniPoly, d: int, rng: random.Random) -> list[UniPoly]:
    if g.deg == d:
        return [g]
    ctx = g.ctx
    e = (ctx.p**d - 1) // 2
    while True:
        a = UniPoly(ctx, [ctx.random(rng) for _ in range(g.deg)])
        if a.deg < 1:
            continue
        h = gcd(a, g)
        if 0 < h.deg < g.deg:
            break
        h = gcd(a.powmod(e, g) - UniPoly.one(ctx), g)
        if 0 < h.deg < g.deg:
            break
    return _equal_degree(h, d, rng) + _equal_degree((g // h).monic(), d, rng)


def _factor_key(fac: Factor):
    return (0 if fac.e >= 2 else 1, fac.f, fac.e, fac.poly.coeffs)


def factor(f: UniPoly, seed: int = 0) -> FactorData:
    """Irreducible factorisation of a monic polynomial over a prime field."""
    if not f.ctx.is_prime_field:
        raise NotOverPrimeField("factorisation is only implemented over F_p")
    if f.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    rng = random.Random(seed)
    facs: list[Factor] = []
    for g, e in squarefree_decomposition(f.monic()):
        for h, d in _distinct_degree(g):
            for q in _equal_degree(h, d, rng):
                facs.append(Factor(q, e, q.deg))
    facs.sort(key=_factor_key)
    return FactorData(facs)


def is_irreducible(f: UniPoly) -> bool:
    if f.deg < 1:
        return False
    fd = factor(f.monic())
    return fd.K == 1 and fd.factors[0].e == 1


def random_irreducible(ctx: FieldCtx, degree: int, rng: random.Random) -> UniPoly:
    while True:
        f = UniPoly(ctx, [ctx.random(rng) for _ in range(degree)] + [ctx.one])
        if is_irreducible(f):
            return f


# -- subproduct trees ----------------------------------------------------------

@dataclass
class TreeNode:
    label: UniPoly
    left: "TreeNode | None" = None
    right: "TreeNode | None" = None
    index: int | None = None  # leaf position

    @property
    def is_leaf(self) -> bool:
        return self.left is None


@dataclass
class SubproductTree:
    root: TreeNode
    leaves: list[TreeNode] = field(default_factory=list)

    @property
    def depth(self) -> int:
        def walk(node: TreeNode) -> int:
            return 0 if node.is_leaf else 1 + max(walk(node.left), walk(node.right))

        return walk(self.root)


def build_subproduct_tree(leaves: Sequence[UniPoly]) -> SubproductTree:
    """Balanced binary tree whose inner nodes carry the product of their leaves."""
    if not leaves:
        raise ValueError("subproduct tree needs at least one leaf")
    nodes = [TreeNode(poly, index=i) for i, poly in enumerate(leaves)]

    def build(lo: int, hi: int) -> TreeNode:
        if hi - lo == 1:
            return nodes[lo]
        mid = (lo + hi + 1) // 2
        left, right = build(lo, mid), build(mid, hi)
        return TreeNode(left.label * right.label, left, right)

    return SubproductTree(build(0, len(nodes)), nodes)


# -- radical parametrisation --------------------------------------------------

def _numerator(seq: Sequence, P: UniPoly) -> UniPoly:
    """Polynomial part of ``P(T) * sum_i seq[i] T^(-i-1)``."""
    ctx = P.ctx
    d = P.deg
    out = []
    for m in range(d):
        out.append(ctx.sum(ctx.mul(P.coeffs[k], seq[k - 1 - m]) for k in range(m + 1, d + 1)))
    return UniPoly(ctx, out)


def shape_recover(
    s: Sequence, t: Sequence[Sequence], D: int, ctx: FieldCtx
) -> tuple[UniPoly, UniPoly, list[UniPoly]]:
    """Recover ``(P_min, P, [G_1..G_{n-1}])`` from power projections.

    ``s[i] = l(X_n^i)`` for ``i < 2D`` and ``t[j][i] = l(X_{j+1} X_n^i)`` for
    ``i < D``.  Each sequence is first multiplied by ``P_min / P`` (so that it
    satisfies the squarefree recurrence ``P``); then
    ``G_j = N_j / N mod P`` with ``N, N_j`` the numerators of the generating
    fractions of the reduced sequences.
    """
    pmin = berlekamp_massey(s, D, ctx)
    if pmin.deg < 1:
        raise NotInvertible("projection sequence is zero; the linear form is degenerate")
    P = squarefree_part(pmin)
    Q = pmin // P
    d = P.deg

    def reduce(seq: Sequence) -> list:
        return [ctx.sum(ctx.mul(qk, seq[i + k]) for k, qk in enumerate(Q.coeffs)) for i in range(d)]

    N = _numerator(reduce(s), P)
    Ninv = invmod(N, P)
    G = [(_numerator(reduce(tj), P) * Ninv) % P for tj in t]
    return pmin, P, G
