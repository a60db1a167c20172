"""Sparse multivariate polynomials with lex order ``X_1 > ... > X_n``.

Monomials are exponent tuples; Python tuple comparison *is* the lex order
used throughout the package, so ``max(terms)`` is the leading monomial.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

from .field import FieldCtx
from .unipoly import UniPoly

Monomial = tuple[int, ...]


def unit(n: int, i: int) -> Monomial:
    return tuple(1 if k == i else 0 for k in range(n))


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_str(m: Monomial, names: Sequence[str] | None = None) -> str:
    names = names or [f"X{i + 1}" for i in range(len(m))]
    parts = []
    for name, e in zip(names, m):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts) or "1"


class MPoly:
    __slots__ = ("ctx", "n", "terms")

    def __init__(self, ctx: FieldCtx, n: int, terms: Mapping[Monomial, object] | None = None):
        self.ctx = ctx
        self.n = n
        z = ctx.zero
        self.terms = {tuple(m): c for m, c in (terms or {}).items() if c != z}

    # -- constructors -----------------------------------------------------
    @classmethod
    def var(cls, ctx: FieldCtx, n: int, i: int) -> "MPoly":
        return cls(ctx, n, {unit(n, i): ctx.one})

    @classmethod
    def const(cls, ctx: FieldCtx, n: int, c) -> "MPoly":
        return cls(ctx, n, {(0,) * n: c})

    @classmethod
    def monomial(cls, ctx: FieldCtx, m: Monomial, c=None) -> "MPoly":
        return cls(ctx, len(m), {m: ctx.one if c is None else c})

    @classmethod
    def from_univariate(cls, u: UniPoly, n: int, i: int) -> "MPoly":
        """Embed ``u`` as a polynomial in ``X_{i+1}``."""
        return cls(u.ctx, n, {tuple(k if j == i else 0 for j in range(n)): c for k, c in enumerate(u.coeffs)})

    @classmethod
    def from_ints(cls, ctx: FieldCtx, n: int, pairs: Iterable[tuple[Sequence[int], object]]) -> "MPoly":
        out: dict[Monomial, object] = {}
        for m, c in pairs:
            m = tuple(m)
            out[m] = ctx.add(out.get(m, ctx.zero), ctx(c))
        return cls(ctx, n, out)

    # -- inspection -------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def lm(self) -> Monomial:
        return max(self.terms)

    def lc(self):
        return self.terms[self.lm()]

    def monomials(self) -> list[Monomial]:
        return sorted(self.terms, reverse=True)

    def tail(self) -> "MPoly":
        lm = self.lm()
        return MPoly(self.ctx, self.n, {m: c for m, c in self.terms.items() if m != lm})

    def total_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MPoly):
            return NotImplemented
        return self.ctx == other.ctx and self.n == other.n and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.ctx, self.n, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        return f"MPoly({self.format()})"

    def format(self, names: Sequence[str] | None = None) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m in self.monomials():
            cs = self.ctx.format(self.terms[m])
            ms = mono_str(m, names)
            if ms == "1":
                parts.append(cs)
            elif cs == "1":
                parts.append(ms)
            elif cs == "-1":
                parts.append("-" + ms)
            else:
                parts.append(f"{cs}*{ms}")
        return " + ".join(parts).replace("+ -", "- ")

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other: "MPoly") -> "MPoly":
        ctx = self.ctx
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = ctx.add(out.get(m, ctx.zero), c)
        return MPoly(ctx, self.n, out)

    def __neg__(self) -> "MPoly":
        return MPoly(self.ctx, self.n, {m: self.ctx.neg(c) for m, c in self.terms.items()})

    def __sub__(self, other: "MPoly") -> "MPoly":
        return self + (-other)

    def __mul__(self, other) -> "MPoly":
        ctx = self.ctx
        if not isinstance(other, MPoly):
            return MPoly(ctx, self.n, {m: ctx.mul(c, other) for m, c in self.terms.items()})
        out: dict[Monomial, object] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                out[m] = ctx.add(out.get(m, ctx.zero), ctx.mul(c1, c2))
        return MPoly(ctx, self.n, out)

    def __pow__(self, e: int) -> "MPoly":
        out = MPoly.const(self.ctx, self.n, self.ctx.one)
        for _ in range(e):
            out = out * self
        return out

    def monic(self) -> "MPoly":
        return self * self.ctx.inv(self.lc())

    def change_ring(self, ctx: FieldCtx) -> "MPoly":
        return MPoly(ctx, self.n, {m: ctx.embed(c) for m, c in self.terms.items()})

    def translate(self, shift: Sequence) -> "MPoly":
        """``f(X_1 + s_1, ..., X_n + s_n)``."""
        ctx, n = self.ctx, self.n
        lin = [MPoly(ctx, n, {unit(n, i): ctx.one, (0,) * n: s}) for i, s in enumerate(shift)]
        powers: list[dict[int, MPoly]] = [{0: MPoly.const(ctx, n, ctx.one)} for _ in range(n)]

        def power(i: int, e: int) -> MPoly:
            cache = powers[i]
            if e not in cache:
                cache[e] = power(i, e - 1) * lin[i]
            return cache[e]

        out = MPoly(ctx, n)
        for m, c in self.terms.items():
            term = MPoly.const(ctx, n, c)
            for i, e in enumerate(m):
                if e:
                    term = term * power(i, e)
            out = out + term
        return out

    def evaluate(self, point: Sequence):
        ctx = self.ctx
        acc = ctx.zero
        for m, c in self.terms.items():
            v = c
            for x, e in zip(point, m):
                if e:
                    v = ctx.mul(v, ctx.pow(x, e))
            acc = ctx.add(acc, v)
        return acc

    # -- serialisation ----------------------------------------------------
    def to_json(self) -> list:
        """``[[exponents], coeff]`` pairs, lex-descending."""
        return [[list(m), self.ctx.to_json(self.terms[m])] for m in self.monomials()]

    @classmethod
    def from_json(cls, ctx: FieldCtx, n: int, obj: Sequence) -> "MPoly":
        return cls(ctx, n, {tuple(m): ctx.from_json(c) for m, c in obj})
