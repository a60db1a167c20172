"""Exact dense linear algebra over a FieldCtx.

Two engines live here on purpose:

* :class:`Echelon`, an incremental semi-echelon basis with coefficient
  tracking, used by the annihilator algorithms;
* :func:`rref`, a textbook reduced row echelon form, used by the oracles.
"""

from __future__ import annotations

from typing import Sequence

from .errors import DivisionByZero
from .field import FieldCtx


class Echelon:
    """Span of a growing family of vectors.

    Each stored basis vector has a pivot with entry 1 and zeros at the pivots
    of the vectors stored before it, so one forward sweep reduces any vector.
    ``basis[k]`` is also kept as a combination of the *inserted* independent
    vectors, which lets :meth:`reduce` express a dependent vector in terms of
    them.
    """

    def __init__(self, ctx: FieldCtx, cost=None):
        self.ctx = ctx
        self.cost = cost
        self.pivots: list[int] = []
        self.vectors: list[list] = []
        self.combos: list[list] = []  # combo of inserted vectors, length = rank

    @property
    def rank(self) -> int:
        return len(self.vectors)

    def reduce(self, v: Sequence) -> tuple[list, list]:
        """Return ``(residual, coeffs)`` with ``v = residual + sum coeffs[k]*inserted[k]``."""
        ctx = self.ctx
        r = list(v)
        coeffs = [ctx.zero] * self.rank
        zero = ctx.zero
        for piv, w, combo in zip(self.pivots, self.vectors, self.combos):
            c = r[piv]
            if c == zero:
                continue
            r = ctx.axpy(ctx.neg(c), w, r)
            for k, a in enumerate(combo):
                if a != zero:
                    coeffs[k] = ctx.add(coeffs[k], ctx.mul(c, a))
        return r, coeffs

    def add(self, v: Sequence) -> tuple[bool, list]:
        """Insert ``v``; returns ``(independent, coeffs)``.

        For a dependent ``v`` the coefficients express it in the inserted
        vectors and nothing is stored.
        """
        ctx = self.ctx
        r, coeffs = self.reduce(v)
        zero = ctx.zero
        piv = next((i for i, x in enumerate(r) if x != zero), None)
        if piv is None:
            return False, coeffs
        inv = ctx.inv(r[piv])
        # r = v - sum coeffs*inserted  =>  stored = (v_new - sum coeffs*inserted) / r[piv]
        combo = [ctx.neg(ctx.mul(c, inv)) for c in coeffs] + [inv]
        for other in self.combos:
            other.append(zero)
        self.pivots.append(piv)
        self.vectors.append(ctx.scale_vec(inv, r))
        self.combos.append(combo)
        if self.cost is not None:
            self.cost.rref_pivots += 1
        return True, coeffs


def rref(ctx: FieldCtx, rows: Sequence[Sequence], ncols: int | None = None) -> tuple[list[list], list[int]]:
    """Reduced row echelon form; pivots scanned left to right, rows top to bottom."""
    m = [list(r) for r in rows]
    if ncols is None:
        ncols = len(m[0]) if m else 0
    zero = ctx.zero
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == len(m):
            break
        k = next((i for i in range(r, len(m)) if m[i][c] != zero), None)
        if k is None:
            continue
        m[r], m[k] = m[k], m[r]
        inv = ctx.inv(m[r][c])
        m[r] = ctx.scale_vec(inv, m[r])
        for i in range(len(m)):
            if i != r and m[i][c] != zero:
                m[i] = ctx.axpy(ctx.neg(m[i][c]), m[r], m[i])
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rank(ctx: FieldCtx, rows: Sequence[Sequence], ncols: int | None = None) -> int:
    return len(rref(ctx, rows, ncols)[1])


def nullspace(ctx: FieldCtx, rows: Sequence[Sequence], ncols: int) -> list[list]:
    """Basis of the right nullspace ``{x : A x = 0}``."""
    R, pivots = rref(ctx, rows, ncols)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for fcol in free:
        x = [ctx.zero] * ncols
        x[fcol] = ctx.one
        for row, pc in zip(R, pivots):
            x[pc] = ctx.neg(row[fcol])
        basis.append(x)
    return basis


def transpose(rows: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*rows)]


def matmul(ctx: FieldCtx, A: Sequence[Sequence], B: Sequence[Sequence]) -> list[list]:
    Bt = transpose(B)
    return [[ctx.dot(row, col) for col in Bt] for row in A]


def matvec(ctx: FieldCtx, A: Sequence[Sequence], v: Sequence) -> list:
    return [ctx.dot(row, v) for row in A]


def identity(ctx: FieldCtx, n: int) -> list[list]:
    return [[ctx.one if i == j else ctx.zero for j in range(n)] for i in range(n)]


def inverse(ctx: FieldCtx, A: Sequence[Sequence]) -> list[list]:
    n = len(A)
    aug = [list(row) + e for row, e in zip(A, identity(ctx, n))]
    R, pivots = rref(ctx, aug, n)
    if pivots != list(range(n)):
        raise DivisionByZero("matrix is singular")
    return [row[n:] for row in R]


def in_span(ctx: FieldCtx, vectors: Sequence[Sequence], v: Sequence) -> bool:
    """Whether ``v`` lies in the span of ``vectors``, via two rank computations."""
    if not any(x != ctx.zero for x in v):
        return True
    return rank(ctx, list(vectors) + [v]) == rank(ctx, vectors) if vectors else False
