"""Brute-force references for testing and for ``verify``.

Everything here uses dense vectors obtained by direct repeated products and
the textbook :func:`~seqdecomp.linalg.rref`; nothing shares code paths with
the monomial cache or the incremental echelon used by the algorithms, and
no costs are counted.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .annihilator import LexGB, border_minimal, is_order_ideal
from .errors import BoundTooSmall, RankDeficient
from .field import FieldCtx
from .linalg import in_span, nullspace, rank, rref, transpose
from .mpoly import Monomial, MPoly, mono_mul, unit
from .quotient import ExplicitSequences, IdealInstance
from .unipoly import UniPoly


class DenseVectors:
    """Memoised ``M^m v`` computed without the algorithms' cache."""

    def __init__(self, inst: IdealInstance, start: Sequence | None = None):
        self.inst = inst
        self.start = list(inst.one if start is None else start)
        self.memo: dict[Monomial, list] = {}

    def __call__(self, m: Monomial) -> list:
        m = tuple(m)
        if m not in self.memo:
            if not any(m):
                self.memo[m] = list(self.start)
            else:
                j = max(i for i, e in enumerate(m) if e)
                prev = m[:j] + (m[j] - 1,) + m[j + 1 :]
                self.memo[m] = self.inst.matrices[j].matvec(self(prev))
        return self.memo[m]


def dense_sequences(inst: IdealInstance, forms: Sequence[Sequence]) -> ExplicitSequences:
    vec = DenseVectors(inst)
    ctx = inst.field
    return ExplicitSequences(ctx, inst.n, [lambda m, w=list(w): ctx.dot(w, vec(m)) for w in forms])


def _solve(ctx: FieldCtx, cols: Sequence[Sequence], v: Sequence) -> list | None:
    """Coefficients ``c`` with ``sum c_k cols[k] = v`` for independent ``cols``, else ``None``."""
    k = len(cols)
    if k == 0:
        return [] if all(x == ctx.zero for x in v) else None
    rows = transpose(list(cols) + [list(v)])
    R, pivots = rref(ctx, rows, k + 1)
    if k in pivots:
        return None
    return [R[pivots.index(c)][k] for c in range(k)]


def fglm_lex(inst: IdealInstance) -> LexGB:
    """Lex GB of the ideal of ``inst`` by FGLM on dense vectors ``M^b v_1``."""
    ctx, n = inst.field, inst.n
    vec = DenseVectors(inst)
    staircase: list[Monomial] = []
    vectors: list[list] = []
    gens: list[MPoly] = []
    lms: list[Monomial] = []
    todo = {(0,) * n}
    while todo:
        b = min(todo)
        todo.discard(b)
        if any(all(x <= y for x, y in zip(lm, b)) for lm in lms):
            continue
        v = vec(b)
        coeffs = _solve(ctx, vectors, v)
        if coeffs is None:
            staircase.append(b)
            vectors.append(v)
            todo.update(mono_mul(b, unit(n, i)) for i in range(n))
        else:
            terms = {b: ctx.one}
            for m, c in zip(staircase, coeffs):
                if c != ctx.zero:
                    terms[m] = ctx.neg(c)
            gens.append(MPoly(ctx, n, terms))
            lms.append(b)
    return LexGB(ctx, n, sorted(gens, key=MPoly.lm), sorted(staircase))


def monomial_basis(inst: IdealInstance) -> list[Monomial]:
    """A monomial basis of Q: the labels when present, else the lex staircase."""
    if inst.labels is not None:
        return list(inst.labels)
    return fglm_lex(inst).staircase


def _monomials_up_to(n: int, d: int) -> list[Monomial]:
    out: list[Monomial] = []

    def rec(prefix: tuple, left: int) -> None:
        if len(prefix) == n:
            out.append(prefix)
            return
        for e in range(left + 1):
            rec(prefix + (e,), left - e)

    rec((), d)
    return sorted(out)


def brute_hankel_ann(forms, inst: IdealInstance | None = None, d: int | None = None) -> LexGB:
    """Lex GB of ``ann(u_1..u_t)`` from one truncated multi-Hankel matrix.

    Rows are indexed by ``(b', i)`` and columns by ``b``, both over all
    monomials of degree ``<= d``; the pivot columns of the RREF form the
    staircase and each border monomial is read off its RREF column.
    ``forms`` is a list of linear forms on ``inst`` or, with ``inst=None``,
    a sequence family (then ``d`` is required).
    """
    if inst is not None:
        seqs = dense_sequences(inst, forms)
        d = inst.dim if d is None else d
    else:
        seqs = forms
        if d is None:
            raise ValueError("a degree bound is required for a bare sequence family")
    ctx, n = seqs.ctx, seqs.n
    monos = _monomials_up_to(n, d)
    rows = []
    for bp in monos:
        vals = [seqs.values(mono_mul(b, bp)) for b in monos]
        for i in range(seqs.t):
            rows.append([v[i] for v in vals])
    R, pivots = rref(ctx, rows, len(monos))
    staircase = [monos[c] for c in pivots]
    if not staircase:
        return LexGB.unit_ideal(ctx, n)
    if not is_order_ideal(staircase):
        raise BoundTooSmall("pivot monomials are not closed under division")
    index = {m: c for c, m in enumerate(monos)}
    gens = []
    for b in border_minimal(staircase, n):
        if b not in index:
            raise BoundTooSmall(f"border monomial {b} exceeds degree {d}")
        c = index[b]
        terms = {b: ctx.one}
        for row, pc in zip(R, pivots):
            if row[c] != ctx.zero:
                terms[monos[pc]] = ctx.neg(row[c])
        gens.append(MPoly(ctx, n, terms))
    return LexGB(ctx, n, sorted(gens, key=MPoly.lm), sorted(staircase))


@dataclass
class KernelMatrix:
    basis: list[Monomial]
    matrix: list[list]
    kernel: list[list]

    @property
    def rank(self) -> int:
        return len(self.matrix) - len(self.kernel)

    def is_symmetric(self) -> bool:
        return self.matrix == transpose(self.matrix)


def k_matrix(form: Sequence, inst: IdealInstance, basis: Sequence[Monomial] | None = None) -> KernelMatrix:
    """``K[i][j] = l(b_i b_j)``, computed as ``l(M^(b_i) (M^(b_j) v_1))``.

    The inner vector is built along one divisor chain and the outer product
    along another, so symmetry is a genuine check of commutativity.
    """
    ctx = inst.field
    basis = list(basis) if basis is not None else monomial_basis(inst)
    inner = DenseVectors(inst)
    K = []
    for bi in basis:
        row = []
        for bj in basis:
            row.append(ctx.dot(form, DenseVectors(inst, inner(bj))(bi)))
        K.append(row)
    return KernelMatrix(basis, K, nullspace(ctx, K, len(basis)))


def stacked_rank(forms: Sequence[Sequence], inst: IdealInstance, basis: Sequence[Monomial] | None = None) -> int:
    """Rank of ``[K_l1 | ... | K_lt]``."""
    basis = list(basis) if basis is not None else monomial_basis(inst)
    mats = [k_matrix(w, inst, basis).matrix for w in forms]
    rows = [sum((M[r] for M in mats), []) for r in range(len(basis))]
    return rank(inst.field, rows)


def tau_estimate(inst: IdealInstance, seed: int = 0, max_t: int | None = None, trials: int = 3) -> int:
    """Smallest ``t`` for which ``t`` random forms give stacked rank ``D``, minimised over trials."""
    D = inst.dim
    max_t = D if max_t is None else max_t
    basis = monomial_basis(inst)
    best = None
    for trial in range(trials):
        rng = random.Random(seed * 1000 + trial)
        forms: list[list] = []
        for t in range(1, max_t + 1):
            forms.append(inst.field.random_vec(D, rng))
            if stacked_rank(forms, inst, basis) == D:
                best = t if best is None else min(best, t)
                break
    if best is None:
        raise RankDeficient(f"stacked K-matrices never reach rank {D} with {max_t} forms")
    return best


def membership(inst: IdealInstance, g: MPoly, pk_power: UniPoly) -> bool:
    """Whether ``g`` lies in ``I + <pk_power(X_n)>``."""
    ctx, n = inst.field, inst.n
    if g.ctx != ctx:
        g = g.change_ring(ctx)
    if pk_power.ctx != ctx:
        pk_power = pk_power.change_ring(ctx)
    vec = DenseVectors(inst)
    nf = ctx.zero_vec(inst.dim)
    for m, c in g.terms.items():
        nf = ctx.axpy(c, vec(m), nf)
    w = ctx.zero_vec(inst.dim)
    for k, c in enumerate(pk_power.coeffs):
        w = ctx.axpy(c, vec(tuple(k if i == n - 1 else 0 for i in range(n))), w)
    wvec = DenseVectors(inst, w)
    span = [wvec(b) for b in monomial_basis(inst)]
    return in_span(ctx, span, nf)


def poly_matrix_rank(inst: IdealInstance, T: UniPoly) -> int:
    """Rank of ``T(M_n)``, the matrix of ``l -> T . l`` in dual coordinates."""
    ctx, n, D = inst.field, inst.n, inst.dim
    if T.ctx != ctx:
        T = T.change_ring(ctx)
    cols = []
    for k in range(D):
        e = [ctx.zero] * D
        e[k] = ctx.one
        acc = ctx.zero_vec(D)
        v = e
        for c in T.coeffs:
            acc = ctx.axpy(c, v, acc)
            v = inst.matrices[n - 1].matvec(v)
        cols.append(acc)
    return rank(ctx, cols)


def gb_members(inst: IdealInstance, gb: LexGB, pk_power: UniPoly) -> bool:
    return all(membership(inst, g, pk_power) for g in gb.generators)
