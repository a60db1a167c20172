"""Lex Gröbner bases of annihilators of linearly recurrent sequences.

Two algorithms:

* :func:`mmm_ann` walks monomials in increasing lex order, FGLM style, and
  tests each new monomial's value vector ``(<u_i | b w>)_{i, w}`` for
  membership in the span of the staircase vectors.  The shifts ``w`` are
  those needed to close the span of the forms under multiplication.
* :func:`generic_ann` works variable by variable from ``X_n`` up to ``X_1``,
  taking the lex-smallest column basis of truncated multi-Hankel matrices.
  It needs a degree bound ``B`` and generic sequences; otherwise it may raise
  :class:`~seqdecomp.errors.AnnihilatorFail`.

:func:`generic_ann` also accepts a bare *sequence family*: any object with
``ctx``, ``n``, ``t`` and ``values(monomial) -> list``.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Sequence

from .errors import AnnihilatorFail
from .field import FieldCtx
from .linalg import Echelon
from .mpoly import Monomial, MPoly, divides, mono_mul, unit
from .quotient import CostCounter, FormSequences, IdealInstance, MonomialCache
from .unipoly import UniPoly


@dataclass
class LexGB:
    """Reduced lex Gröbner basis (``X_1 > ... > X_n``) with its staircase."""

    ctx: FieldCtx
    n: int
    generators: list[MPoly]
    staircase: list[Monomial]
    window: list[Monomial] | None = field(default=None, compare=False, repr=False)

    @classmethod
    def from_generators(cls, gens: Sequence[MPoly], ctx: FieldCtx | None = None, n: int | None = None) -> "LexGB":
        """Normalise (monic, sorted) and derive the staircase from the leading monomials."""
        if gens:
            ctx, n = gens[0].ctx, gens[0].n
        gens = sorted((g.monic() for g in gens), key=MPoly.lm)
        return cls(ctx, n, gens, staircase_of([g.lm() for g in gens], n))

    @classmethod
    def unit_ideal(cls, ctx: FieldCtx, n: int) -> "LexGB":
        return cls(ctx, n, [MPoly.const(ctx, n, ctx.one)], [])

    @property
    def degree(self) -> int:
        return len(self.staircase)

    def leading_monomials(self) -> list[Monomial]:
        return [g.lm() for g in self.generators]

    def is_reduced(self) -> bool:
        lms = self.leading_monomials()
        for g in self.generators:
            if g.lc() != self.ctx.one:
                return False
            for m in g.tail().terms:
                if any(divides(lm, m) for lm in lms):
                    return False
        return True

    def staircase_is_order_ideal(self) -> bool:
        return is_order_ideal(self.staircase)

    def reduce(self, f: MPoly) -> MPoly:
        """Remainder of ``f`` on division by the basis (normal form modulo the ideal)."""
        ctx = self.ctx
        gens = [(g.lm(), g) for g in self.generators]
        p = MPoly(ctx, self.n, f.terms)
        rem: dict[Monomial, object] = {}
        while not p.is_zero():
            m = p.lm()
            c = p.terms[m]
            for lm, g in gens:
                if divides(lm, m):
                    q = tuple(a - b for a, b in zip(m, lm))
                    p = p - g * MPoly.monomial(ctx, q, c)
                    break
            else:
                rem[m] = c
                del p.terms[m]
        return MPoly(ctx, self.n, rem)

    def format(self, names: Sequence[str] | None = None) -> list[str]:
        return [g.format(names) for g in self.generators]

    def to_json(self) -> dict:
        return {"generators": [g.to_json() for g in self.generators], "staircase": [list(m) for m in self.staircase]}

    @classmethod
    def from_json(cls, ctx: FieldCtx, n: int, obj: dict) -> "LexGB":
        gens = [MPoly.from_json(ctx, n, g) for g in obj["generators"]]
        return cls(ctx, n, gens, [tuple(m) for m in obj["staircase"]])


def staircase_of(lms: Sequence[Monomial], n: int, limit: int = 1_000_000) -> list[Monomial]:
    """Monomials outside the monomial ideal generated by ``lms`` (must be finite)."""
    if any(sum(m) == 0 for m in lms):
        return []
    if any(not any(m[i] and sum(m) == m[i] for m in lms) for i in range(n)):
        raise ValueError("ideal is not zero-dimensional")
    seen = {(0,) * n}
    todo = [(0,) * n]
    while todo:
        m = todo.pop()
        for i in range(n):
            c = mono_mul(m, unit(n, i))
            if c in seen or any(divides(lm, c) for lm in lms):
                continue
            seen.add(c)
            todo.append(c)
            if len(seen) > limit:
                raise ValueError("ideal is not zero-dimensional")
    return sorted(seen)


def is_order_ideal(monos: Sequence[Monomial]) -> bool:
    s = set(monos)
    for m in s:
        for j, e in enumerate(m):
            if e and m[:j] + (e - 1,) + m[j + 1 :] not in s:
                return False
    return True


def border_minimal(staircase: Sequence[Monomial], n: int) -> list[Monomial]:
    """Monomials ``X_i b`` outside the staircase all of whose divisors ``m/X_j`` are in it."""
    if not staircase:
        return [(0,) * n]
    s = set(staircase)
    out = set()
    for b in staircase:
        for i in range(n):
            c = mono_mul(b, unit(n, i))
            if c in s:
                continue
            if all(c[:j] + (e - 1,) + c[j + 1 :] in s for j, e in enumerate(c) if e):
                out.add(c)
    return sorted(out)


def _as_family(forms, inst: IdealInstance | None, cost: CostCounter | None):
    if inst is None:
        return forms
    forms = list(forms)
    if not forms:
        raise ValueError("at least one linear form is required")
    return FormSequences(forms, cache=MonomialCache(inst, cost))


def _relation(ctx: FieldCtx, b: Monomial, basis: Sequence[Monomial], coeffs: Sequence, n: int) -> MPoly:
    terms = {b: ctx.one}
    for m, c in zip(basis, coeffs):
        if c != ctx.zero:
            terms[m] = ctx.neg(c)
    return MPoly(ctx, n, terms)


# -- MMM-style algorithm --------------------------------------------------------

class DualClosure:
    """Span of linear forms closed under the shifts ``w -> w M_j``.

    Its basis ``F`` plays the role of the evaluation set: the vector of a
    monomial ``b`` is ``(f(M^b v_1))_{f in F}``, i.e. the values
    ``<u_i | b w>`` over the shifts ``w`` that contribute new forms.  Under
    the closure hypothesis the input forms already span ``F`` and no shift
    is ever kept.
    """

    def __init__(self, inst: IdealInstance, cost: CostCounter | None = None):
        self.inst = inst
        self.cost = cost
        self.echelon = Echelon(inst.field)
        self.basis: list[list] = []

    def add(self, form: Sequence) -> None:
        if len(form) != self.inst.dim:
            raise ValueError(f"form has length {len(form)}, expected {self.inst.dim}")
        todo = [list(form)]
        while todo:
            w = todo.pop(0)
            if self.echelon.add(w)[0]:
                self.basis.append(w)
                todo.extend(self.inst.mul_form(w, j, self.cost) for j in range(self.inst.n))


class IncrementalMMM:
    """:func:`mmm_ann` over a growing list of forms on one instance.

    The dual closure only grows and the vectors ``M^b v_1`` live in a shared
    :class:`MonomialCache`; the monomial-side echelon form is rebuilt on every
    call, which is cheap next to the sequence evaluations.
    """

    def __init__(self, cache: MonomialCache):
        self.cache = cache
        self.closure = DualClosure(cache.inst, cache.cost)
        self.forms: list[list] = []
        self._values: dict[Monomial, list] = {}

    @property
    def t(self) -> int:
        return len(self.forms)

    def _vector(self, b: Monomial) -> list:
        vals = self._values.setdefault(b, [])
        basis = self.closure.basis
        if len(vals) < len(basis):
            ctx = self.cache.inst.field
            v = self.cache.vector(b)
            fresh = basis[len(vals) :]
            vals.extend(ctx.dot(f, v) for f in fresh)
            self.cache.cost.dot += len(fresh)
        return vals

    def push(self, form: Sequence) -> None:
        """Record a form without recomputing the basis."""
        self.forms.append(list(form))
        self.closure.add(form)

    def add_form(self, form: Sequence) -> LexGB:
        self.push(form)
        return self.run()

    def run(self) -> LexGB:
        inst = self.cache.inst
        ctx, n = inst.field, inst.n
        if not self.forms:
            raise ValueError("at least one linear form is required")
        ech = Echelon(ctx, self.cache.cost)
        one = (0,) * n
        if not ech.add(self._vector(one))[0]:
            return LexGB.unit_ideal(ctx, n)
        staircase = [one]
        gens: list[MPoly] = []
        lms: list[Monomial] = []
        heap = [unit(n, i) for i in range(n)]
        heapq.heapify(heap)
        queued = set(heap)
        while heap:
            b = heapq.heappop(heap)
            if any(divides(lm, b) for lm in lms):
                continue
            independent, coeffs = ech.add(self._vector(b))
            if independent:
                staircase.append(b)
                for i in range(n):
                    c = mono_mul(b, unit(n, i))
                    if c not in queued:
                        queued.add(c)
                        heapq.heappush(heap, c)
            else:
                gens.append(_relation(ctx, b, staircase, coeffs, n))
                lms.append(b)
        return LexGB(ctx, n, sorted(gens, key=MPoly.lm), sorted(staircase))


def mmm_ann(
    forms: Sequence[Sequence], inst: IdealInstance, cost: CostCounter | None = None, cache: MonomialCache | None = None
) -> LexGB:
    """Lex GB of ``ann(u_1..u_t)`` by an FGLM-style walk over monomials.

    Monomials are visited in increasing lex order among the multiples
    ``X_i b`` of accepted staircase monomials; each one is either accepted or
    yields the relation ``b - sum c_k b_k``.
    """
    forms = list(forms)
    if not forms:
        raise ValueError("at least one linear form is required")
    if cache is None:
        cache = MonomialCache(inst, cost)
    state = IncrementalMMM(cache)
    for f in forms:
        state.push(f)
    return state.run()


def mmm_ann_incremental(state: IncrementalMMM, new_form: Sequence) -> tuple[IncrementalMMM, LexGB]:
    return state, state.add_form(new_form)


# -- genericity-based algorithm ---------------------------------------------------

def _column(seqs, b: Monomial, rows: Sequence[Monomial]) -> list:
    col = []
    for r in rows:
        col.extend(seqs.values(mono_mul(b, r)))
    return col


def generic_ann(
    forms,
    inst: IdealInstance | None = None,
    B: int = 1,
    known_last_minpoly: UniPoly | None = None,
    cost: CostCounter | None = None,
) -> LexGB:
    """Lex GB of ``ann(u_1..u_t)`` under the bound ``B`` and genericity.

    For ``j = n..1`` the candidate set ``C = B'_{j+1} x (1, X_j, .., X_j^(B-1))``
    indexes both rows (together with the sequence index) and columns of a
    multi-Hankel matrix; its lex-first column basis is ``B'_j``.  With
    ``known_last_minpoly`` the ``X_n`` pass is replaced by the powers of
    ``X_n`` below its degree.  Border monomials are then rewritten on
    ``B'_1``; an irreducible column raises :class:`AnnihilatorFail`.
    """
    seqs = _as_family(forms, inst, cost)
    if seqs.t == 0:
        raise ValueError("at least one sequence is required")
    if B < 1:
        raise ValueError("B must be positive")
    ctx, n = seqs.ctx, seqs.n
    cost = cost if cost is not None else getattr(seqs, "cost", None)

    if known_last_minpoly is not None:
        d = known_last_minpoly.deg
        if n == 1:
            return LexGB.from_generators([MPoly.from_univariate(known_last_minpoly.monic(), 1, 0)])
        basis = [tuple(k if i == n - 1 else 0 for i in range(n)) for k in range(d)]
        first = n - 2
    else:
        basis = [(0,) * n]
        first = n - 1

    rows: list[Monomial] = []
    ech = Echelon(ctx, cost)
    for j in range(first, -1, -1):
        assert all(b[j] == 0 for b in basis)
        rows = sorted(tuple(e + k if i == j else e for i, e in enumerate(b)) for b in basis for k in range(B))
        ech = Echelon(ctx, cost)
        basis = [b for b in rows if ech.add(_column(seqs, b, rows))[0]]
        if not basis:
            return LexGB.unit_ideal(ctx, n)

    if not is_order_ideal(basis):
        raise AnnihilatorFail("pivot monomials do not form an order ideal")
    gens = []
    for b in border_minimal(basis, n):
        residual, coeffs = ech.reduce(_column(seqs, b, rows))
        if any(x != ctx.zero for x in residual):
            raise AnnihilatorFail(f"column of {b} is not in the span of the staircase columns")
        if any(c != ctx.zero and m > b for m, c in zip(basis, coeffs)):
            raise AnnihilatorFail(f"relation for {b} involves larger staircase monomials")
        gens.append(_relation(ctx, b, basis, coeffs, n))
    return LexGB(ctx, n, sorted(gens, key=MPoly.lm), sorted(basis), window=rows)
