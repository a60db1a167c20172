"""The quotient algebra Q = K[X]/I as a black box.

An :class:`IdealInstance` stores the multiplication matrices ``M_1..M_n`` in
sparse form and the coordinate vector of ``1``.  Elements of Q are column
vectors, linear forms on Q are row vectors (plain lists).  All matrix-vector
products performed by the algorithms are tallied in a :class:`CostCounter`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .errors import DimensionMismatch, NonCommuting, SchemaError
from .field import FieldCtx, field_from_json
from .mpoly import Monomial, MPoly
from .unipoly import FactorData, UniPoly, build_subproduct_tree


LinearForm = list


@dataclass
class CostCounter:
    matvec: int = 0
    dot: int = 0
    rref_pivots: int = 0

    def snapshot(self) -> "CostCounter":
        return CostCounter(self.matvec, self.dot, self.rref_pivots)

    def since(self, start: "CostCounter") -> dict:
        return {
            "matvec": self.matvec - start.matvec,
            "dot": self.dot - start.dot,
            "rref_pivots": self.rref_pivots - start.rref_pivots,
        }

    def as_dict(self) -> dict:
        return {"matvec": self.matvec, "dot": self.dot, "rref_pivots": self.rref_pivots}


class SparseMatrix:
    """Square matrix kept both row-major (for ``M v``) and column-major (for ``w M``)."""

    __slots__ = ("ctx", "dim", "rows", "cols")

    def __init__(self, ctx: FieldCtx, dim: int, triplets: Iterable[tuple[int, int, object]]):
        self.ctx = ctx
        self.dim = dim
        entries: dict[tuple[int, int], object] = {}
        for r, c, v in triplets:
            if not (0 <= r < dim and 0 <= c < dim):
                raise DimensionMismatch(f"entry ({r}, {c}) outside a {dim}x{dim} matrix")
            if (r, c) in entries:
                raise SchemaError(f"duplicate entry ({r}, {c})")
            if v != ctx.zero:
                entries[(r, c)] = v
        self.rows: list[list[tuple[int, object]]] = [[] for _ in range(dim)]
        self.cols: list[list[tuple[int, object]]] = [[] for _ in range(dim)]
        for (r, c), v in sorted(entries.items()):
            self.rows[r].append((c, v))
            self.cols[c].append((r, v))

    @classmethod
    def from_dense(cls, ctx: FieldCtx, A: Sequence[Sequence]) -> "SparseMatrix":
        n = len(A)
        return cls(ctx, n, ((r, c, v) for r, row in enumerate(A) for c, v in enumerate(row) if v != ctx.zero))

    @property
    def nnz(self) -> int:
        return sum(len(r) for r in self.rows)

    def triplets(self) -> list[tuple[int, int, object]]:
        return [(r, c, v) for r, row in enumerate(self.rows) for c, v in row]

    def dense(self) -> list[list]:
        out = [[self.ctx.zero] * self.dim for _ in range(self.dim)]
        for r, c, v in self.triplets():
            out[r][c] = v
        return out

    def matvec(self, v: Sequence) -> list:
        ctx = self.ctx
        if ctx.is_prime_field:
            p = ctx.p
            return [sum(a * v[c] for c, a in row) % p for row in self.rows]
        return [ctx.sum(ctx.mul(a, v[c]) for c, a in row) for row in self.rows]

    def vecmat(self, w: Sequence) -> list:
        ctx = self.ctx
        if ctx.is_prime_field:
            p = ctx.p
            return [sum(w[r] * a for r, a in col) % p for col in self.cols]
        return [ctx.sum(ctx.mul(w[r], a) for r, a in col) for col in self.cols]


@dataclass(frozen=True)
class IdealInstance:
    field: FieldCtx
    n: int
    dim: int
    matrices: tuple[SparseMatrix, ...]
    one: tuple
    labels: tuple[Monomial, ...] | None = None

    def mul_vec(self, i: int, v: Sequence, cost: CostCounter | None = None) -> list:
        """``M_{i+1} v`` (multiply an element of Q by ``X_{i+1}``)."""
        if cost is not None:
            cost.matvec += 1
        return self.matrices[i].matvec(v)

    def mul_form(self, w: Sequence, i: int, cost: CostCounter | None = None) -> list:
        """``w M_{i+1}``, the linear form ``X_{i+1} . w``."""
        if cost is not None:
            cost.matvec += 1
        return self.matrices[i].vecmat(w)

    def extend(self, ctx: FieldCtx) -> "IdealInstance":
        """The same algebra with scalars extended to ``ctx``."""
        if ctx == self.field:
            return self
        mats = tuple(
            SparseMatrix(ctx, self.dim, ((r, c, ctx.embed(v)) for r, c, v in M.triplets())) for M in self.matrices
        )
        return IdealInstance(ctx, self.n, self.dim, mats, tuple(ctx.embed(v) for v in self.one), self.labels)

    def shifted(self, shift: Sequence) -> "IdealInstance":
        """Matrices ``M_i - shift_i * Id``: sequences become ``l((X - shift)^m)``."""
        ctx = self.field
        mats = []
        for M, s in zip(self.matrices, shift):
            entries = {(r, c): v for r, c, v in M.triplets()}
            for k in range(self.dim):
                entries[(k, k)] = ctx.sub(entries.get((k, k), ctx.zero), s)
            mats.append(SparseMatrix(ctx, self.dim, ((r, c, v) for (r, c), v in entries.items())))
        return IdealInstance(ctx, self.n, self.dim, tuple(mats), self.one, None)

    def check_commutation(self) -> None:
        from .linalg import matmul

        dense = [M.dense() for M in self.matrices]
        for i in range(self.n):
            for j in range(i + 1, self.n):
                if matmul(self.field, dense[i], dense[j]) != matmul(self.field, dense[j], dense[i]):
                    raise NonCommuting(f"M_{i + 1} and M_{j + 1} do not commute")

    @property
    def nnz(self) -> int:
        return sum(M.nnz for M in self.matrices)

    def to_json(self) -> dict:
        ctx = self.field
        doc = {
            "field": ctx.describe(),
            "n": self.n,
            "dim": self.dim,
            "one": [ctx.to_json(v) for v in self.one],
            "matrices": [[[r, c, ctx.to_json(v)] for r, c, v in M.triplets()] for M in self.matrices],
        }
        if self.labels is not None:
            doc["labels"] = [list(m) for m in self.labels]
        return doc


def load_instance(doc: dict, check_commutation: bool = False) -> IdealInstance:
    """Validate an instance document and build the black box."""
    if not isinstance(doc, dict):
        raise SchemaError("instance document must be a JSON object")
    for key in ("field", "n", "dim", "one", "matrices"):
        if key not in doc:
            raise SchemaError(f"missing key {key!r}")
    ctx = field_from_json(doc["field"])
    n, dim = doc["n"], doc["dim"]
    if not isinstance(n, int) or n < 1 or not isinstance(dim, int) or dim < 1:
        raise SchemaError("n and dim must be positive integers")
    mats = doc["matrices"]
    if not isinstance(mats, list) or len(mats) != n:
        raise DimensionMismatch(f"expected {n} matrices, got {len(mats) if isinstance(mats, list) else mats!r}")
    one = doc["one"]
    if len(one) != dim:
        raise DimensionMismatch(f"one-vector has length {len(one)}, expected {dim}")
    one = tuple(ctx.from_json(v) for v in one)
    if all(v == ctx.zero for v in one):
        raise SchemaError("one-vector is zero")
    matrices = []
    for trip in mats:
        try:
            matrices.append(SparseMatrix(ctx, dim, ((int(r), int(c), ctx.from_json(v)) for r, c, v in trip)))
        except (TypeError, ValueError) as exc:
            raise SchemaError(f"bad triplet list: {exc}") from exc
    labels = doc.get("labels")
    if labels is not None:
        if len(labels) != dim or any(len(m) != n for m in labels):
            raise DimensionMismatch("labels must be dim exponent vectors of length n")
        labels = tuple(tuple(m) for m in labels)
    inst = IdealInstance(ctx, n, dim, tuple(matrices), one, labels)
    if check_commutation:
        inst.check_commutation()
    return inst


# -- sequences ----------------------------------------------------------------

class MonomialCache:
    """Column vectors ``M^m v_1`` keyed by exponent vector.

    A new vector for ``m`` is always obtained from a cached ``m / X_j`` by one
    matrix-vector product, so evaluation follows divisor chains.
    """

    def __init__(self, inst: IdealInstance, cost: CostCounter | None = None):
        self.inst = inst
        self.cost = cost if cost is not None else CostCounter()
        self.vectors: dict[Monomial, list] = {(0,) * inst.n: list(inst.one)}

    def vector(self, m: Monomial) -> list:
        m = tuple(m)
        v = self.vectors.get(m)
        if v is not None:
            return v
        nz = [j for j, e in enumerate(m) if e]
        j = next((j for j in reversed(nz) if _dec(m, j) in self.vectors), nz[0])
        v = self.inst.mul_vec(j, self.vector(_dec(m, j)), self.cost)
        self.vectors[m] = v
        return v

    def __contains__(self, m: Monomial) -> bool:
        return tuple(m) in self.vectors

    def __len__(self) -> int:
        return len(self.vectors)


def _dec(m: Monomial, j: int) -> Monomial:
    return m[:j] + (m[j] - 1,) + m[j + 1 :]


class SequenceHandle:
    """The sequence ``u_l = (l(X^m mod I))_m`` of one linear form."""

    def __init__(self, form: Sequence, cache: MonomialCache):
        if len(form) != cache.inst.dim:
            raise DimensionMismatch(f"form has length {len(form)}, expected {cache.inst.dim}")
        self.form = list(form)
        self.cache = cache
        self.values: dict[Monomial, object] = {}

    def __getitem__(self, m: Monomial):
        return eval_sequence(self, m)


def eval_sequence(h: SequenceHandle, m: Monomial):
    m = tuple(m)
    val = h.values.get(m)
    if val is None:
        h.cache.cost.dot += 1
        val = h.values[m] = h.cache.inst.field.dot(h.form, h.cache.vector(m))
    return val


class FormSequences:
    """A family ``u_1..u_t`` of sequences given by linear forms on one instance."""

    def __init__(self, forms: Sequence[Sequence], inst: IdealInstance | None = None, cache: MonomialCache | None = None):
        if cache is None:
            if inst is None:
                raise ValueError("need an instance or a monomial cache")
            cache = MonomialCache(inst)
        self.cache = cache
        self.ctx = cache.inst.field
        self.n = cache.inst.n
        self.handles = [SequenceHandle(f, cache) for f in forms]

    @property
    def t(self) -> int:
        return len(self.handles)

    @property
    def cost(self) -> CostCounter:
        return self.cache.cost

    def values(self, m: Monomial) -> list:
        return [eval_sequence(h, m) for h in self.handles]


class ExplicitSequences:
    """Sequences given by Python callables on exponent tuples (for standalone use)."""

    def __init__(self, ctx: FieldCtx, n: int, funcs: Sequence[Callable[[Monomial], object]]):
        self.ctx = ctx
        self.n = n
        self.funcs = list(funcs)
        self.cost = CostCounter()
        self._memo: dict[Monomial, list] = {}

    @property
    def t(self) -> int:
        return len(self.funcs)

    def values(self, m: Monomial) -> list:
        m = tuple(m)
        if m not in self._memo:
            vals = [f(m) for f in self.funcs]
            self._memo[m] = [self.ctx(v) if isinstance(v, int) else v for v in vals]
        return self._memo[m]


# -- transposed products -----------------------------------------------------

def transposed_mul(inst: IdealInstance, form: Sequence, T: UniPoly, cost: CostCounter | None = None) -> list:
    """``T . l`` for ``T`` in ``X_n`` by Horner's rule: ``deg T`` products ``w M_n``."""
    ctx = inst.field
    if T.ctx != ctx:
        T = T.change_ring(ctx)
    if T.is_zero():
        return ctx.zero_vec(inst.dim)
    coeffs = T.coeffs
    w = ctx.scale_vec(coeffs[-1], form)
    for c in reversed(coeffs[:-1]):
        w = inst.mul_form(w, inst.n - 1, cost)
        if c != ctx.zero:
            w = ctx.axpy(c, form, w)
    return w


def batch_transposed(
    inst: IdealInstance,
    form: Sequence,
    factors: FactorData,
    cost: CostCounter | None = None,
    active: Sequence[int] | None = None,
) -> list[list]:
    """``[T_k . l for k in active]`` with ``T_k = P_min / P_k^e_k``.

    ``active`` defaults to the factors with ``e_k >= 2``.  The common factor
    ``R`` (all other factor powers) is applied once; the cofactors are then
    distributed top-down over a subproduct tree of the active ``P_k^e_k``.
    """
    active = list(range(factors.L)) if active is None else list(active)
    if not active:
        return []
    ctx = factors.factors[0].poly.ctx
    powers = factors.powers()
    R = UniPoly.one(ctx)
    for k, pw in enumerate(powers):
        if k not in active:
            R = R * pw
    root_form = transposed_mul(inst, form, R, cost)
    tree = build_subproduct_tree([powers[k] for k in active])
    out: list[list | None] = [None] * len(active)

    def walk(node, lam) -> None:
        if node.is_leaf:
            out[node.index] = lam
            return
        walk(node.left, transposed_mul(inst, lam, node.right.label, cost))
        walk(node.right, transposed_mul(inst, lam, node.left.label, cost))

    walk(tree.root, root_form)
    return out  # type: ignore[return-value]


def power_projections(cache: MonomialCache, form: Sequence) -> tuple[list, list[list]]:
    """``s[i] = l(X_n^i)`` for ``i < 2D`` and ``t[j][i] = l(X_{j+1} X_n^i)`` for ``i < D``."""
    inst = cache.inst
    ctx, n, D = inst.field, inst.n, inst.dim
    cost = cache.cost
    shifted = [inst.mul_form(form, j, cost) for j in range(n - 1)]
    s, t = [], [[] for _ in range(n - 1)]
    for i in range(2 * D):
        v = cache.vector(tuple(i if k == n - 1 else 0 for k in range(n)))
        s.append(ctx.dot(form, v))
        cost.dot += 1
        if i < D:
            for j, w in enumerate(shifted):
                t[j].append(ctx.dot(w, v))
                cost.dot += 1
    return s, t


def normal_form(cache: MonomialCache, f: MPoly) -> list:
    """Coordinate vector of ``f mod I``, i.e. ``f(M_1..M_n) v_1``."""
    ctx = cache.inst.field
    acc = ctx.zero_vec(cache.inst.dim)
    for m, c in f.terms.items():
        if f.ctx != ctx:
            c = ctx.embed(c)
        acc = ctx.axpy(c, cache.vector(m), acc)
    return acc


def random_form(inst: IdealInstance, rng) -> list:
    return inst.field.random_vec(inst.dim, rng)


def monomial_vector_dense(inst: IdealInstance, m: Monomial) -> list:
    """``M^m v_1`` by direct repeated products, no cache and no accounting."""
    v = list(inst.one)
    for j, e in enumerate(m):
        for _ in range(e):
            v = inst.matrices[j].matvec(v)
    return v


__all__ = [
    "CostCounter",
    "ExplicitSequences",
    "FormSequences",
    "IdealInstance",
    "LinearForm",
    "MonomialCache",
    "SequenceHandle",
    "SparseMatrix",
    "batch_transposed",
    "eval_sequence",
    "load_instance",
    "monomial_vector_dense",
    "normal_form",
    "power_projections",
    "random_form",
    "transposed_mul",
]
