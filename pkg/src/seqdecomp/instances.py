"""Instance generators with known ground truth.

Two families of primary components are produced in closed form:

* ``fat_point``: the power ``m^e`` of the maximal ideal of a rational point
  ``a``; ``X_i`` acts as ``a_i Id`` plus a nilpotent shift on the basis
  ``(X - a)^alpha``, ``|alpha| < e``.
* ``curvilinear``: ``<X_i - g_i(X_n), P(X_n)^e>`` with ``P`` irreducible of
  degree ``f``; ``X_n`` acts as the companion matrix of ``P^e``.

Components are assembled block-diagonally, optionally conjugated by a
random change of basis.  :func:`from_lex_gb` builds the multiplication
matrices of any zero-dimensional ideal from its reduced lex basis.
"""

from __future__ import annotations

import itertools
import logging
import random
from dataclasses import dataclass, field
from math import comb
from typing import Sequence

from .annihilator import LexGB
from .errors import DivisionByZero, FieldTooSmall, SchemaError, SeparationViolated
from .field import FieldCtx, field_from_json
from .linalg import inverse, matmul, matvec
from .mpoly import Monomial, MPoly, mono_mul, unit
from .quotient import IdealInstance, SparseMatrix
from .unipoly import UniPoly, random_irreducible

log = logging.getLogger(__name__)


@dataclass
class ComponentSpec:
    """One primary component to generate.

    ``point`` is used by fat points; ``P`` and ``g`` (the tangent data
    ``X_i = g_i(X_n)``, ``i < n``) by curvilinear components.
    """

    kind: str
    e: int = 1
    point: tuple | None = None
    P: UniPoly | None = None
    g: list[UniPoly] = field(default_factory=list)

    @property
    def f(self) -> int:
        return 1 if self.kind == "fat_point" else self.P.deg

    def local_dim(self, n: int) -> int:
        if self.kind == "fat_point":
            return comb(self.e - 1 + n, n)
        return self.e * self.P.deg

    def minpoly_factor(self, ctx: FieldCtx) -> UniPoly:
        """The irreducible ``P_k`` with ``P_k^e`` the minimal polynomial of ``X_n`` here."""
        if self.kind == "fat_point":
            return UniPoly(ctx, [ctx.neg(self.point[-1]), ctx.one])
        return self.P


@dataclass
class ComponentTruth:
    pk: UniPoly
    ek: int
    fk: int
    dk: int
    lex_gb: LexGB

    def to_json(self) -> dict:
        return {"pk": self.pk.to_json(), "ek": self.ek, "fk": self.fk, "dk": self.dk, "lex_gb": self.lex_gb.to_json()}


@dataclass
class GroundTruth:
    field: FieldCtx
    n: int
    components: list[ComponentTruth]
    seed: int | None = None

    @property
    def dim(self) -> int:
        return sum(c.dk for c in self.components)

    def by_pk(self) -> dict[tuple, ComponentTruth]:
        return {tuple(c.pk.coeffs): c for c in self.components}

    def to_json(self) -> dict:
        return {
            "field": self.field.describe(),
            "n": self.n,
            "dim": self.dim,
            "seed": self.seed,
            "components": [c.to_json() for c in self.components],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "GroundTruth":
        ctx = field_from_json(doc["field"])
        n = doc["n"]
        comps = [
            ComponentTruth(
                UniPoly.from_json(ctx, c["pk"]), c["ek"], c["fk"], c["dk"], LexGB.from_json(ctx, n, c["lex_gb"])
            )
            for c in doc["components"]
        ]
        return cls(ctx, n, comps, doc.get("seed"))


# -- blocks --------------------------------------------------------------------

def _fat_point_block(ctx: FieldCtx, n: int, spec: ComponentSpec):
    a = [ctx(x) for x in spec.point]
    basis = sorted(m for m in itertools.product(range(spec.e), repeat=n) if sum(m) < spec.e)
    index = {m: k for k, m in enumerate(basis)}
    dim = len(basis)
    mats = []
    for i in range(n):
        M = [[ctx.zero] * dim for _ in range(dim)]
        for c, m in enumerate(basis):
            M[c][c] = a[i]
            up = mono_mul(m, unit(n, i))
            if up in index:
                M[index[up]][c] = ctx.one
        mats.append(M)
    one = [ctx.zero] * dim
    one[index[(0,) * n]] = ctx.one

    shift = [ctx.neg(x) for x in a]
    gens = [MPoly.monomial(ctx, m).translate(shift) for m in _degree_exactly(n, spec.e)]
    return mats, one, LexGB.from_generators(gens)


def _degree_exactly(n: int, e: int) -> list[Monomial]:
    return sorted(m for m in itertools.product(range(e + 1), repeat=n) if sum(m) == e)


def _curvilinear_block(ctx: FieldCtx, n: int, spec: ComponentSpec):
    R = spec.P**spec.e
    dim = R.deg
    x = UniPoly.x(ctx)

    def mult_matrix(h: UniPoly) -> list[list]:
        M = [[ctx.zero] * dim for _ in range(dim)]
        for c in range(dim):
            col = (x**c * h) % R
            for r, v in enumerate(col.coeffs):
                M[r][c] = v
        return M

    g = [gi % R for gi in spec.g]
    mats = [mult_matrix(gi) for gi in g] + [mult_matrix(x)]
    one = [ctx.one] + [ctx.zero] * (dim - 1)
    gens = [MPoly.var(ctx, n, i) - MPoly.from_univariate(gi, n, n - 1) for i, gi in enumerate(g)]
    gens.append(MPoly.from_univariate(R, n, n - 1))
    return mats, one, LexGB.from_generators(gens)


def _check_specs(ctx: FieldCtx, n: int, specs: Sequence[ComponentSpec]) -> None:
    if not specs:
        raise SchemaError("at least one component is required")
    seen: list[UniPoly] = []
    for s in specs:
        if s.e < 1:
            raise SchemaError("multiplicity must be positive")
        if s.kind == "fat_point":
            if s.point is None or len(s.point) != n:
                raise SchemaError(f"fat point needs {n} coordinates")
        elif s.kind == "curvilinear":
            if s.P is None or len(s.g) != n - 1:
                raise SchemaError(f"curvilinear component needs P and {n - 1} tangent polynomials")
        else:
            raise SchemaError(f"unknown component kind {s.kind!r}")
        pk = s.minpoly_factor(ctx)
        if pk in seen:
            raise SeparationViolated(f"two components share the X_n-data {pk.format()}")
        seen.append(pk)
    degree = sum(s.e * s.f for s in specs)
    if degree >= ctx.p:
        raise FieldTooSmall(f"minimal polynomial of X_n would have degree {degree} >= p = {ctx.p}")
    D = sum(s.local_dim(n) for s in specs)
    if ctx.p <= 2 * D:
        log.warning("p = %d is not larger than 2D = %d; random choices may fail often", ctx.p, 2 * D)


def random_invertible(ctx: FieldCtx, dim: int, rng: random.Random) -> tuple[list[list], list[list]]:
    while True:
        S = [ctx.random_vec(dim, rng) for _ in range(dim)]
        try:
            return S, inverse(ctx, S)
        except DivisionByZero:
            continue


def gen_instance(
    specs: Sequence[ComponentSpec], ctx: FieldCtx, n: int, seed: int = 0, conjugate: bool = False
) -> tuple[IdealInstance, GroundTruth]:
    """Block-diagonal instance for ``specs`` plus its ground truth."""
    _check_specs(ctx, n, specs)
    blocks = []
    truth = []
    for s in specs:
        mats, one, gb = (_fat_point_block if s.kind == "fat_point" else _curvilinear_block)(ctx, n, s)
        blocks.append((mats, one))
        truth.append(ComponentTruth(s.minpoly_factor(ctx), s.e, s.f, len(one), gb))

    D = sum(len(one) for _, one in blocks)
    dense = [[[ctx.zero] * D for _ in range(D)] for _ in range(n)]
    one_vec: list = []
    offset = 0
    for mats, one in blocks:
        d = len(one)
        for i in range(n):
            for r in range(d):
                dense[i][offset + r][offset : offset + d] = mats[i][r]
        one_vec.extend(one)
        offset += d

    if conjugate:
        S, Sinv = random_invertible(ctx, D, random.Random(seed))
        dense = [matmul(ctx, Sinv, matmul(ctx, M, S)) for M in dense]
        one_vec = matvec(ctx, Sinv, one_vec)

    mats = tuple(SparseMatrix.from_dense(ctx, M) for M in dense)
    inst = IdealInstance(ctx, n, D, mats, tuple(one_vec))
    return inst, GroundTruth(ctx, n, truth, seed)


def from_lex_gb(gb: LexGB) -> IdealInstance:
    """Multiplication matrices on the staircase basis, by reducing ``X_i b``."""
    ctx, n = gb.ctx, gb.n
    basis = list(gb.staircase)
    index = {m: k for k, m in enumerate(basis)}
    D = len(basis)
    if D == 0:
        raise SchemaError("the unit ideal has an empty quotient")
    mats = []
    for i in range(n):
        trip = []
        for c, b in enumerate(basis):
            nf = gb.reduce(MPoly.monomial(ctx, mono_mul(b, unit(n, i))))
            for m, v in nf.terms.items():
                trip.append((index[m], c, v))
        mats.append(SparseMatrix(ctx, D, trip))
    one = [ctx.zero] * D
    one[index[(0,) * n]] = ctx.one
    return IdealInstance(ctx, n, D, tuple(mats), tuple(one), tuple(basis))


# -- named instances ----------------------------------------------------------

def golden_gb(ctx: FieldCtx) -> LexGB:
    """A primary ideal of degree 6 in two variables over ``ctx``.

    Its minimal polynomial in ``X_2`` is ``(X_2^2 + X_2 + 2)^2`` and its
    radical is ``<X_1 - X_2 - 1, X_2^2 + X_2 + 2>``.
    """
    gens = [
        MPoly.from_ints(ctx, 2, [((2, 0), 1), ((1, 1), -2), ((1, 0), -2), ((0, 2), 1), ((0, 1), 2), ((0, 0), 1)]),
        MPoly.from_ints(
            ctx,
            2,
            [((1, 2), 1), ((1, 1), 1), ((1, 0), 2), ((0, 3), -1), ((0, 2), -2), ((0, 1), -3), ((0, 0), -2)],
        ),
        MPoly.from_ints(ctx, 2, [((0, 4), 1), ((0, 3), 2), ((0, 2), 5), ((0, 1), 4), ((0, 0), 4)]),
    ]
    return LexGB.from_generators(gens)


def golden_instance(ctx: FieldCtx) -> IdealInstance:
    return from_lex_gb(golden_gb(ctx))


def monomial_ideal_instance(ctx: FieldCtx, n: int, generators: Sequence[Monomial]) -> IdealInstance:
    return from_lex_gb(LexGB.from_generators([MPoly.monomial(ctx, tuple(m)) for m in generators]))


def parse_component(text: str, ctx: FieldCtx, n: int, rng: random.Random) -> ComponentSpec:
    """Parse ``fat:origin:e=2``, ``fat:1,2:e=3``, ``point:4,5`` or ``curv:f=2:e=2``.

    Curvilinear data not given on the command line (``P``, tangents) is drawn
    from ``rng``.
    """
    kind, *rest = text.split(":")
    opts = {}
    coords = None
    try:
        for item in rest:
            if "=" in item:
                key, _, val = item.partition("=")
                opts[key] = val
            elif item == "origin":
                coords = (0,) * n
            else:
                coords = tuple(int(c) for c in item.split(","))
        e = int(opts.get("e", 1))
        if kind in ("fat", "point"):
            if coords is None:
                coords = tuple(ctx.random(rng) for _ in range(n))
            return ComponentSpec("fat_point", e=1 if kind == "point" else e, point=tuple(ctx(c) for c in coords))
        if kind == "curv":
            f = int(opts.get("f", 1))
            P = random_irreducible(ctx, f, rng)
            return ComponentSpec("curvilinear", e=e, P=P, g=_random_tangents(ctx, n, P, e, rng))
    except ValueError as exc:
        raise SchemaError(f"bad component description {text!r}: {exc}") from exc
    raise SchemaError(f"unknown component kind in {text!r}")


def _random_tangents(ctx: FieldCtx, n: int, P: UniPoly, e: int, rng: random.Random) -> list[UniPoly]:
    """``g_i`` of degree ``< e f``: a random radical part of degree ``< f`` plus a multiple of ``P``."""
    f = P.deg
    out = []
    for _ in range(n - 1):
        G = UniPoly(ctx, ctx.random_vec(f, rng))
        h = UniPoly(ctx, ctx.random_vec((e - 1) * f, rng))
        out.append(G + P * h)
    return out


def random_specs(
    ctx: FieldCtx, n: int, rng: random.Random, max_dim: int = 20, max_e: int = 3, max_f: int = 3
) -> list[ComponentSpec]:
    """A random mix of fat points and curvilinear components of total degree ``<= max_dim``.

    At least one component has multiplicity ``>= 2`` so that the annihilator
    stage is exercised.
    """
    while True:
        specs: list[ComponentSpec] = []
        used: set[tuple] = set()
        budget = max_dim
        for _ in range(rng.randint(1, 3)):
            if rng.random() < 0.5:
                e = rng.randint(1, max_e)
                if comb(e - 1 + n, n) > budget:
                    continue
                point = tuple(ctx.random(rng) for _ in range(n))
                P = UniPoly(ctx, [ctx.neg(point[-1]), ctx.one])
                if tuple(P.coeffs) in used:
                    continue
                spec = ComponentSpec("fat_point", e=e, point=point)
            else:
                e, f = rng.randint(1, max_e), rng.randint(1, max_f)
                if e * f > budget:
                    continue
                P = random_irreducible(ctx, f, rng)
                if tuple(P.coeffs) in used:
                    continue
                spec = ComponentSpec("curvilinear", e=e, P=P, g=_random_tangents(ctx, n, P, e, rng))
            used.add(tuple(P.coeffs))
            budget -= spec.local_dim(n)
            specs.append(spec)
        if specs and any(s.e >= 2 for s in specs):
            return specs
