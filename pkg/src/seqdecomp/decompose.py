"""Primary decomposition of a zero-dimensional ideal given by its black box.

Pipeline: power projections of one random form give ``P_min`` and the
radical parametrization ``(P, G_1..G_{n-1})``; ``P_min`` is factored into
``P_k^e_k``.  Simple factors give their component directly.  For each
multiple factor the forms ``T_k . l_i`` (``T_k = P_min / P_k^e_k``) generate
sequences whose annihilator is ``J_k = I + <P_k^e_k>``; forms are added
until a random verification form ``l_0`` vanishes on the candidate basis.
"""

from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass, field
from typing import Sequence

from .annihilator import IncrementalMMM, LexGB, generic_ann
from .errors import AnnihilatorFail, GenericityFailure, NotInvertible, VerificationFailed
from .field import FieldCtx, field_from_json, make_extension
from .mpoly import MPoly
from .quotient import (
    CostCounter,
    FormSequences,
    IdealInstance,
    MonomialCache,
    SequenceHandle,
    batch_transposed,
    normal_form,
    power_projections,
    transposed_mul,
)
from .unipoly import Factor, FactorData, UniPoly, factor, shape_recover

log = logging.getLogger(__name__)

STRATEGIES = ("mmm", "generic")
REPRESENTATIONS = ("lex", "ext", "origin")
VERIFY_MODES = ("none", "probabilistic", "oracle")
MIN_SOUNDNESS_BITS = 12


@dataclass
class ComponentResult:
    pk: UniPoly
    ek: int
    fk: int
    dk: int
    lex_gb: LexGB
    ext_gb: LexGB | None = None
    origin_gb: LexGB | None = None
    ext_field: FieldCtx | None = None
    zeta: object = None
    xi: list | None = None
    forms_used: int = 0
    # forms T_k . l_i that produced lex_gb; reused by the extension stages
    forms: list = field(default_factory=list, repr=False, compare=False)

    @property
    def pk_power(self) -> UniPoly:
        return self.pk**self.ek

    def to_json(self) -> dict:
        doc = {
            "pk": self.pk.to_json(),
            "ek": self.ek,
            "fk": self.fk,
            "dk": self.dk,
            "lex_gb": self.lex_gb.to_json(),
            "ext_gb": self.ext_gb.to_json() if self.ext_gb is not None else None,
            "origin_gb": self.origin_gb.to_json() if self.origin_gb is not None else None,
            "xi": None,
            "forms_used": self.forms_used,
        }
        if self.ext_field is not None:
            doc["ext_field"] = self.ext_field.describe()
            doc["xi"] = [self.ext_field.to_json(x) for x in self.xi] if self.xi is not None else None
        return doc

    @classmethod
    def from_json(cls, ctx: FieldCtx, n: int, doc: dict) -> "ComponentResult":
        comp = cls(
            UniPoly.from_json(ctx, doc["pk"]),
            doc["ek"],
            doc["fk"],
            doc["dk"],
            LexGB.from_json(ctx, n, doc["lex_gb"]),
            forms_used=doc.get("forms_used", 0),
        )
        if "ext_field" in doc:
            L = field_from_json(doc["ext_field"])
            comp.ext_field = L
            if doc.get("xi") is not None:
                comp.xi = [L.from_json(x) for x in doc["xi"]]
                comp.zeta = comp.xi[-1]
            if doc.get("ext_gb") is not None:
                comp.ext_gb = LexGB.from_json(L, n, doc["ext_gb"])
            if doc.get("origin_gb") is not None:
                comp.origin_gb = LexGB.from_json(L, n, doc["origin_gb"])
        return comp


@dataclass
class DecompositionReport:
    field: FieldCtx
    n: int
    dim: int
    pmin: UniPoly
    radical: tuple[UniPoly, list[UniPoly]]
    components: list[ComponentResult]
    strategy: str
    seed: int
    representations: tuple[str, ...]
    cost: CostCounter
    stage_costs: dict = field(default_factory=dict)

    @property
    def K(self) -> int:
        return len(self.components)

    def to_json(self) -> dict:
        P, G = self.radical
        return {
            "field": self.field.describe(),
            "n": self.n,
            "dim": self.dim,
            "strategy": self.strategy,
            "representations": list(self.representations),
            "seed": self.seed,
            "pmin": self.pmin.to_json(),
            "radical": {"p": P.to_json(), "g": [g.to_json() for g in G]},
            "components": [c.to_json() for c in self.components],
            "cost": {**self.cost.as_dict(), "stages": self.stage_costs},
        }

    @classmethod
    def from_json(cls, doc: dict) -> "DecompositionReport":
        ctx = field_from_json(doc["field"])
        n = doc["n"]
        cost_doc = doc.get("cost", {})
        cost = CostCounter(cost_doc.get("matvec", 0), cost_doc.get("dot", 0), cost_doc.get("rref_pivots", 0))
        radical = doc["radical"]
        return cls(
            ctx,
            n,
            doc["dim"],
            UniPoly.from_json(ctx, doc["pmin"]),
            (UniPoly.from_json(ctx, radical["p"]), [UniPoly.from_json(ctx, g) for g in radical["g"]]),
            [ComponentResult.from_json(ctx, n, c) for c in doc["components"]],
            doc["strategy"],
            doc["seed"],
            tuple(doc.get("representations", ("lex",))),
            cost,
            cost_doc.get("stages", {}),
        )


def _rng(seed: int, stage: str, attempt: int) -> random.Random:
    return random.Random(f"{seed}:{stage}:{attempt}")


# -- radical -------------------------------------------------------------------

def radical_param(
    inst: IdealInstance, seed: int = 0, retries: int = 5, cache: MonomialCache | None = None
) -> tuple[UniPoly, UniPoly, list[UniPoly]]:
    """``(P_min, P, [G_1..G_{n-1}])`` from the power projections of one random form.

    ``P_min`` is accepted only if ``P_min(M_n) v_1 = 0``, which is checked on
    the vectors ``M_n^i v_1`` already computed (no extra products).
    """
    cache = cache if cache is not None else MonomialCache(inst)
    ctx, n, D = inst.field, inst.n, inst.dim
    for attempt in range(retries):
        form = ctx.random_vec(D, _rng(seed, "radical", attempt))
        s, t = power_projections(cache, form)
        try:
            pmin, P, G = shape_recover(s, t, D, ctx)
        except NotInvertible as exc:
            log.info("radical stage: non-generic form (%s), retrying", exc)
            continue
        acc = ctx.zero_vec(D)
        for i, c in enumerate(pmin.coeffs):
            acc = ctx.axpy(c, cache.vector(tuple(i if k == n - 1 else 0 for k in range(n))), acc)
        if any(x != ctx.zero for x in acc):
            log.info("radical stage: projected minimal polynomial is a proper divisor, retrying")
            continue
        return pmin, P, G
    raise GenericityFailure(f"radical parametrization failed after {retries} attempts")


def _radical_component(ctx: FieldCtx, n: int, pk: UniPoly, G: Sequence[UniPoly]) -> LexGB:
    gens = [MPoly.var(ctx, n, i) - MPoly.from_univariate(g % pk, n, n - 1) for i, g in enumerate(G)]
    gens.append(MPoly.from_univariate(pk, n, n - 1))
    return LexGB.from_generators(gens)


# -- per-component annihilators --------------------------------------------------

def _l0_vanishes(cache: MonomialCache, l0: Sequence, gb: LexGB) -> bool:
    ctx = cache.inst.field
    return all(ctx.dot(l0, normal_form(cache, g)) == ctx.zero for g in gb.generators)


class _Verifier:
    """``r`` independent verification forms, each pushed through the same map."""

    def __init__(self, r: int, draw):
        self.r = max(1, r)
        self.draw = draw
        self.forms: list = []

    def passes(self, cache: MonomialCache, gb: LexGB, key) -> bool:
        for j in range(self.r):
            while len(self.forms) <= j:
                self.forms.append(self.draw(len(self.forms)))
            if not _l0_vanishes(cache, self.forms[j][key], gb):
                return False
        return True


class _Solver:
    """Annihilator of a growing family of forms with one of the two strategies."""

    def __init__(self, strategy: str, cache: MonomialCache, B: int, last: UniPoly):
        self.strategy = strategy
        self.cache = cache
        self.B = B
        self.last = last
        if strategy == "mmm":
            self.state = IncrementalMMM(cache)
        else:
            self.family = FormSequences([], cache=cache)

    @property
    def t(self) -> int:
        return self.state.t if self.strategy == "mmm" else self.family.t

    def add(self, form: Sequence) -> None:
        if self.strategy == "mmm":
            self.state.push(form)
        else:
            self.family.handles.append(SequenceHandle(form, self.cache))

    def solve(self) -> LexGB | None:
        if self.strategy == "mmm":
            return self.state.run()
        try:
            return generic_ann(self.family, B=self.B, known_last_minpoly=self.last, cost=self.cache.cost)
        except AnnihilatorFail as exc:
            log.debug("generic annihilator failed with %d forms: %s", self.family.t, exc)
            return None


def _schedule(strategy: str, cap: int) -> list[int]:
    """Numbers of forms at which the annihilator is recomputed."""
    if strategy == "mmm":
        return list(range(1, cap + 1))
    out, t = [], 1
    while t < cap:
        out.append(t)
        t *= 2
    out.append(cap)
    return out


def _multiple_components(
    inst: IdealInstance,
    cache: MonomialCache,
    fd: FactorData,
    strategy: str,
    seed: int,
    retries: int,
    r: int,
) -> dict[int, tuple[LexGB, list]]:
    """Lex GBs of ``J_k`` for every ``k`` with ``e_k >= 2``; returns ``k -> (gb, forms)``."""
    ctx, D = inst.field, inst.dim
    cost = cache.cost
    done: dict[int, tuple[LexGB, list]] = {}
    pending = list(range(fd.L))
    for attempt in range(retries):
        if not pending:
            break
        active = list(pending)
        rng = _rng(seed, "ann", attempt)
        vrng = _rng(seed, "l0", attempt)

        def draw_l0(_j, active=tuple(active), vrng=vrng):
            mapped = batch_transposed(inst, ctx.random_vec(D, vrng), fd, cost, active)
            return dict(zip(active, mapped))

        verifier = _Verifier(r, draw_l0)
        solvers = {k: _Solver(strategy, cache, fd.factors[k].e, fd.powers()[k]) for k in active}
        forms: dict[int, list] = {k: [] for k in active}
        drawn = 0
        for t in _schedule(strategy, D):
            if not active:
                break
            while drawn < t:
                mapped = batch_transposed(inst, ctx.random_vec(D, rng), fd, cost, active)
                for k, w in zip(active, mapped):
                    solvers[k].add(w)
                    forms[k].append(w)
                drawn += 1
            for k in list(active):
                gb = solvers[k].solve()
                if gb is not None and verifier.passes(cache, gb, k):
                    log.info("component %d resolved with %d forms", k, t)
                    done[k] = (gb, forms[k])
                    active.remove(k)
        pending = active
        if pending:
            log.info("components %s unresolved after %d forms, retrying with fresh forms", pending, D)
    if pending:
        raise GenericityFailure(f"components {pending} unresolved after {retries} attempts")
    return done


# -- representations over L_k ---------------------------------------------------

def _extension_data(comp: ComponentResult, radical_g: Sequence[UniPoly]) -> tuple[FieldCtx, object, list]:
    """``L_k``, the root ``zeta`` of ``P_k`` in it and the point ``xi``."""
    base = comp.pk.ctx
    if comp.fk == 1:
        L = base
        zeta = base.neg(comp.pk.coeffs[0])
    else:
        L = make_extension(base, comp.pk)
        zeta = L.gen()
    xi = [g.change_ring(L)(zeta) for g in radical_g] + [zeta]
    return L, zeta, xi


def _local_annihilator(
    inst_L: IdealInstance,
    cost: CostCounter,
    strategy: str,
    e: int,
    last: UniPoly,
    make_forms,
    seed: int,
    stage: str,
    retries: int,
    r: int,
) -> LexGB:
    """Annihilator over ``L`` of the forms yielded by ``make_forms``, l_0-verified.

    The first attempt starts from the forms that resolved the component over
    ``K``; later attempts draw everything anew.
    """
    cache = MonomialCache(inst_L, cost)
    D = inst_L.dim
    for attempt in range(retries):
        supply = make_forms(_rng(seed, stage, attempt), known=attempt == 0)
        l0_supply = make_forms(_rng(seed, stage + "-l0", attempt), known=False)
        l0s = [next(l0_supply) for _ in range(r)]
        solver = _Solver(strategy, cache, e, last)
        for t in _schedule(strategy, D):
            while solver.t < t:
                solver.add(next(supply))
            gb = solver.solve()
            if gb is not None and all(_l0_vanishes(cache, l0, gb) for l0 in l0s):
                return gb
    raise GenericityFailure(f"{stage} stage failed after {retries} attempts")


def scalar_extension(
    comp: ComponentResult,
    inst: IdealInstance,
    radical_g: Sequence[UniPoly],
    fd: FactorData,
    k: int,
    strategy: str = "generic",
    seed: int = 0,
    cost: CostCounter | None = None,
    retries: int = 5,
    r: int = 2,
) -> LexGB:
    """Lex GB of ``J'_k = J_k + <(X_n - zeta)^e_k>`` over ``L_k = K[Z]/P_k``."""
    cost = cost if cost is not None else CostCounter()
    L, zeta, xi = _extension_data(comp, radical_g)
    comp.ext_field, comp.zeta, comp.xi = L, zeta, xi
    if comp.fk == 1:
        return comp.lex_gb
    if comp.ek == 1:
        n = inst.n
        gens = [MPoly.var(L, n, i) - MPoly.const(L, n, x) for i, x in enumerate(xi)]
        return LexGB.from_generators(gens)
    inst_L = inst.extend(L)
    last = UniPoly(L, [L.neg(zeta), L.one]) ** comp.ek
    make = _form_maker(inst, inst_L, comp, zeta, fd, k, cost)
    return _local_annihilator(inst_L, cost, strategy, comp.ek, last, make, seed, f"ext{k}", retries, r)


def translate_to_origin(
    comp: ComponentResult,
    inst: IdealInstance,
    radical_g: Sequence[UniPoly],
    fd: FactorData,
    k: int,
    strategy: str = "generic",
    seed: int = 0,
    cost: CostCounter | None = None,
    retries: int = 5,
    r: int = 2,
) -> LexGB:
    """Lex GB of the ``<X_1..X_n>``-primary translate ``J''_k`` of ``J'_k`` by ``xi``.

    The translated sequences ``l'((X - xi)^m)`` are evaluated through the
    shifted matrices ``M_i - xi_i Id``.
    """
    cost = cost if cost is not None else CostCounter()
    if comp.ext_field is None:
        L, zeta, xi = _extension_data(comp, radical_g)
        comp.ext_field, comp.zeta, comp.xi = L, zeta, xi
    L, zeta, xi = comp.ext_field, comp.zeta, comp.xi
    n = inst.n
    if comp.ek == 1:
        return LexGB.from_generators([MPoly.var(L, n, i) for i in range(n)])
    inst_L = inst.extend(L)
    shifted = inst_L.shifted(xi)
    last = UniPoly(L, [L.zero, L.one]) ** comp.ek
    make = _form_maker(inst, inst_L, comp, zeta, fd, k, cost)
    return _local_annihilator(shifted, cost, strategy, comp.ek, last, make, seed, f"origin{k}", retries, r)


def _form_maker(inst, inst_L, comp, zeta, fd, k, cost):
    """Generator factory for the forms ``S_k^e_k . T_k . l`` over ``L``."""
    ctx, L, D = inst.field, inst_L.field, inst.dim
    S = comp.pk.change_ring(L) // UniPoly(L, [L.neg(zeta), L.one])
    Se = S**comp.ek

    def make(rng, known: bool):
        if known:
            for w in comp.forms:
                yield transposed_mul(inst_L, [L.embed(x) for x in w], Se, cost)
        while True:
            w = batch_transposed(inst, ctx.random_vec(D, rng), fd, cost, [k])[0]
            yield transposed_mul(inst_L, [L.embed(x) for x in w], Se, cost)

    return make


# -- driver --------------------------------------------------------------------

def min_checks(q: int) -> int:
    """Verification forms needed so a false accept has probability at most ``2^-MIN_SOUNDNESS_BITS``.

    A wrong candidate survives one random check with probability about
    ``1/q``; this only bites on very small fields.
    """
    return max(1, math.ceil(MIN_SOUNDNESS_BITS / math.log2(q)))


def decompose(
    inst: IdealInstance,
    strategy: str = "generic",
    representations: Sequence[str] = ("lex",),
    seed: int = 0,
    verify_mode: str = "probabilistic",
    retries: int = 5,
    r: int = 2,
) -> DecompositionReport:
    """Primary decomposition ``I = J_1 cap ... cap J_K`` with ``J_k = I + <P_k^e_k>``.

    ``verify_mode="oracle"`` re-checks every output polynomial by dense
    membership tests and raises :class:`VerificationFailed` on a mismatch.
    With ``"none"`` the termination test uses a single verification form,
    except on fields too small for one form to be convincing.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    reps = tuple(rp for rp in REPRESENTATIONS if rp in set(representations))
    if set(representations) - set(REPRESENTATIONS):
        raise ValueError(f"unknown representations {sorted(set(representations) - set(REPRESENTATIONS))}")
    if verify_mode not in VERIFY_MODES:
        raise ValueError(f"unknown verify mode {verify_mode!r}")
    if verify_mode == "none":
        r = 1
    r = max(r, min_checks(inst.field.order))

    ctx, n = inst.field, inst.n
    cost = CostCounter()
    cache = MonomialCache(inst, cost)
    stages: dict[str, dict] = {}

    mark = cost.snapshot()
    pmin, P, G = radical_param(inst, seed, retries, cache)
    stages["radical"] = cost.since(mark)
    log.info("radical stage: deg P_min = %d, deg P = %d, %d matvecs", pmin.deg, P.deg, stages["radical"]["matvec"])

    fd = factor(pmin, seed)
    log.info("factorization: K = %d, L = %d", fd.K, fd.L)

    mark = cost.snapshot()
    multiple = _multiple_components(inst, cache, fd, strategy, seed, retries, r) if fd.L else {}
    stages["annihilator"] = cost.since(mark)
    log.info("annihilator stage: %d matvecs", stages["annihilator"]["matvec"])

    comps = []
    for k, fac in enumerate(fd.factors):
        if k < fd.L:
            gb, forms = multiple[k]
            comp = ComponentResult(fac.poly, fac.e, fac.f, gb.degree, gb, forms_used=len(forms), forms=forms)
        else:
            gb = _radical_component(ctx, n, fac.poly, G)
            comp = ComponentResult(fac.poly, fac.e, fac.f, gb.degree, gb)
        comps.append(comp)

    for name, fn in (("ext", scalar_extension), ("origin", translate_to_origin)):
        if name not in reps:
            continue
        mark = cost.snapshot()
        for k, comp in enumerate(comps):
            gb = fn(comp, inst, G, fd, k, strategy, seed, cost, retries, r)
            setattr(comp, f"{name}_gb", gb)
        stages[name] = cost.since(mark)
        log.info("%s stage: %d matvecs", name, stages[name]["matvec"])

    report = DecompositionReport(ctx, n, inst.dim, pmin, (P, G), comps, strategy, seed, reps, cost, stages)
    verify_report(report, inst, "oracle" if verify_mode == "oracle" else "none")
    return report


def verify_report(report: DecompositionReport, inst: IdealInstance, mode: str = "oracle", seed: int = 0) -> None:
    """Re-check a report against its instance; raises :class:`VerificationFailed`.

    ``oracle`` runs dense membership tests for every polynomial of every
    representation.  ``probabilistic`` checks ``(T_k . l)(g) = 0`` for a few
    random forms ``l``, which holds exactly when ``g`` is in ``I + <P_k^e_k>``
    unless ``l`` is unlucky.
    """
    if report.field != inst.field or report.n != inst.n or report.dim != inst.dim:
        raise VerificationFailed("report and instance describe different algebras")
    total = sum(c.dk for c in report.components)
    if total != inst.dim:
        raise VerificationFailed(f"component degrees sum to {total}, expected {inst.dim}")
    product = UniPoly.one(inst.field)
    for k, comp in enumerate(report.components):
        product = product * comp.pk_power
        if comp.lex_gb.degree != comp.dk:
            raise VerificationFailed(f"component {k}: staircase size differs from D_k")
        if comp.ext_gb is not None and comp.ext_gb.degree * comp.fk != comp.dk:
            raise VerificationFailed(f"component {k}: D'_k * f_k != D_k")
    if product != report.pmin:
        raise VerificationFailed("component powers do not multiply to P_min")
    if mode == "oracle":
        _verify_oracle(report, inst)
    elif mode == "probabilistic":
        _verify_probabilistic(report, inst, seed)
    elif mode != "none":
        raise ValueError(f"unknown verify mode {mode!r}")


def _verify_oracle(report: DecompositionReport, inst: IdealInstance) -> None:
    from .oracle import membership

    for k, comp in enumerate(report.components):
        for g in comp.lex_gb.generators:
            if not membership(inst, g, comp.pk_power):
                raise VerificationFailed(f"component {k}: {g.format()} is not in I + <P_k^e_k>")
        if comp.ext_gb is None and comp.origin_gb is None:
            continue
        L, zeta = comp.ext_field, comp.zeta
        inst_L = inst.extend(L)
        checks = []
        if comp.ext_gb is not None:
            checks.append(("J'", comp.ext_gb, inst_L, UniPoly(L, [L.neg(zeta), L.one]) ** comp.ek))
        if comp.origin_gb is not None:
            checks.append(("J''", comp.origin_gb, inst_L.shifted(comp.xi), UniPoly(L, [L.zero, L.one]) ** comp.ek))
        for name, gb, target, last in checks:
            for g in gb.generators:
                if not membership(target, g.change_ring(L) if g.ctx != L else g, last):
                    raise VerificationFailed(f"component {k}: {g.format()} is not in {name}_k")


def _verify_probabilistic(report: DecompositionReport, inst: IdealInstance, seed: int, rounds: int = 2) -> None:
    ctx, D = inst.field, inst.dim
    fd = FactorData([Factor(c.pk, c.ek, c.fk) for c in report.components])
    idx = list(range(fd.K))
    cache = MonomialCache(inst)
    for j in range(rounds):
        rng = _rng(seed, "verify", j)
        mapped = batch_transposed(inst, ctx.random_vec(D, rng), fd, None, idx)
        for k, comp in enumerate(report.components):
            if not _l0_vanishes(cache, mapped[k], comp.lex_gb):
                raise VerificationFailed(f"component {k}: a generator is not in I + <P_k^e_k>")
