import copy
import json
import random

import pytest

from _corpus import F, instance
from seqdecomp.annihilator import LexGB
from seqdecomp.decompose import (
    DecompositionReport,
    decompose,
    min_checks,
    radical_param,
    verify_report,
)
from seqdecomp.errors import GenericityFailure, VerificationFailed
from seqdecomp.field import make_prime_field
from seqdecomp.instances import gen_instance, golden_instance, parse_component
from seqdecomp.mpoly import MPoly
from seqdecomp.unipoly import UniPoly

G = make_prime_field(10009)


def specs(*texts, n=2, seed=0):
    rng = random.Random(seed)
    return [parse_component(t, F, n, rng) for t in texts]


def test_radical_of_golden():
    pmin, P, (G1,) = radical_param(golden_instance(G), seed=3)
    Z = UniPoly.from_ints(G, [2, 1, 1])
    assert pmin == Z**2 and P == Z
    assert G1 == UniPoly.from_ints(G, [1, 1])  # X1 = X2 + 1 on the radical


def test_strategies_agree():
    inst, truth = gen_instance(specs("fat:1,2:e=3", "curv:f=2:e=2", "point:5,6"), F, 2, seed=1, conjugate=True)
    reports = [decompose(inst, s, ("lex", "ext", "origin"), seed=1) for s in ("mmm", "generic")]
    a, b = (r.to_json() for r in reports)
    for doc in (a, b):
        doc.pop("cost")
        doc.pop("strategy")
        for comp in doc["components"]:
            comp.pop("forms_used")
    assert a == b
    assert reports[0].K == 3


def test_components_without_annihilator_stage():
    # e = 1 everywhere: every component is read off the radical
    inst, truth = gen_instance(specs("point:1,2", "curv:f=3:e=1", "point:7,8"), F, 2, seed=2, conjugate=True)
    report = decompose(inst, "mmm", ("lex", "ext", "origin"), seed=2, verify_mode="oracle")
    assert report.stage_costs["annihilator"]["matvec"] == 0
    expected = truth.by_pk()
    for comp in report.components:
        assert comp.lex_gb == expected[tuple(comp.pk.coeffs)].lex_gb
        assert comp.forms_used == 0
        L = comp.ext_field
        assert comp.origin_gb == LexGB.from_generators([MPoly.var(L, 2, i) for i in range(2)])


def test_rational_fat_point_representations():
    inst, _ = gen_instance(specs("fat:3,4:e=2"), F, 2, seed=4, conjugate=True)
    report = decompose(inst, "generic", ("lex", "ext", "origin"), seed=4, verify_mode="oracle")
    (comp,) = report.components
    assert comp.fk == 1 and comp.ext_field == F
    assert comp.ext_gb == comp.lex_gb
    assert comp.xi == [3, 4]
    translated = LexGB.from_generators([g.translate(comp.xi) for g in comp.lex_gb.generators])
    assert comp.origin_gb == translated
    assert [g.format() for g in comp.origin_gb.generators] == ["X2^2", "X1*X2", "X1^2"]


def test_report_roundtrip_and_verification():
    inst, _ = instance(11, conjugate=True)
    report = decompose(inst, "generic", ("lex", "ext", "origin"), seed=11)
    doc = json.loads(json.dumps(report.to_json()))
    again = DecompositionReport.from_json(doc)
    assert again.to_json() == doc
    verify_report(again, inst, "oracle")
    verify_report(again, inst, "probabilistic", seed=5)


def _tamper_coefficient(doc):
    comp = max(doc["components"], key=lambda c: len(c["lex_gb"]["generators"]))
    term = comp["lex_gb"]["generators"][-1][-1]
    term[-1] = (term[-1] + 1) % F.p


@pytest.mark.parametrize("mode", ["oracle", "probabilistic"])
def test_tampered_reports_fail(mode):
    inst, _ = instance(12, conjugate=True)
    doc = decompose(inst, "mmm", ("lex",), seed=12).to_json()
    bad = copy.deepcopy(doc)
    _tamper_coefficient(bad)
    with pytest.raises(VerificationFailed):
        verify_report(DecompositionReport.from_json(bad), inst, mode)


def test_structural_checks():
    inst, _ = instance(13, conjugate=True)
    doc = decompose(inst, "mmm", ("lex",), seed=13).to_json()
    bad = copy.deepcopy(doc)
    bad["components"][0]["dk"] += 1
    with pytest.raises(VerificationFailed):
        verify_report(DecompositionReport.from_json(bad), inst, "none")
    other, _ = instance(14, conjugate=True)
    with pytest.raises(VerificationFailed):
        verify_report(DecompositionReport.from_json(doc), other, "none")


def test_genericity_failure_after_retries():
    with pytest.raises(GenericityFailure):
        decompose(golden_instance(G), retries=0)


@pytest.mark.parametrize(
    "kwargs", [{"strategy": "fast"}, {"representations": ("lex", "polar")}, {"verify_mode": "maybe"}]
)
def test_bad_arguments(kwargs):
    with pytest.raises(ValueError):
        decompose(golden_instance(G), **kwargs)


def test_min_checks():
    assert min_checks(5) == 6
    assert min_checks(10007) == 1
    assert min_checks(2**61 - 1) == 1


def test_report_has_no_timing():
    doc = decompose(golden_instance(G), seed=1).to_json()
    assert set(doc) == {
        "field", "n", "dim", "strategy", "representations", "seed", "pmin", "radical", "components", "cost"
    }
    assert set(doc["cost"]) == {"matvec", "dot", "rref_pivots", "stages"}
    assert set(doc["cost"]["stages"]) == {"radical", "annihilator"}


def test_three_variables_curvilinear_extension():
    inst, truth = gen_instance(specs("curv:f=2:e=3", n=3, seed=8), F, 3, seed=8, conjugate=True)
    report = decompose(inst, "mmm", ("lex", "ext", "origin"), seed=8, verify_mode="oracle")
    (comp,) = report.components
    assert (comp.ek, comp.fk, comp.dk) == (3, 2, 6)
    assert comp.ext_gb.degree == 3
    # curvilinear at the origin: X_i - c_i X_3 - ..., X_3^3
    assert comp.origin_gb.leading_monomials()[0] == (0, 0, 3)


@pytest.mark.parametrize("strategy", ["mmm", "generic"])
def test_curvilinear_over_f5(strategy):
    F5 = make_prime_field(5)
    rng = random.Random(6)
    spec = parse_component("curv:f=2:e=2", F5, 2, rng)
    inst, truth = gen_instance([spec], F5, 2, seed=6, conjugate=True)
    report = decompose(inst, strategy, ("lex", "ext", "origin"), seed=6, verify_mode="oracle")
    (comp,) = report.components
    assert comp.lex_gb == truth.components[0].lex_gb
    assert comp.ext_gb.degree == comp.dk // 2 == 2
    L, z = comp.ext_field, comp.zeta
    X2 = MPoly.var(L, 2, 1)
    assert comp.ext_gb.generators[0] == (X2 - MPoly.const(L, 2, z)) ** 2


def test_origin_basis_translates_into_extension_component():
    from seqdecomp.oracle import membership

    inst, _ = gen_instance(specs("curv:f=2:e=2", "fat:1,2:e=2", seed=3), F, 2, seed=3, conjugate=True)
    report = decompose(inst, "generic", ("lex", "origin"), seed=3)
    for comp in report.components:
        L, z = comp.ext_field, comp.zeta
        last = UniPoly(L, [L.neg(z), L.one]) ** comp.ek
        back = [L.neg(x) for x in comp.xi]
        for g in comp.origin_gb.generators:
            assert membership(inst.extend(L), g.translate(back), last)


def test_leading_term_degree_bound():
    # pure X_i powers (i < n) among leading terms have exponent <= e_k
    for i in range(100):
        _, truth = instance(i, conjugate=False)
        for comp in truth.components:
            n = comp.lex_gb.n
            for lm in comp.lex_gb.leading_monomials():
                support = [j for j, e in enumerate(lm) if e]
                if len(support) == 1 and support[0] < n - 1:
                    assert lm[support[0]] <= comp.ek


def test_minimal_polynomial_of_x1_exceeds_multiplicity():
    # the bound above is on leading terms only: on the golden ideal (e = 2, f = 2)
    # X1 has minimal polynomial ((X - 1)^2 + (X - 1) + 2)^2 of degree 4
    from seqdecomp.quotient import MonomialCache
    from seqdecomp.unipoly import berlekamp_massey

    inst = golden_instance(G)
    cache = MonomialCache(inst)
    form = G.random_vec(6, random.Random(0))
    seq = [G.dot(form, cache.vector((k, 0))) for k in range(12)]
    m = berlekamp_massey(seq, 6, G)
    expected = UniPoly.from_ints(G, [2, -1, 1])  # (X - 1)^2 + (X - 1) + 2
    assert m.deg == 4 and m == expected**2
