import logging
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _corpus import F
from seqdecomp.errors import FieldTooSmall, SchemaError, SeparationViolated
from seqdecomp.field import make_prime_field
from seqdecomp.instances import (
    ComponentSpec,
    GroundTruth,
    from_lex_gb,
    gen_instance,
    golden_gb,
    golden_instance,
    monomial_ideal_instance,
    parse_component,
    random_specs,
)
from seqdecomp.oracle import fglm_lex, gb_members
from seqdecomp.unipoly import UniPoly


def spec(text, n=2, seed=0, ctx=F):
    return parse_component(text, ctx, n, random.Random(seed))


def test_parse_component():
    s = spec("fat:origin:e=2")
    assert (s.kind, s.e, s.point) == ("fat_point", 2, (0, 0))
    s = spec("fat:1,2:e=3")
    assert s.point == (1, 2) and s.local_dim(2) == 6
    s = spec("point:4,5")
    assert s.e == 1 and s.point == (4, 5)
    s = spec("curv:f=2:e=3", n=3)
    assert s.kind == "curvilinear" and s.f == 2 and len(s.g) == 2 and s.local_dim(3) == 6


@pytest.mark.parametrize("text", ["blob:1", "fat:1,x:e=2", "curv:f=two"])
def test_parse_component_errors(text):
    with pytest.raises(SchemaError):
        spec(text)


def test_fat_origin_e2_has_degree_3():
    inst, truth = gen_instance([spec("fat:origin:e=2")], F, 2)
    assert inst.dim == 3 and truth.dim == 3
    assert truth.components[0].lex_gb == fglm_lex(inst)
    assert [g.format() for g in truth.components[0].lex_gb.generators] == ["X2^2", "X1*X2", "X1^2"]


def test_separation_and_field_size():
    with pytest.raises(SeparationViolated):
        gen_instance([spec("fat:1,2"), spec("fat:3,2")], F, 2)
    F5 = make_prime_field(5)
    with pytest.raises(FieldTooSmall):
        gen_instance([spec("fat:origin:e=5", ctx=F5)], F5, 2)
    with pytest.raises(SchemaError):
        gen_instance([], F, 2)
    with pytest.raises(SchemaError):
        gen_instance([ComponentSpec("fat_point", e=1, point=(1,))], F, 2)


def test_small_field_warning(caplog):
    F11 = make_prime_field(11)
    with caplog.at_level(logging.WARNING, logger="seqdecomp"):
        gen_instance([spec("fat:origin:e=2", ctx=F11), spec("fat:1,1:e=2", ctx=F11)], F11, 2)
    assert "2D" in caplog.text


def test_conjugation_keeps_the_algebra():
    specs = [spec("fat:1,2:e=2"), spec("curv:f=2:e=2", seed=5)]
    plain, truth = gen_instance(specs, F, 2, seed=3)
    conj, truth_c = gen_instance(specs, F, 2, seed=3, conjugate=True)
    plain.check_commutation()
    conj.check_commutation()
    assert truth.to_json() == truth_c.to_json()
    assert fglm_lex(plain) == fglm_lex(conj)
    assert plain.to_json() != conj.to_json()


def test_ground_truth_roundtrip():
    _, truth = gen_instance([spec("curv:f=3:e=2", n=3, seed=2)], F, 3, seed=9)
    again = GroundTruth.from_json(truth.to_json())
    assert again.to_json() == truth.to_json()
    assert again.seed == 9


def test_golden_instance():
    G = make_prime_field(10009)
    inst = golden_instance(G)
    assert inst.labels == ((0, 0), (0, 1), (0, 2), (0, 3), (1, 0), (1, 1))
    assert fglm_lex(inst) == golden_gb(G)
    inst.check_commutation()
    assert gb_members(inst, golden_gb(G), UniPoly.from_ints(G, [2, 1, 1]) ** 2)


def test_from_lex_gb_and_monomial_ideals():
    inst = monomial_ideal_instance(F, 2, [(2, 0), (1, 1), (0, 3)])
    assert inst.labels == ((0, 0), (0, 1), (0, 2), (1, 0))
    gb = fglm_lex(inst)
    assert from_lex_gb(gb).to_json() == inst.to_json()


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([2, 3]))
def test_random_specs_are_valid(seed, n):
    specs = random_specs(F, n, random.Random(seed), max_dim=20)
    assert any(s.e >= 2 for s in specs)
    inst, truth = gen_instance(specs, F, n, seed=seed, conjugate=True)
    assert inst.dim == truth.dim <= 20
    for comp, s in zip(truth.components, specs):
        assert comp.lex_gb.degree == s.local_dim(n) == comp.dk
        assert gb_members(inst, comp.lex_gb, comp.pk**comp.ek)
