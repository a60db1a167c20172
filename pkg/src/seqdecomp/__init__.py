"""Primary decomposition of zero-dimensional ideals from multiplication matrices,
via annihilators of linearly recurrent multi-dimensional sequences."""

from .annihilator import LexGB, generic_ann, mmm_ann, mmm_ann_incremental
from .decompose import ComponentResult, DecompositionReport, decompose, radical_param, verify_report
from .field import FieldCtx, make_extension, make_prime_field
from .instances import ComponentSpec, from_lex_gb, gen_instance, golden_instance, parse_component
from .mpoly import MPoly
from .quotient import CostCounter, IdealInstance, MonomialCache, load_instance
from .unipoly import UniPoly

__version__ = "0.1.0"

__all__ = [
    "ComponentResult",
    "ComponentSpec",
    "CostCounter",
    "DecompositionReport",
    "FieldCtx",
    "IdealInstance",
    "LexGB",
    "MPoly",
    "MonomialCache",
    "UniPoly",
    "decompose",
    "from_lex_gb",
    "gen_instance",
    "golden_instance",
    "generic_ann",
    "load_instance",
    "make_extension",
    "make_prime_field",
    "mmm_ann",
    "mmm_ann_incremental",
    "parse_component",
    "radical_param",
    "verify_report",
]
