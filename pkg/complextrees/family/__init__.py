# ComplexTrees/family/__init__.py

from .rational import RationalFunction, poly_gcd, trim, format_poly
from .family import (
    ParametricFamily,
    eval_family,
    phi_ep_symbolic,
    relation_defect,
    sample_admissible,
    verify_family_identity,
    default_tails,
    unstable_witness,
    relations_empty,
)
from .refine import refine_alphabet
from .presets import (
    preset,
    preset_names,
    ngon,
    reference_alphabet,
    reference_relations,
    rauzy_letter,
)
from .loader import FamilyFile, parse_family, load_family, dump_family, save_family

__all__ = [
    "RationalFunction",
    "poly_gcd",
    "trim",
    "format_poly",
    "ParametricFamily",
    "eval_family",
    "phi_ep_symbolic",
    "relation_defect",
    "sample_admissible",
    "verify_family_identity",
    "default_tails",
    "unstable_witness",
    "relations_empty",
    "refine_alphabet",
    "preset",
    "preset_names",
    "ngon",
    "reference_alphabet",
    "reference_relations",
    "rauzy_letter",
    "FamilyFile",
    "parse_family",
    "load_family",
    "dump_family",
    "save_family",
]
