"""Fusion rings, amalgamated free products and Julg-Valette operators on coset trees."""

from .freeprod import AmalgamRing, FreeProductRing, check_dim_mult_claim, free_conj, free_fuse
from .fusion import (
    AoRing,
    CyclicRing,
    FusionElement,
    FusionError,
    FusionRing,
    GroupDualRing,
    Label,
    check_axioms,
    conj,
    fuse,
)
from .groups import FiniteGroup, cyclic_group, symmetric_group
from .ringdef import SpecError, format_spec, parse_spec, resolve, serialize_report
from .subcat import Subcategory, even_part, quotient_classes, validate_subcategory
from .tree import (
    AmalgamGroupSpec,
    build_classical_tree,
    build_quotient_tree,
    commutator_report,
    fredholm_report,
    homotopy_check,
    julg_valette,
    tree_isomorphism,
)

__version__ = "0.1.0"

__all__ = [
    "AmalgamGroupSpec",
    "AmalgamRing",
    "AoRing",
    "CyclicRing",
    "FiniteGroup",
    "FreeProductRing",
    "FusionElement",
    "FusionError",
    "FusionRing",
    "GroupDualRing",
    "Label",
    "SpecError",
    "Subcategory",
    "build_classical_tree",
    "build_quotient_tree",
    "check_axioms",
    "check_dim_mult_claim",
    "commutator_report",
    "conj",
    "cyclic_group",
    "even_part",
    "format_spec",
    "fredholm_report",
    "free_conj",
    "free_fuse",
    "fuse",
    "homotopy_check",
    "julg_valette",
    "parse_spec",
    "quotient_classes",
    "resolve",
    "serialize_report",
    "symmetric_group",
    "tree_isomorphism",
    "validate_subcategory",
]
