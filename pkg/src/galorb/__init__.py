"""Exact coadjoint-orbit machinery for generalized Galilean groups."""

from .catalog import (
    CATALOG,
    OrbitAtlas,
    atlas_diff,
    enumerate_atlas,
    reference_table,
    representative,
    representative_for_row,
)
from .classifier import (
    EquivalenceWitness,
    SpecialTuple,
    TypePair,
    apply_equivalence,
    associated_pair,
    classify,
    classify_nonaffine,
    decompose_type,
    equivalent,
    parameter,
    standardize_affine,
    standardize_case1,
)
from .galilean import AlgebraElement, GroupElement, ad, compose, inverse, pairing, twisted_ad
from .linalg import InnerProductSpace, Mat, ViolationError, build_chain, lift, signature, star, witt_map
from .summands import AffineScope, Decomposition, IndexMismatch, Kind, ScopeError, Summand, UnsupportedType

__all__ = [
    "CATALOG",
    "AffineScope",
    "AlgebraElement",
    "Decomposition",
    "EquivalenceWitness",
    "GroupElement",
    "IndexMismatch",
    "InnerProductSpace",
    "Kind",
    "Mat",
    "OrbitAtlas",
    "ScopeError",
    "SpecialTuple",
    "Summand",
    "TypePair",
    "UnsupportedType",
    "ViolationError",
    "ad",
    "apply_equivalence",
    "associated_pair",
    "atlas_diff",
    "build_chain",
    "classify",
    "classify_nonaffine",
    "compose",
    "decompose_type",
    "enumerate_atlas",
    "equivalent",
    "inverse",
    "lift",
    "pairing",
    "parameter",
    "reference_table",
    "representative",
    "representative_for_row",
    "signature",
    "standardize_affine",
    "standardize_case1",
    "star",
    "twisted_ad",
    "witt_map",
]
