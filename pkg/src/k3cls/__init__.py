"""Exact lattice toolkit for classifying maximal symmetric K3 actions."""

__version__ = "0.1.0"

from .autgroup import (
    MatrixGroup,
    automorphism_group,
    cyclic_subgroup_classes,
    dihedral_recognition,
    is_isometric,
    maximal_cyclic_classes,
    short_vectors,
    special_subgroup,
)
from .classify import CaseRecord, char_poly_check, classify_lattice, run_all, verify_against_reference
from .discform import DiscForm, FormIsometry, anti_isometries, disc_form, induced_form_isometry, negate, orthogonal_group_of_form
from .genus import GenusSymbol, genus_symbol, padic_jordan, same_genus
from .glue import GlueMap, PrimitiveExtension, build_extension, extend_isometry, glue_map_of, unique_extension_check
from .lattice import Lattice, Sublattice, discriminant_group, orthogonal_complement

__all__ = [
    "CaseRecord", "DiscForm", "FormIsometry", "GenusSymbol", "GlueMap", "Lattice", "MatrixGroup",
    "PrimitiveExtension", "Sublattice", "anti_isometries", "automorphism_group", "build_extension",
    "char_poly_check", "classify_lattice", "cyclic_subgroup_classes", "dihedral_recognition",
    "disc_form", "discriminant_group", "extend_isometry", "genus_symbol", "glue_map_of",
    "induced_form_isometry", "is_isometric", "maximal_cyclic_classes", "negate",
    "orthogonal_complement", "orthogonal_group_of_form", "padic_jordan", "run_all", "same_genus",
    "short_vectors", "special_subgroup", "unique_extension_check", "verify_against_reference",
]
