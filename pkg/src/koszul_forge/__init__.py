"""Computations with quadratic algebras over F_p and finitely presented pro-p groups."""

from .free_algebra import MonomialOrder, NcPoly, commutator_poly, leading_monomial, multiply, parse_poly
from .quadratic import QuadraticAlgebra, combine, component_dim, dual, k_of, make_quadratic
from .rewriting import combinatorially_free, complete, hilbert_coeffs, normal_form, pbw_certificate
from .koszul import (
    ext_table,
    extremal_series_koszul,
    koszul_verdict,
    series_identity_check,
    strongly_free_check,
    uw_check,
    uw_search,
)
from .groups import GroupPresentation, analyze, initial_form, magnus_expand, parse_group_word
from .graphs import Graph

__version__ = "0.1.0"

__all__ = [
    "Graph",
    "GroupPresentation",
    "MonomialOrder",
    "NcPoly",
    "QuadraticAlgebra",
    "analyze",
    "combinatorially_free",
    "combine",
    "commutator_poly",
    "complete",
    "component_dim",
    "dual",
    "ext_table",
    "extremal_series_koszul",
    "hilbert_coeffs",
    "initial_form",
    "k_of",
    "koszul_verdict",
    "leading_monomial",
    "magnus_expand",
    "make_quadratic",
    "multiply",
    "normal_form",
    "parse_group_word",
    "parse_poly",
    "pbw_certificate",
    "series_identity_check",
    "strongly_free_check",
    "uw_check",
    "uw_search",
]
