"""Exact polynomial algebra: parsing, Groebner bases and singularity invariants.

Importers can use `from src.algebra import parse_polynomial, milnor_number`
without knowing which submodule holds what.
"""
from .poly import MonomialOrder, Polynomial, format_rational, parse_rational, partial_derivative, evaluate
from .parser import parse_polynomial
from .groebner import (
    INFINITE,
    Finite,
    GroebnerBasis,
    Ideal,
    Infinite,
    Limits,
    buchberger,
    ideal_membership,
    local_quotient_dimension,
    normal_form,
    quotient_dimension,
    truncated_dimension,
)
from .singularity import (
    Germ,
    InvariantReport,
    NormalFormSpec,
    QuasiHomogeneity,
    SweepRow,
    invariant_report,
    is_quasihomogeneous,
    jacobian_ideal,
    milnor_number,
    moduli_gap,
    modulus_sweep,
    tjurina_number,
)

__all__ = [
    "MonomialOrder", "Polynomial", "format_rational", "parse_rational", "partial_derivative",
    "evaluate", "parse_polynomial", "INFINITE", "Finite", "GroebnerBasis", "Ideal", "Infinite",
    "Limits", "buchberger", "ideal_membership", "local_quotient_dimension", "normal_form",
    "quotient_dimension", "truncated_dimension", "Germ", "InvariantReport", "NormalFormSpec",
    "QuasiHomogeneity", "SweepRow", "invariant_report", "is_quasihomogeneous", "jacobian_ideal",
    "milnor_number", "moduli_gap", "modulus_sweep", "tjurina_number",
]
