"""Exact rational arithmetic: polynomials, rational functions, matrices."""
from .linalg import RatMatrix, nullspace, rank_exact, rref, solve
from .polynomial import (
    AlgebraError,
    D,
    DimensionMismatch,
    Family,
    FamilyMismatch,
    ParseError,
    Polynomial,
    X,
    format_polynomial,
    grevlex_key,
    monomials_of_degree,
    monomials_up_to,
    parse_polynomial,
)
from .ratfunc import (
    RationalFunction,
    SingularMatrix,
    poly_gcd,
    ratfunc_det,
    ratfunc_matrix_inverse,
    ratfunc_matrix_mul,
    ratfunc_rank,
)

__all__ = [
    "AlgebraError", "D", "DimensionMismatch", "Family", "FamilyMismatch", "ParseError",
    "Polynomial", "RatMatrix", "RationalFunction", "SingularMatrix", "X", "format_polynomial",
    "grevlex_key", "monomials_of_degree", "monomials_up_to", "nullspace", "parse_polynomial",
    "poly_gcd", "rank_exact", "ratfunc_det", "ratfunc_matrix_inverse", "ratfunc_matrix_mul",
    "ratfunc_rank", "rref", "solve",
]
