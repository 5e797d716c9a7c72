"""Exact arithmetic substrate: scalars, dense linear algebra, Artin algebras, polynomials."""

from .scalars import GaussianRational, I, Q, conj, parse_scalar, scalar_str, to_scalar
from .linalg import (
    LinearSolution, Subspace, hstack, identity, image_subspace, inverse, is_zero_matrix,
    kernel_subspace, kron, mat_add, mat_mul, mat_scale, mat_sub, mat_vec, matrix, nullspace,
    preimage, rank, rref, solve_linear, subspace_calc, transpose, vstack, zeros,
)
from .artin import (
    ArtinAlgebra, ArtinElement, ArtinMatrix, algebra_hom, artin_mul, matrix_exp_truncated,
    matrix_log_truncated,
)
from .poly import Polynomial, PolynomialSyntaxError, parse_polynomial

__all__ = [
    "GaussianRational", "I", "Q", "conj", "parse_scalar", "scalar_str", "to_scalar",
    "LinearSolution", "Subspace", "hstack", "identity", "image_subspace", "inverse",
    "is_zero_matrix", "kernel_subspace", "kron", "mat_add", "mat_mul", "mat_scale", "mat_sub",
    "mat_vec", "matrix", "nullspace", "preimage", "rank", "rref", "solve_linear",
    "subspace_calc", "transpose", "vstack", "zeros",
    "ArtinAlgebra", "ArtinElement", "ArtinMatrix", "algebra_hom", "artin_mul",
    "matrix_exp_truncated", "matrix_log_truncated",
    "Polynomial", "PolynomialSyntaxError", "parse_polynomial",
]
