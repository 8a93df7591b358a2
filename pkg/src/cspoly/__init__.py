"""Orthonormal polynomials from a three-term recurrence, their large-degree
approximations, and the distribution of their zeros."""

__version__ = "0.1.0"

from .errors import DomainError, NumericalError
from .scaled import ScaledReal
from .specfun import AiryQuad, airy, airy_scaled, log_gamma
from .recurrence import (
    BigRational,
    CoeffSet,
    Params,
    a_n,
    coeffs,
    eval_p_standard,
    eval_phi,
    eval_pi_exact,
    hermite_reference,
    lambda_from_moments,
    lambda_n,
    log_gamma_n,
    log_k_n,
)
from .asymptotics import (
    EvalReport,
    UValue,
    airy_uniform,
    evaluate,
    inner_formula,
    outer_formula,
    ratio_w_k,
    sum_lemma,
    u_map,
)
from .zeros import (
    Tridiagonal,
    ZeroReport,
    eigen_sturm,
    jacobi_matrix,
    ks_distance,
    semicircle_cdf,
    zero_report,
)

__all__ = [
    "AiryQuad", "BigRational", "CoeffSet", "DomainError", "EvalReport", "NumericalError",
    "Params", "ScaledReal", "Tridiagonal", "UValue", "ZeroReport",
    "a_n", "airy", "airy_scaled", "airy_uniform", "coeffs", "eigen_sturm", "eval_p_standard",
    "eval_phi", "eval_pi_exact", "evaluate", "hermite_reference", "inner_formula",
    "jacobi_matrix", "ks_distance", "lambda_from_moments", "lambda_n", "log_gamma",
    "log_gamma_n", "log_k_n", "outer_formula", "ratio_w_k", "semicircle_cdf", "sum_lemma",
    "u_map", "zero_report",
]
