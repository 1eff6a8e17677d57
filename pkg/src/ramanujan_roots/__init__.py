"""Jacobi polynomials, Heckman-Opdam hypergeometric functions and the Ramanujan master theorem
for root systems with real multiplicities."""

from __future__ import annotations

from .gammac import CFunctionSet, GammaPole, Singular, build_cfunctions
from .hyper1 import F_lambda_rank1, Rank1Params, classical_polys, gauss_2f1
from .jacobi import GroupPoint, JacobiFamily, jacobi_coeffs, series_tail_bound
from .master import (DomainError, HardyFunction, MasterCase, NotAvailable, exponential_hardy,
                     hardy_validate, rank_one_case)
from .quad import QuadratureResult, a_integral, contour_integral, torus_quadrature
from .rootsys import RootSystem, Weight, build_root_system, load_root_system
from .specfun import BFunction, DFunction, TubeDomain, classify_singularities, tube_contains

__version__ = "0.1.0"

__all__ = [
    "BFunction", "CFunctionSet", "DFunction", "DomainError", "F_lambda_rank1", "GammaPole", "GroupPoint",
    "HardyFunction", "JacobiFamily", "MasterCase", "NotAvailable", "QuadratureResult", "Rank1Params",
    "RootSystem", "Singular", "TubeDomain", "Weight", "a_integral", "build_cfunctions", "build_root_system",
    "classical_polys", "classify_singularities", "contour_integral", "exponential_hardy", "gauss_2f1",
    "hardy_validate", "jacobi_coeffs", "load_root_system", "rank_one_case", "series_tail_bound",
    "torus_quadrature", "tube_contains",
]
