"""Roots of Chebyshev series through structured QR on the colleague matrix."""

from .chebtech import (ChebSeries, ResolutionError, adapt_interpolate, cheb_points, clenshaw,
                       read_coeffs, roots_to_cheb, values_to_coeffs, write_coeffs)
from .cli import ZerosReport, zeros
from .colleague import Generators, build_colleague, colleague_dense
from .estimators import ChebyshevRootFinder, ColleagueEigensolver
from .oracle import backward_error, dense_hessenberg_qr
from .parchase import parallel_eigenvalues
from .qrcore import ConvergenceError, RootReport, SolverOptions, StabilityTracker, eigenvalues

__all__ = [
    "ChebSeries", "ChebyshevRootFinder", "ColleagueEigensolver", "ConvergenceError",
    "Generators", "ResolutionError", "RootReport", "SolverOptions", "StabilityTracker",
    "ZerosReport", "adapt_interpolate", "backward_error", "build_colleague", "cheb_points",
    "clenshaw", "colleague_dense", "dense_hessenberg_qr", "eigenvalues", "parallel_eigenvalues",
    "read_coeffs", "roots_to_cheb", "values_to_coeffs", "write_coeffs", "zeros",
]
