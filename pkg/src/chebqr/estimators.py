"""scikit-learn style wrappers around the functional solver API."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ._validation import check_coefficients, check_points
from .chebtech import ChebSeries, adapt_interpolate, clenshaw
from .cli import filter_real_roots, solve_coeffs
from .expr import compile_expr
from .oracle import backward_error
from .qrcore import SolverOptions


class ColleagueEigensolver(BaseEstimator):
    """All roots of a Chebyshev series given by its coefficients.

    Parameters
    ----------
    mode : {"single", "double"}
        Complex single-shift or real double-shift iteration.
    aed : bool
        Enable aggressive early deflation (single-shift only).
    workers : int
        Threads for the pipelined chase.
    seed : int or None
        Seed for exceptional shifts; ``None`` reads ``CHEBQR_SEED``.

    Attributes
    ----------
    coeffs_ : ndarray
        Validated coefficients.
    eigenvalues_ : ndarray of complex
    gamma_hat_ : float
    n_sweeps_ : int
    backward_error_ : float
    report_ : RootReport or None
        ``None`` for degree below two, which needs no iteration.
    """

    def __init__(self, mode: str = "single", aed: bool = True, workers: int = 1,
                 seed: int | None = None):
        self.mode = mode
        self.aed = aed
        self.workers = workers
        self.seed = seed

    def fit(self, coeffs, y=None):
        c = check_coefficients(coeffs, min_degree=1)
        opts = SolverOptions(mode=self.mode, aed=self.aed, seed=self.seed)
        eigs, rep = solve_coeffs(c, self.workers, opts)
        self.coeffs_ = c
        self.eigenvalues_ = eigs
        self.report_ = rep
        self.gamma_hat_ = rep.gamma_hat if rep is not None else 0.0
        self.n_sweeps_ = rep.iterations if rep is not None else 0
        self.backward_error_ = backward_error(c, eigs).B
        return self

    def real_roots(self, tol: float = 1e-8) -> np.ndarray:
        """Fitted eigenvalues that lie in ``[-1, 1]``."""
        check_is_fitted(self, "eigenvalues_")
        return filter_real_roots(self.eigenvalues_, tol)

    def predict(self, X) -> np.ndarray:
        """Evaluate the fitted series at ``X``."""
        check_is_fitted(self, "coeffs_")
        return clenshaw(self.coeffs_, check_points(X))


class ChebyshevRootFinder(BaseEstimator):
    """Interpolate a function on ``[-1, 1]`` and find its real roots.

    Parameters
    ----------
    tol : float
        Relative interpolation tolerance.
    workers, aed, seed
        Forwarded to the eigensolver.
    suspect_threshold : float
        ``gamma_hat_`` above which ``stability_`` reads ``"suspect"``.
    """

    def __init__(self, tol: float = 1e-14, workers: int = 1, aed: bool = True,
                 seed: int | None = None, suspect_threshold: float = 1e4):
        self.tol = tol
        self.workers = workers
        self.aed = aed
        self.seed = seed
        self.suspect_threshold = suspect_threshold

    def fit(self, f, y=None):
        """``f`` is an expression string, a vectorized callable or a ChebSeries."""
        if isinstance(f, str):
            f = compile_expr(f)
        series = f if isinstance(f, ChebSeries) else adapt_interpolate(f, self.tol)
        solver = ColleagueEigensolver(aed=self.aed, workers=self.workers, seed=self.seed)
        c = check_coefficients(series.coeffs)
        self.series_ = series
        if len(c) == 1:
            self.eigenvalues_ = np.zeros(0, dtype=complex)
            self.roots_ = np.zeros(0)
            self.gamma_hat_ = 0.0
            self.backward_error_ = 0.0
        else:
            solver.fit(c)
            self.eigenvalues_ = solver.eigenvalues_
            self.roots_ = solver.real_roots()
            self.gamma_hat_ = solver.gamma_hat_
            self.backward_error_ = solver.backward_error_
        self.stability_ = "suspect" if self.gamma_hat_ > self.suspect_threshold else "ok"
        return self

    def predict(self, X) -> np.ndarray:
        """Evaluate the interpolant at ``X``."""
        check_is_fitted(self, "series_")
        return clenshaw(self.series_.coeffs, check_points(X))

    def transform(self, X) -> np.ndarray:
        """Signed distance from each point to the nearest root (``inf`` if none)."""
        check_is_fitted(self, "roots_")
        x = check_points(X)
        if len(self.roots_) == 0:
            return np.full(x.shape, np.inf)
        i = np.clip(np.searchsorted(self.roots_, x), 1, len(self.roots_)) - 1
        lo = x - self.roots_[i]
        j = np.minimum(i + 1, len(self.roots_) - 1)
        hi = x - self.roots_[j]
        return np.where(np.abs(lo) <= np.abs(hi), lo, hi)
