"""Input checks shared by the estimator wrappers."""

from __future__ import annotations

import numpy as np


def check_coefficients(coeffs, min_degree: int = 0, allow_complex: bool = True) -> np.ndarray:
    """Validate a Chebyshev coefficient vector (lowest degree first).

    Returns a contiguous float or complex copy with trailing exact zeros
    removed.

    Raises
    ------
    ValueError
        For non-1-D input, non-finite entries, complex input when
        ``allow_complex`` is false, or a degree below ``min_degree``.
    """
    c = np.asarray(coeffs)
    if c.ndim != 1:
        raise ValueError(f"coefficients must be 1-D, got shape {c.shape}")
    if c.dtype.kind not in "biufc":
        raise ValueError(f"coefficients must be numeric, got dtype {c.dtype}")
    if c.dtype.kind == "c":
        if not allow_complex:
            raise ValueError("complex coefficients are not supported here")
        c = np.ascontiguousarray(c, dtype=np.complex128)
    else:
        c = np.ascontiguousarray(c, dtype=np.float64)
    if len(c) == 0:
        raise ValueError("empty coefficient vector")
    if not np.all(np.isfinite(c)):
        raise ValueError("coefficients must be finite")
    nz = np.flatnonzero(c)
    c = c[: nz[-1] + 1] if len(nz) else c[:1]
    if len(c) - 1 < min_degree:
        raise ValueError(f"degree {len(c) - 1} is below the required {min_degree}")
    return c


def check_points(x) -> np.ndarray:
    """Evaluation points as a float array; 2-D input must have one column."""
    x = np.asarray(x, dtype=float)
    if x.ndim == 2:
        if x.shape[1] != 1:
            raise ValueError(f"expected a single feature column, got {x.shape[1]}")
        x = x[:, 0]
    if x.ndim > 1:
        raise ValueError("points must be 1-D or a single column")
    if not np.all(np.isfinite(x)):
        raise ValueError("points must be finite")
    return x
