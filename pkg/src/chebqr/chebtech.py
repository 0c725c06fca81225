"""Chebyshev interpolation, coefficient transforms and series evaluation."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

MAX_POINTS = 2**16
EPS = np.finfo(float).eps


class ResolutionError(RuntimeError):
    """Raised when adaptive interpolation fails to resolve a function.

    The best series obtained is available as ``best``.
    """

    def __init__(self, message: str, best: "ChebSeries"):
        super().__init__(message)
        self.best = best


class CoefficientFileError(ValueError):
    """Raised for malformed coefficient files."""


@dataclass
class ChebSeries:
    """Finite Chebyshev series ``sum_k coeffs[k] T_k(x)`` on ``[-1, 1]``."""

    coeffs: np.ndarray
    tol: float = 0.0
    n_points: int = 0

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        return clenshaw(self.coeffs, x)


def cheb_points(n: int) -> np.ndarray:
    """Chebyshev points of the second kind ``cos(j pi / n)``, ``j = 0..n``.

    Computed through a sine formula so that the points are exactly
    antisymmetric and the endpoints are exactly ``1`` and ``-1``.
    Ordered from ``+1`` down to ``-1``.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return np.array([1.0])
    m = np.arange(n, -n - 1, -2, dtype=float)
    return np.sin(np.pi * m / (2 * n))


def _values_to_coeffs_direct(values: np.ndarray) -> np.ndarray:
    n = len(values) - 1
    j = np.arange(n + 1)
    w = np.ones(n + 1)
    w[0] = w[-1] = 0.5
    T = np.cos(np.pi * np.outer(j, j) / n)
    c = (2.0 / n) * (T @ (w * values))
    c[0] *= 0.5
    c[-1] *= 0.5
    return c


def values_to_coeffs(values, direct: bool = False) -> np.ndarray:
    """Map samples at :func:`cheb_points` to Chebyshev coefficients.

    Uses the even-extension FFT (an O(n log n) DCT-I).  ``direct`` selects
    the O(n^2) cosine sum, used automatically for fewer than eight points.
    """
    values = np.asarray(values)
    n = len(values) - 1
    if n == 0:
        return values.astype(np.result_type(values, float)).copy()
    if direct or n < 7:
        return _values_to_coeffs_direct(values)
    ext = np.concatenate([values, values[-2:0:-1]])
    F = np.fft.fft(ext)
    c = F[: n + 1] / n
    c[0] *= 0.5
    c[-1] *= 0.5
    if not np.iscomplexobj(values):
        c = c.real
    return c


def coeffs_to_values(coeffs) -> np.ndarray:
    """Evaluate a series at the ``len(coeffs)`` Chebyshev points."""
    coeffs = np.asarray(coeffs)
    n = len(coeffs) - 1
    if n == 0:
        return coeffs.copy()
    c = coeffs.astype(np.result_type(coeffs, float)).copy()
    c[1:-1] *= 0.5
    ext = np.concatenate([c, c[-2:0:-1]])
    v = np.fft.fft(ext)[: n + 1]
    if not np.iscomplexobj(coeffs):
        v = v.real
    return v


def clenshaw(coeffs, x):
    """Evaluate ``sum_k coeffs[k] T_k(x)`` by Clenshaw's recurrence."""
    c = np.asarray(coeffs)
    x = np.asarray(x)
    b1 = np.zeros(np.broadcast(x, c[0]).shape, dtype=np.result_type(c, x, float))
    b2 = np.zeros_like(b1)
    x2 = 2 * x
    for ck in c[:0:-1]:
        b1, b2 = ck + x2 * b1 - b2, b1
    out = c[0] + x * b1 - b2
    return out[()] if out.ndim == 0 else out


def clenshaw_derivative(coeffs, x):
    """Evaluate the derivative of a Chebyshev series."""
    c = np.asarray(coeffs)
    n = len(c) - 1
    if n == 0:
        return clenshaw(np.zeros(1, dtype=c.dtype), x)
    dc = np.zeros(n, dtype=np.result_type(c, float))
    for k in range(n - 1, -1, -1):
        dc[k] = 2 * (k + 1) * c[k + 1] + (dc[k + 2] if k + 2 < n else 0)
    dc[0] *= 0.5
    return clenshaw(dc, x)


def trim(coeffs, tol: float) -> np.ndarray:
    """Drop trailing coefficients at most ``tol * max|c|`` in magnitude."""
    c = np.asarray(coeffs)
    scale = np.max(np.abs(c)) if len(c) else 0.0
    if scale == 0:
        return c[:1].copy()
    keep = np.nonzero(np.abs(c) > tol * scale)[0]
    return c[: keep[-1] + 1].copy()


def _resolved(c: np.ndarray, tol: float) -> bool:
    scale = np.max(np.abs(c))
    if scale == 0:
        return True
    tail = max(3, len(c) // 8)
    return bool(np.all(np.abs(c[-tail:]) <= tol * scale))


def plateau_cutoff(coeffs, tol: float = EPS) -> int:
    """Number of coefficients to keep according to a noise-plateau test.

    Follows Chebfun's ``standardChop``: the monotone envelope of the
    coefficient magnitudes is scanned for a point after which it stops
    decaying (a plateau of rounding noise), and the cut is placed where the
    envelope plus a gentle linear ramp is smallest.  Returns ``len(coeffs)``
    when no plateau is found (the series is not resolved).
    """
    n = len(coeffs)
    if n < 17:
        return n
    b = np.abs(np.asarray(coeffs))
    m = np.maximum.accumulate(b[::-1])[::-1]
    if m[0] == 0:
        return 1
    env = m / m[0]
    plateau = None
    j2 = n
    for j in range(2, n + 1):
        j2 = round(1.25 * j + 5)
        if j2 > n:
            return n
        e1 = env[j - 1]
        e2 = env[j2 - 1]
        if e1 == 0 or e2 / e1 > 3 * (1 - np.log(e1) / np.log(tol)):
            plateau = j - 1
            break
    if env[plateau - 1] == 0:
        return plateau
    floor = tol ** (7 / 6)
    j3 = int(np.sum(env >= floor))
    if j3 < j2:
        j2 = j3 + 1
        env = env.copy()
        env[j2 - 1] = floor
    cc = np.log10(env[:j2]) + np.linspace(0, (-1 / 3) * np.log10(tol), j2)
    return max(int(np.argmin(cc)), 1)


def _cutoff(c: np.ndarray, tol: float) -> int | None:
    k = plateau_cutoff(c, tol)
    if k < len(c):
        return k
    if _resolved(c, tol):
        return len(trim(c, tol))
    return None


def adapt_interpolate(f: Callable, tol: float = 1e-14, max_points: int = MAX_POINTS,
                      min_points: int = 16) -> ChebSeries:
    """Adaptively interpolate ``f`` on ``[-1, 1]``.

    The grid doubles from ``min_points`` intervals.  The series is accepted
    once its coefficients reach a noise plateau (:func:`plateau_cutoff`,
    which also fixes the cut) or once the trailing ``max(3, n/8)``
    coefficients fall below ``tol`` relative to the largest, in which case
    coefficients below that level are trimmed from the end.

    Raises
    ------
    ResolutionError
        If ``max_points`` is reached first.  The exception carries the
        series from the finest grid.
    """
    if not 0 < tol < 1:
        raise ValueError("tol must lie in (0, 1)")
    n = min_points
    c = None
    while n <= max_points:
        x = cheb_points(n)
        fx = np.asarray(f(x))
        if fx.shape == ():
            fx = np.full(x.shape, fx)
        if not np.all(np.isfinite(fx)):
            raise ValueError("function returned non-finite values on [-1, 1]")
        c = values_to_coeffs(fx)
        k = _cutoff(c, tol)
        if k is not None:
            return ChebSeries(c[:k].copy(), tol=tol, n_points=n + 1)
        n *= 2
    raise ResolutionError(f"function not resolved with {max_points + 1} points",
                          ChebSeries(trim(c, tol), tol=tol, n_points=max_points + 1))


def _leja_order(points: np.ndarray) -> np.ndarray:
    pts = list(points)
    if not pts:
        return np.asarray(points)
    out = []
    i0 = int(np.argmax(np.abs(pts)))
    out.append(pts.pop(i0))
    prod = np.array([abs(p - out[0]) for p in pts], dtype=float)
    while pts:
        i = int(np.argmax(prod))
        nxt = pts.pop(i)
        prod = np.delete(prod, i)
        out.append(nxt)
        prod = prod * np.array([abs(p - nxt) for p in pts], dtype=float)
        if len(prod) and prod.max() > 0:
            prod = prod / prod.max()
    return np.asarray(out)


def _mul_linear(c: np.ndarray, y) -> np.ndarray:
    # (x - y) * sum c_k T_k using x T_k = (T_{k+1} + T_{k-1}) / 2
    out = np.zeros(len(c) + 1, dtype=np.result_type(c, y))
    out[: len(c)] -= y * c
    out[1] += c[0]
    out[2:] += 0.5 * c[1:]
    if len(c) > 2:
        out[1 : len(c) - 1] += 0.5 * c[2:]
    if len(c) > 1:
        out[0] += 0.5 * c[1]
    return out


def roots_to_cheb(roots, normalize: bool = False) -> np.ndarray:
    """Chebyshev coefficients of ``prod_j (x - roots[j])``.

    Factors are multiplied in Leja order using
    ``x T_k = (T_{k+1} + T_{k-1}) / 2``; a root set closed under exact
    conjugation yields real coefficients.  With ``normalize`` the running
    product is rescaled after every factor to keep it away from underflow
    (the leading coefficient ``2^(1-n)`` underflows past degree 1000); the
    result is then correct only up to a positive scalar.
    """
    r = np.asarray(roots, dtype=complex).ravel()
    if not np.all(np.isfinite(r)):
        raise ValueError("roots must be finite")
    if np.all(r.imag == 0):
        c = np.array([1.0])
        for y in _leja_order(r.real):
            c = _mul_linear(c, y)
            if normalize:
                c = c / np.max(np.abs(c))
        return c
    c = np.array([1.0 + 0j])
    for y in _leja_order(r):
        c = _mul_linear(c, y)
        if normalize:
            c = c / np.max(np.abs(c))
    up = np.sort_complex(r[r.imag > 0])
    down = np.sort_complex(np.conj(r[r.imag < 0]))
    if len(up) == len(down) and np.array_equal(up, down):
        return c.real.copy()
    return c


def read_coeffs(path) -> np.ndarray:
    """Read a coefficient file.

    UTF-8 text, one coefficient per line starting with index 0.  Blank
    lines and ``#`` comments are ignored; a line with two numbers is read
    as ``real imag``.
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise CoefficientFileError(f"cannot read {path}: {exc}") from exc
    vals = []
    cplx = False
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.replace(",", " ").split()
        try:
            nums = [float(p) for p in parts]
        except ValueError:
            raise CoefficientFileError(f"{path}:{lineno}: not a number: {line!r}") from None
        if len(nums) == 1:
            vals.append(complex(nums[0], 0.0))
        elif len(nums) == 2:
            vals.append(complex(nums[0], nums[1]))
            cplx = cplx or nums[1] != 0.0
        else:
            raise CoefficientFileError(f"{path}:{lineno}: expected 1 or 2 numbers")
        if not np.isfinite(vals[-1]):
            raise CoefficientFileError(f"{path}:{lineno}: non-finite coefficient")
    if not vals:
        raise CoefficientFileError(f"{path}: no coefficients")
    arr = np.array(vals)
    return arr if cplx else arr.real.copy()


def write_coeffs(path, coeffs) -> None:
    """Write coefficients in the format read by :func:`read_coeffs`."""
    c = np.asarray(coeffs)
    with open(path, "w", encoding="utf-8") as fh:
        for z in c:
            if np.iscomplexobj(c):
                fh.write(f"{float(z.real)!r} {float(z.imag)!r}\n")
            else:
                fh.write(f"{float(z)!r}\n")
