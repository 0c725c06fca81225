"""Colleague matrices stored as Hermitian-plus-rank-one generators."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

DENSE_LIMIT = 4096


@dataclass
class Generators:
    """Compressed upper Hessenberg matrix ``A = F + u v^*``.

    ``F = A - u v^*`` is Hermitian, so ``A`` is determined by its diagonal
    ``d``, its subdiagonal ``beta``, the vectors ``u`` and ``v``, and any
    extra lower entries (bulges) listed in ``extra`` as ``{(i, j): value}``.

    ``active`` is the half-open index range ``[lo, hi)`` still being iterated.
    """

    d: np.ndarray
    beta: np.ndarray
    u: np.ndarray
    v: np.ndarray
    active: tuple = (0, 0)
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.active == (0, 0):
            self.active = (0, len(self.d))

    @property
    def n(self) -> int:
        return len(self.d)

    def copy(self) -> "Generators":
        return Generators(self.d.copy(), self.beta.copy(), self.u.copy(), self.v.copy(),
                          self.active, dict(self.extra))

    def lower(self, i: int, j: int):
        """Stored entry of the lower part ``L`` (``i > j``)."""
        if i == j + 1:
            return self.beta[j]
        return self.extra.get((i, j), 0.0)

    def entry(self, i: int, j: int):
        """Entry ``A[i, j]`` rebuilt from the generators (0-based)."""
        if i == j:
            return self.d[i]
        if i > j:
            return self.lower(i, j)
        return (np.conj(self.lower(j, i)) - np.conj(self.u[j]) * self.v[i]
                + self.u[i] * np.conj(self.v[j]))

    def to_dense(self, force: bool = False) -> np.ndarray:
        """Assemble the dense matrix (refused above ``DENSE_LIMIT`` unless forced)."""
        n = self.n
        if n > DENSE_LIMIT and not force:
            raise MemoryError(f"refusing to densify a {n} x {n} matrix")
        dtype = np.result_type(self.d, self.beta, self.u, self.v)
        L = np.zeros((n, n), dtype=dtype)
        idx = np.arange(n - 1)
        L[idx + 1, idx] = self.beta
        for (i, j), val in self.extra.items():
            L[i, j] = val
        R = np.outer(self.u, self.v.conj())
        A = np.tril(L, -1) + np.diag(self.d).astype(dtype)
        up = np.triu(L.conj().T - R.conj().T + R, 1)
        return A + up

    def hermitian_residue(self) -> float:
        """Relative distance of ``A - u v^*`` from being Hermitian."""
        A = self.to_dense()
        F = A - np.outer(self.u, self.v.conj())
        scale = max(np.linalg.norm(A), 1.0)
        return float(np.linalg.norm(F - F.conj().T) / scale)

    def hessenberg_residue(self) -> float:
        """Largest stored lower entry below the first subdiagonal."""
        return max((abs(v) for v in self.extra.values()), default=0.0)


class LeadingCoefficientError(ValueError):
    """The leading coefficient is zero or negligible."""


class DegenerateDegreeError(ValueError):
    """Degree below 2; such polynomials are solved without a matrix."""


def monic_scale(coeffs) -> np.ndarray:
    c = np.asarray(coeffs)
    return c / c[-1]


def linear_root(coeffs):
    """Root of ``c0 + c1 T_1(x)``."""
    c = np.asarray(coeffs)
    return -c[0] / c[1]


def strip_leading_zeros(coeffs) -> np.ndarray:
    """Drop exactly-zero highest-degree coefficients."""
    c = np.atleast_1d(np.asarray(coeffs))
    nz = np.nonzero(c)[0]
    if len(nz) == 0:
        raise ValueError("the zero polynomial has no well-defined roots")
    return c[: nz[-1] + 1]


def build_colleague(coeffs, monic_tol: float | None = None, dtype=None) -> Generators:
    """Generators of the colleague matrix of ``sum_k coeffs[k] T_k``.

    The basis is ordered from ``T_{n-1}`` (row 0) down to ``T_0`` (last row),
    with ``T_0`` scaled by ``1/sqrt(2)`` so that the tridiagonal part is
    symmetric.  The result is upper Hessenberg with subdiagonal
    ``(1/2, ..., 1/2, sqrt(2)/2)``, ``u = e_0`` and
    ``v = conj(w)``, ``w = -(p_{n-1}, ..., p_1, sqrt(2) p_0) / (2 p_n)``.
    ``d`` holds the diagonal of the full matrix, so ``d = (w_0, 0, ..., 0)``.

    Parameters
    ----------
    coeffs : array_like
        Chebyshev coefficients, index 0 first; degree at least 2.
    monic_tol : float, optional
        Reject when ``|p_n| <= monic_tol * max|p_k|``; default ``1e-300 n``.
    dtype : numpy dtype, optional
        Force real (``float64``) or complex (``complex128``) storage.

    Raises
    ------
    DegenerateDegreeError
        Degree 0 or 1.
    LeadingCoefficientError
        Negligible leading coefficient.
    """
    c = np.atleast_1d(np.asarray(coeffs))
    if not np.all(np.isfinite(c)):
        raise ValueError("coefficients must be finite")
    n = len(c) - 1
    if n < 2:
        raise DegenerateDegreeError(f"degree {n} polynomial; solve it directly")
    tol = 1e-300 * n if monic_tol is None else monic_tol
    if not abs(c[n]) > tol * np.max(np.abs(c)):
        raise LeadingCoefficientError("leading coefficient is zero or negligible")
    if dtype is None:
        dtype = np.complex128 if np.iscomplexobj(c) else np.float64
    w = c[n - 1::-1].astype(np.result_type(c, float)).copy()
    w[-1] *= np.sqrt(2.0)
    w = -w / (2.0 * c[n])
    d = np.zeros(n, dtype=dtype)
    d[0] = w[0]
    beta = np.full(n - 1, 0.5, dtype=dtype)
    beta[-1] = np.sqrt(0.5)
    u = np.zeros(n, dtype=dtype)
    u[0] = 1.0
    v = np.conj(w).astype(dtype)
    return Generators(d, beta, u, v)


def colleague_dense(coeffs) -> np.ndarray:
    """Dense colleague matrix built entry by entry from the recurrence.

    Independent of :func:`build_colleague`; used as a reference.
    """
    c = strip_leading_zeros(coeffs)
    n = len(c) - 1
    A = np.zeros((n, n), dtype=np.result_type(c, float))
    if n == 1:
        A[0, 0] = -c[0] / c[1]
        return A
    # row r expresses x * t_r in the basis t = (T_{n-1}, ..., T_1, T_0 / sqrt 2)
    h = np.sqrt(0.5)
    for r in range(1, n):
        k = n - 1 - r
        A[r, r - 1] = 0.5 if k >= 1 else h
        if k >= 1:
            A[r, r + 1] = 0.5 if k >= 2 else h
    if n >= 2:
        A[0, 1] = 0.5 if n >= 3 else h
    A[0, :] -= np.concatenate([c[n - 1:0:-1], [np.sqrt(2.0) * c[0]]]) / (2.0 * c[n])
    return A
