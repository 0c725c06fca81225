"""Reference computations: dense Hessenberg QR and the coefficient backward error."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
from numba import njit

from . import _kernels as K
from .chebtech import roots_to_cheb

DENSE_MAX = 1024


@njit(cache=True)
def _dense_qr(H, eigs, eps, max_sweeps, seed):
    if seed >= 0:
        np.random.seed(seed)
    n = H.shape[0]
    hi = n - 1
    its = 0
    sweeps = 0
    while hi >= 0:
        lo = hi
        while lo > 0:
            b = H[lo, lo - 1]
            if b == 0 or abs(b) <= eps * (abs(H[lo - 1, lo - 1]) + abs(H[lo, lo])):
                H[lo, lo - 1] = 0
                break
            lo -= 1
        if lo == hi:
            eigs[hi] = H[hi, hi]
            hi -= 1
            its = 0
            continue
        if lo == hi - 1:
            l1, l2 = K.eig2(H[lo, lo], H[lo, hi], H[hi, lo], H[hi, hi])
            eigs[lo] = l1
            eigs[hi] = l2
            hi -= 2
            its = 0
            continue
        if sweeps >= max_sweeps:
            return 1
        its += 1
        a = H[hi - 1, hi - 1]
        dd = H[hi, hi]
        l1, l2 = K.eig2(a, H[hi - 1, hi], H[hi, hi - 1], dd)
        sigma = l1 if abs(l1 - dd) <= abs(l2 - dd) else l2
        if its % K.EXC_PERIOD == 0:
            s = abs(H[hi, hi - 1]) + abs(H[hi - 1, hi - 2])
            sigma = sigma + 0.75 * s * np.exp(2j * np.pi * np.random.random())
        x = H[lo, lo] - sigma
        y = H[lo + 1, lo]
        for k in range(lo, hi):
            if k > lo:
                x = H[k, k - 1]
                y = H[k + 1, k - 1]
            c, s, r = K.givens(x, y)
            if k > lo:
                H[k, k - 1] = r
                H[k + 1, k - 1] = 0
            sc = np.conj(s)
            for q in range(k, hi + 1):
                p0 = H[k, q]
                p1 = H[k + 1, q]
                H[k, q] = c * p0 + s * p1
                H[k + 1, q] = -sc * p0 + c * p1
            for r_ in range(lo, min(k + 2, hi) + 1):
                p0 = H[r_, k]
                p1 = H[r_, k + 1]
                H[r_, k] = c * p0 + sc * p1
                H[r_, k + 1] = -s * p0 + c * p1
        sweeps += 1
    return 0


def dense_hessenberg_qr(A, balance: bool = False, eps: float = np.finfo(float).eps,
                        max_sweeps: int | None = None, seed: int = 0) -> np.ndarray:
    """Eigenvalues of a dense matrix by shifted Hessenberg QR.

    Unstructured complex single-shift iteration with Wilkinson shifts.  No
    balancing is applied unless ``balance`` is set, in which case a
    diagonal similarity scaling precedes the reduction.  Non-Hessenberg
    input is reduced to Hessenberg form first.

    Raises
    ------
    RuntimeError
        When ``max_sweeps`` (default ``50 n``) is exhausted.
    """
    A = np.array(A, dtype=np.complex128)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("matrix must be square")
    if n > DENSE_MAX:
        raise ValueError(f"dense oracle limited to n <= {DENSE_MAX}")
    if balance:
        A, _ = scipy.linalg.matrix_balance(A, permute=False)
    if np.any(np.tril(A, -2) != 0):
        A = scipy.linalg.hessenberg(A)
    A = np.ascontiguousarray(A, dtype=np.complex128)
    eigs = np.full(n, np.nan + 0j)
    st = _dense_qr(A, eigs, eps, 50 * n if max_sweeps is None else max_sweeps, seed)
    if st != 0:
        raise RuntimeError("dense Hessenberg QR did not converge")
    return eigs


@dataclass
class BackwardErrorReport:
    """Scale-minimized relative coefficient distance.

    ``alpha_complex`` marks runs where the optimal scale was taken over the
    complex numbers (complex coefficient input).
    """

    B: float
    alpha: complex
    residual_norm: float
    p_norm: float
    alpha_complex: bool = False


def backward_error_coeffs(c, chat) -> BackwardErrorReport:
    """``min_alpha ||c - alpha chat|| / ||c||`` for given coefficient vectors."""
    c = np.asarray(c)
    chat = np.asarray(chat)
    if c.shape != chat.shape:
        raise ValueError("coefficient vectors differ in length")
    cplx = np.iscomplexobj(c) and np.any(np.imag(c) != 0)
    den = np.vdot(chat, chat).real
    ip = np.vdot(chat, c)
    alpha = ip / den if cplx else complex(ip.real / den)
    res = np.linalg.norm(c - alpha * chat)
    cn = np.linalg.norm(c)
    B = float(min(res / cn, 1.0)) if cn > 0 else 0.0
    return BackwardErrorReport(B, alpha, float(res), float(cn), bool(cplx))


def backward_error(coeffs, roots) -> BackwardErrorReport:
    """Relative backward error of computed roots on the coefficients.

    ``coeffs`` is normalized by its leading coefficient; the product
    ``prod_j (x - roots[j])`` is expanded in the Chebyshev basis (rescaled
    along the way, which the optimal scale absorbs) and compared to it.
    """
    c = np.asarray(coeffs)
    c = c / c[-1]
    roots = np.asarray(roots)
    if len(roots) != len(c) - 1:
        raise ValueError("number of roots must equal the degree")
    if not np.all(np.isfinite(roots)):
        raise ValueError("roots must be finite")
    chat = roots_to_cheb(roots, normalize=True)
    return backward_error_coeffs(c, chat)
