"""Aggressive early deflation on a trailing window of the active block.

The trailing ``k x k`` block of a Hermitian-plus-rank-one Hessenberg matrix
is itself Hermitian-plus-rank-one (its generators are the trailing slices),
so the window is reduced to Schur form with the same structured QR.  The
rotations are also applied to the coupling column, which becomes the
*spike*; trailing spike entries that are negligible deflate eigenvalues
and the rest of the window is rotated back to Hessenberg form.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .colleague import Generators
from .qrcore import EPS, StabilityTracker


@dataclass
class AedWindow:
    """A trailing window in Schur form together with its spike.

    ``w0`` is the first row of the window and ``k`` its size; ``spike[i]``
    is the entry at ``(w0 + i, w0 - 1)``.  ``coupling`` is the magnitude of
    the original subdiagonal entry that seeded the spike.
    """

    w0: int
    k: int
    spike: np.ndarray
    schur_diag: np.ndarray
    coupling: float
    converged: bool = True


def default_window(active: int) -> int:
    return int(K.aed_window_size(active))


def window_schur(g: Generators, k: int, tracker: StabilityTracker, eps: float = EPS) -> AedWindow:
    """Reduce the trailing ``k x k`` block of the active window to Schur form.

    ``g`` must hold complex generators.  On return the spike entries below
    the subdiagonal are recorded in ``g.extra`` so that ``g.to_dense()``
    shows the transformed matrix.
    """
    lo, hi = g.active[0], g.active[1] - 1
    if not 1 <= k < hi - lo + 1:
        raise ValueError("window size must satisfy 1 <= k < active size")
    w0 = hi - k + 1
    x = np.zeros(k, dtype=g.d.dtype)
    x[0] = g.beta[w0 - 1]
    coupling = abs(g.beta[w0 - 1])
    g.beta[w0 - 1] = 0
    weig = np.empty(k, dtype=np.complex128)
    cnt = np.zeros(K.N_CNT, dtype=np.int64)
    st = K.qr_basic_single(g.d, g.beta, g.u, g.v, w0, hi, weig, w0, eps, 50 * k, tracker.trk,
                           x, w0, True, cnt, K.C_AED_SWEEPS, np.zeros((0, 2), np.int64),
                           np.zeros((0, 7)))
    _store_spike(g, w0, x)
    return AedWindow(w0, k, x, g.d[w0:hi + 1].copy(), coupling, st == 0)


def _store_spike(g: Generators, w0: int, x: np.ndarray) -> None:
    for key in [key for key in g.extra if key[1] == w0 - 1]:
        del g.extra[key]
    g.beta[w0 - 1] = x[0] if len(x) else 0
    for i in range(1, len(x)):
        if x[i] != 0:
            g.extra[(w0 + i, w0 - 1)] = x[i]


def spike_deflations(win: AedWindow, eps: float = EPS) -> int:
    """Length of the maximal trailing run of negligible spike entries.

    Entry ``i`` is negligible when ``|x_i| <= min(coupling, |d_{w0+i}|) eps``.
    """
    nd = 0
    for i in range(win.k - 1, -1, -1):
        if abs(win.spike[i]) <= min(win.coupling, abs(win.schur_diag[i])) * eps:
            nd += 1
        else:
            break
    return nd


def restore_hessenberg(g: Generators, w0: int, j: int, spike, tracker: StabilityTracker,
                       log: list | None = None) -> None:
    """Rotate a spiked triangular block back to Hessenberg form.

    The block covers rows ``w0-1 .. w0+j-1``: column ``w0-1`` carries
    ``spike[0:j]`` and the trailing ``j x j`` part is upper triangular.
    Spike entries are annihilated from the bottom up; every rotation but
    the last of each round creates a bulge that is chased to row
    ``w0+j-1``.  Row pairs of the applied rotations are appended to ``log``.
    """
    x = np.array(spike[:j], dtype=g.d.dtype)
    e = w0 + j - 1
    for m in range(j - 1, 0, -1):
        r0 = w0 + m - 1
        c, s, r = K.givens(x[m - 1], x[m])
        x[m - 1] = r
        x[m] = 0
        if m == 1:
            g.beta[w0 - 1] = r
        bulge = K.sim_single(g.d, g.beta, g.u, g.v, r0, e, c, s)
        K.probe(g.u, g.v, r0, 1, tracker.trk)
        if log is not None:
            log.append((r0, r0 + 1))
        for kk in range(r0 + 1, e):
            bulge = K.chase_single(g.d, g.beta, g.u, g.v, kk, e, bulge, tracker.trk, x[:0], 0)
            if log is not None:
                log.append((kk, kk + 1))
    _store_spike(g, w0, x[:1])


def aed_step(g: Generators, k: int, tracker: StabilityTracker, eps: float = EPS,
             max_shifts: int | None = None):
    """One aggressive early deflation on the trailing ``k x k`` window.

    Returns
    -------
    deflated : int
        Number of deflated eigenvalues (``-1`` if the window solve failed
        and the matrix was rolled back).
    shifts : ndarray
        Undeflated window eigenvalues ordered by distance to the new corner.
    eigenvalues : ndarray
        The deflated eigenvalues, bottom row first.
    """
    lo, hi = g.active[0], g.active[1] - 1
    if not 1 <= k < hi - lo + 1:
        raise ValueError("window size must satisfy 1 <= k < active size")
    eigs = np.full(g.n, np.nan + 0j)
    cnt = np.zeros(K.N_CNT, dtype=np.int64)
    shifts = np.empty(k if max_shifts is None else max_shifts, dtype=np.complex128)
    nd, ns = K.aed_single(g.d, g.beta, g.u, g.v, lo, hi, k, eps, tracker.trk, eigs, cnt,
                          np.zeros((0, 2), np.int64), shifts, np.zeros((0, 4)))
    if nd > 0:
        g.active = (lo, hi - nd + 1)
    found = eigs[hi - max(nd, 0) + 1:hi + 1][::-1]
    return int(nd), shifts[:ns].copy(), found
