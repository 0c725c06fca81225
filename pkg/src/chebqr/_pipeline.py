"""Compiled pipelined multi-bulge driver (single shift).

Several bulges travel down the active block at once.  Each *ticket* owns
one shift and chases its bulge in chunks of ``chunk`` steps per
super-step; tickets are launched from the block head only once their
predecessor is ``spacing`` rows ahead, and every ticket advances the same
number of steps per super-step, so the separation never shrinks while
both are chasing.  A chasing step at row ``k`` reads and writes only rows
``k-3 .. k+4`` (the rotation touches ``k-1 .. k+2``; the stability probe
reads three rows further), hence tickets whose chunk ranges are
``chunk + 7`` rows apart never touch the same data and the pipelined
result is bitwise identical to running the sweeps one after another.
"""

import numba
import numpy as np
from numba import njit, prange

from . import _kernels as K

# prefer OpenMP; the TBB layer probe warns on older TBB installs
numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]

# rows a chasing step reaches below / above its anchor row
REACH_LO = 3
REACH_HI = 4


@njit(cache=True, parallel=True)
def _superstep(d, beta, u, v, lo, hi, ids, pos, bul, shifts, ltrk, chunk):
    for q in prange(ids.shape[0]):
        t = ids[q]
        p = pos[t]
        b = bul[t]
        end = min(p + chunk, hi)
        tr = ltrk[t]
        for k in range(p, end):
            if k == lo:
                b = K.start_single(d, beta, u, v, lo, hi, shifts[t], tr, beta[:0], 0)
            else:
                b = K.chase_single(d, beta, u, v, k, hi, b, tr, beta[:0], 0)
        pos[t] = end
        bul[t] = b


@njit(cache=True)
def chase_pipeline(d, beta, u, v, lo, hi, shifts, m, eff, chunk, spacing, trk,
                   poslog, nlog, round_id):
    """Run ``m`` single-shift sweeps on ``[lo, hi]`` as a bulge pipeline.

    At most ``eff`` tickets chase at once.  When ``poslog`` has rows, each
    ticket's super-step is recorded as ``(round, superstep, ticket, start,
    end)`` while ``nlog[0]`` counts the rows used.  Returns the number of
    super-steps.
    """
    pos = np.full(m, -1, dtype=np.int64)
    bul = np.zeros(m, dtype=d.dtype)
    ltrk = np.zeros((m, 4))
    injected = 0
    retired = 0
    ss = 0
    while retired < m:
        if injected < m:
            nact = injected - retired
            if nact == 0 or (nact < eff and pos[injected - 1] - lo >= spacing):
                pos[injected] = lo
                injected += 1
        ids = np.arange(retired, injected)
        if poslog.shape[0] > 0:
            for t in ids:
                r = nlog[0]
                if r < poslog.shape[0]:
                    poslog[r, 0] = round_id
                    poslog[r, 1] = ss
                    poslog[r, 2] = t
                    poslog[r, 3] = pos[t]
                    poslog[r, 4] = min(pos[t] + chunk, hi)
                    nlog[0] = r + 1
        _superstep(d, beta, u, v, lo, hi, ids, pos, bul, shifts, ltrk, chunk)
        while retired < injected and pos[retired] >= hi:
            retired += 1
        ss += 1
    for t in range(m):
        if ltrk[t, 0] > trk[0]:
            trk[0] = ltrk[t, 0]
        trk[2] += ltrk[t, 2]
    return ss


@njit(cache=True)
def qr_parallel_single(d, beta, u, v, eigs, eps, max_sweeps, trk, cnt, dlog, diag, aedrec,
                       workers, chunk, spacing, seed, poslog, nlog, flushlog):
    """Pipelined driver: AED rounds feeding bulge pipelines.

    The concurrency level starts at ``workers`` and halves while the active
    block is shorter than ``64`` rows per ticket; at one ticket the block is
    handed to the sequential driver.  Deflation is checked only between
    pipeline flushes.  ``flushlog`` rows record ``(tickets, active,
    deflations)`` per flush.
    """
    if seed >= 0:
        np.random.seed(seed)
    n = d.shape[0]
    hi = n - 1
    its = 0
    rnd = 0
    nflush = 0
    pool = np.empty(6 * workers, dtype=np.complex128)
    while hi >= 0:
        lo = K.find_lo(d, beta, 0, hi, eps)
        if lo == hi:
            eigs[hi] = d[hi]
            K._log(dlog, cnt, hi, cnt[K.C_SWEEPS])
            hi -= 1
            its = 0
            continue
        if lo == hi - 1:
            l1, l2 = K.eig2(d[lo] + 0j, K.superdiag(beta, u, v, lo) + 0j,
                            beta[lo] + 0j, d[hi] + 0j)
            eigs[lo] = l1
            eigs[hi] = l2
            K._log(dlog, cnt, hi, cnt[K.C_SWEEPS])
            K._log(dlog, cnt, lo, cnt[K.C_SWEEPS])
            hi -= 2
            its = 0
            continue
        active = hi - lo + 1
        eff = workers
        while eff > 1 and active < 64 * eff:
            eff //= 2
        if eff <= 1:
            st = K.qr_aed_single(d, beta, u, v, lo, hi, eigs, eps, max_sweeps, trk, cnt,
                                 dlog, diag, aedrec, True, 0, 5, 48, 14, -1)
            if st != 0:
                return 1
            hi = lo - 1
            continue
        if cnt[K.C_SWEEPS] >= max_sweeps:
            return 1
        its += 1
        if its % K.EXC_PERIOD == 0:
            sigma = K._exceptional(d, beta, u, v, lo, hi)
            cnt[K.C_EXCEPTIONAL] += 1
            K.sweep_single(d, beta, u, v, lo, hi, sigma, trk, beta[:0], 0)
            cnt[K.C_SWEEPS] += 1
            K._record(diag, cnt, lo, hi, sigma, trk)
            continue
        k = min(9 * eff, active - 1)
        nshift = 6 * eff
        nd, ns = K.aed_single(d, beta, u, v, lo, hi, k, eps, trk, eigs, cnt, dlog,
                              pool[:nshift], aedrec)
        if nd > 0:
            hi -= nd
            its = 0
            if nd * 100 >= 14 * k or ns == 0:
                continue
        if ns <= 0:
            sigma = K.wilkinson(d, beta, u, v, hi)
            K.sweep_single(d, beta, u, v, lo, hi, sigma, trk, beta[:0], 0)
            cnt[K.C_SWEEPS] += 1
            K._record(diag, cnt, lo, hi, sigma, trk)
            continue
        if hi - lo + 1 < 3:
            continue
        chase_pipeline(d, beta, u, v, lo, hi, pool, ns, eff, chunk, spacing, trk,
                       poslog, nlog, rnd)
        rnd += 1
        for t in range(ns):
            cnt[K.C_SWEEPS] += 1
            K._record(diag, cnt, lo, hi, pool[t], trk)
        if nflush < flushlog.shape[0]:
            flushlog[nflush, 0] = ns
            flushlog[nflush, 1] = hi - lo + 1
            flushlog[nflush, 2] = cnt[K.C_NDEFL]
            nflush += 1
    return 0
