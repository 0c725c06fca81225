"""Compiled kernels for the structured Hermitian-plus-rank-one QR iteration.

All routines work in place on the generator arrays ``d`` (diagonal),
``beta`` (subdiagonal), ``u`` and ``v`` (rank-one part ``u v^*``) with
0-based indices.  Entries strictly above the diagonal are never stored;
when needed they are rebuilt from the Hermitian symmetry of ``A - u v^*``::

    A[i, j] = conj(L[j, i]) - conj(u[j]) v[i] + u[i] conj(v[j]),   i < j

where ``L`` is the (sparse) lower part: ``beta`` on the subdiagonal plus
any bulge or spike entries currently in flight.

Shared bookkeeping arrays
-------------------------
trk : float64[4]
    ``[gamma_hat**2, gamma_hat_fullscan**2, rotations, fullscan_enabled]``.
cnt : int64[N_CNT]
    counters, indexed by the ``C_*`` constants below.
dlog : int64[n, 2]
    deflation events ``(position, sweep)``; a zero-row array disables logging.
diag : float64[m, 7]
    per-sweep records ``(sweep, lo, hi, re(shift), im(shift), gamma_hat,
    deflated)``; a zero-row array disables recording.
"""

import numpy as np
from numba import njit

C_SWEEPS = 0
C_AED_CALLS = 1
C_AED_SWEEPS = 2
C_AED_DEFLATED = 3
C_EXCEPTIONAL = 4
C_NDEFL = 5
C_AED_FAILED = 6
C_AED_REC = 7
N_CNT = 8

# stagnation period for exceptional shifts
EXC_PERIOD = 15


@njit(cache=True)
def _abs2(z):
    return z.real * z.real + z.imag * z.imag


@njit(cache=True)
def givens(a, b):
    """Return ``(c, s, r)`` with ``[[c, s], [-conj(s), c]] @ (a, b) = (r, 0)``.

    ``c`` is real and non-negative; ``r`` carries the phase of ``a``.
    """
    if b == 0:
        return 1.0, b * 0, a
    if a == 0:
        ab = abs(b)
        return 0.0, np.conj(b) / ab, a * 0 + ab
    aa = abs(a)
    ab = abs(b)
    rho = np.hypot(aa, ab)
    c = aa / rho
    ph = a / aa
    s = ph * (np.conj(b) / rho)
    return c, s, ph * rho


@njit(cache=True)
def superdiag(beta, u, v, k):
    """Entry ``A[k, k+1]`` rebuilt from the generators."""
    return np.conj(beta[k]) - np.conj(u[k + 1]) * v[k] + u[k] * np.conj(v[k + 1])


@njit(cache=True, inline="always")
def window_sq(u, v, i, j):
    """Squared product of the u- and v-window norms for window ``i`` of width ``j``.

    The u-window covers rows ``i .. i+j+1`` and the v-window rows
    ``i-1 .. i+j`` (both clipped to the matrix).
    """
    n = u.shape[0]
    su = 0.0
    for t in range(i, min(i + j + 1, n - 1) + 1):
        su += u[t].real * u[t].real + u[t].imag * u[t].imag
    sv = 0.0
    for t in range(max(0, i - 1), i + j + 1):
        sv += v[t].real * v[t].real + v[t].imag * v[t].imag
    return su * sv


@njit(cache=True)
def full_scan(u, v, j):
    """Largest squared window product over all windows of width ``j``."""
    n = u.shape[0]
    g = 0.0
    for i in range(0, n - j):
        w = window_sq(u, v, i, j)
        if w > g:
            g = w
    return g


@njit(cache=True)
def probe(u, v, k, j, trk):
    """Fold the windows touched by a rotation on rows ``(k, k+1)`` into ``trk``.

    ``trk[0]`` and ``trk[1]`` hold squared values; callers report square roots.
    """
    n = u.shape[0]
    g = trk[0]
    for i in range(max(0, k - j - 1), min(n - j - 1, k + 2) + 1):
        w = window_sq(u, v, i, j)
        if w > g:
            g = w
    trk[0] = g
    trk[2] += 1.0
    if trk[3] != 0.0:
        f = full_scan(u, v, j)
        if f > trk[1]:
            trk[1] = f


@njit(cache=True)
def rotate_pair(x, k, c, s):
    """Left-apply ``[[c, s], [-conj(s), c]]`` to ``x[k], x[k+1]``."""
    a = x[k]
    b = x[k + 1]
    x[k] = c * a + s * b
    x[k + 1] = -np.conj(s) * a + c * b


@njit(cache=True)
def sim_single(d, beta, u, v, k, hi, c, s):
    """Similarity ``R A R^*`` by a rotation on rows/cols ``(k, k+1)``.

    Lower entries of rows ``k, k+1`` left of column ``k`` are the caller's
    business.  Returns the bulge created at ``(k+2, k)`` (zero when
    ``k + 2 > hi``).
    """
    sc = np.conj(s)
    bk = beta[k]
    g = superdiag(beta, u, v, k)
    dk = d[k]
    dk1 = d[k + 1]
    m00 = c * dk + s * bk
    m01 = c * g + s * dk1
    m10 = -sc * dk + c * bk
    m11 = -sc * g + c * dk1
    d[k] = c * m00 + sc * m01
    beta[k] = c * m10 + sc * m11
    d[k + 1] = -s * m10 + c * m11
    rotate_pair(u, k, c, s)
    rotate_pair(v, k, c, s)
    if k + 2 <= hi:
        b1 = beta[k + 1]
        beta[k + 1] = c * b1
        return sc * b1
    return bk * 0


@njit(cache=True)
def chase_single(d, beta, u, v, k, hi, bulge, trk, x, xoff):
    """One bulge-chasing step: annihilate ``bulge`` at ``(k+1, k-1)``."""
    c, s, r = givens(beta[k - 1], bulge)
    beta[k - 1] = r
    if x.shape[0] > 0:
        rotate_pair(x, k - xoff, c, s)
    nb = sim_single(d, beta, u, v, k, hi, c, s)
    probe(u, v, k, 1, trk)
    return nb


@njit(cache=True)
def start_single(d, beta, u, v, lo, hi, sigma, trk, x, xoff):
    """First rotation of a single-shift sweep; returns the bulge at ``(lo+2, lo)``."""
    c, s, r = givens(d[lo] - sigma, beta[lo])
    if x.shape[0] > 0:
        rotate_pair(x, lo - xoff, c, s)
    nb = sim_single(d, beta, u, v, lo, hi, c, s)
    probe(u, v, lo, 1, trk)
    return nb


@njit(cache=True)
def sweep_single(d, beta, u, v, lo, hi, sigma, trk, x, xoff):
    """Full single-shift QR sweep on the unreduced block ``[lo, hi]``.

    ``x`` is an optional spike column (used inside aggressive early
    deflation windows) that receives every left rotation; pass an empty
    array when there is none.
    """
    bulge = start_single(d, beta, u, v, lo, hi, sigma, trk, x, xoff)
    for k in range(lo + 1, hi):
        bulge = chase_single(d, beta, u, v, k, hi, bulge, trk, x, xoff)


@njit(cache=True)
def eig2(a, b, c, dd):
    """Eigenvalues of ``[[a, b], [c, dd]]`` avoiding cancellation."""
    p = 0.5 * (a - dd)
    bc = b * c
    disc = np.sqrt(p * p + bc + 0j)
    if (np.conj(p) * disc).real < 0:
        disc = -disc
    y = p + disc
    if y == 0:
        return dd + p + 0j, dd + p + 0j
    return dd + y + 0j, dd - bc / y + 0j


@njit(cache=True)
def wilkinson(d, beta, u, v, hi):
    """Eigenvalue of the trailing 2x2 block closest to the corner entry."""
    a = d[hi - 1] + 0j
    b = superdiag(beta, u, v, hi - 1) + 0j
    c = beta[hi - 1] + 0j
    dd = d[hi] + 0j
    l1, l2 = eig2(a, b, c, dd)
    e1 = abs(l1 - dd)
    e2 = abs(l2 - dd)
    if e1 < e2:
        return l1
    if e2 < e1:
        return l2
    # tie: side of the corner entry, non-negative corners go right
    if dd.real >= 0:
        return l1 if l1.real >= l2.real else l2
    return l1 if l1.real < l2.real else l2


@njit(cache=True)
def triangularize2(d, beta, u, v, k, trk, x, xoff):
    """Rotate the 2x2 block at ``(k, k+1)`` to upper-triangular form."""
    a = d[k] + 0j
    b = superdiag(beta, u, v, k) + 0j
    c = beta[k] + 0j
    dd = d[k + 1] + 0j
    l1, _ = eig2(a, b, c, dd)
    # eigenvector for l1, whichever representation is better scaled
    y0 = b
    y1 = l1 - a
    z0 = l1 - dd
    z1 = c
    if _abs2(z0) + _abs2(z1) > _abs2(y0) + _abs2(y1):
        y0 = z0
        y1 = z1
    if y0 == 0 and y1 == 0:
        beta[k] = 0
        return
    cr, s, _ = givens(y0, y1)
    if x.shape[0] > 0:
        rotate_pair(x, k - xoff, cr, s)
    sim_single(d, beta, u, v, k, k + 1, cr, s)
    beta[k] = 0
    probe(u, v, k, 1, trk)


@njit(cache=True)
def find_lo(d, beta, lo0, hi, eps):
    """Start of the unreduced block ending at ``hi``; zeroes the splitting beta."""
    lo = hi
    while lo > lo0:
        b = beta[lo - 1]
        if b == 0:
            break
        if abs(b) <= eps * (abs(d[lo - 1]) + abs(d[lo])):
            beta[lo - 1] = 0
            break
        lo -= 1
    return lo


@njit(cache=True)
def deflation_positions(d, beta, lo, hi, eps, out):
    """Zero every negligible ``beta[i]``, ``lo <= i < hi``; returns the count."""
    m = 0
    for i in range(lo, hi):
        b = beta[i]
        if b == 0 or abs(b) <= eps * (abs(d[i]) + abs(d[i + 1])):
            beta[i] = 0
            out[m] = i
            m += 1
    return m


@njit(cache=True)
def _log(dlog, cnt, pos, sweep):
    if dlog.shape[0] > 0:
        m = cnt[C_NDEFL]
        dlog[m, 0] = pos
        dlog[m, 1] = sweep
        cnt[C_NDEFL] = m + 1


@njit(cache=True)
def _record(diag, cnt, lo, hi, sigma, trk):
    m = cnt[C_SWEEPS] - 1
    if m < diag.shape[0]:
        diag[m, 0] = m + 1
        diag[m, 1] = lo
        diag[m, 2] = hi
        diag[m, 3] = sigma.real
        diag[m, 4] = sigma.imag
        diag[m, 5] = np.sqrt(trk[0])
        diag[m, 6] = cnt[C_NDEFL]


@njit(cache=True)
def _exceptional(d, beta, u, v, lo, hi):
    s = abs(beta[hi - 1])
    if hi - 2 >= lo:
        s += abs(beta[hi - 2])
    theta = 2.0 * np.pi * np.random.random()
    return wilkinson(d, beta, u, v, hi) + 0.75 * s * np.exp(1j * theta)


@njit(cache=True)
def qr_basic_single(d, beta, u, v, lo0, hi0, eigs, eoff, eps, max_sweeps,
                    trk, x, xoff, schur, cnt, slot, dlog, diag):
    """Single-shift structured QR on ``[lo0, hi0]`` without early deflation.

    With ``schur`` set, 2x2 blocks are rotated to triangular form so that
    the block ends in complex Schur form (needed for AED windows).
    Returns 0 on convergence, 1 when ``max_sweeps`` is exhausted.
    """
    hi = hi0
    its = 0
    done = 0
    while hi >= lo0:
        lo = find_lo(d, beta, lo0, hi, eps)
        if lo == hi:
            eigs[hi - eoff] = d[hi]
            _log(dlog, cnt, hi, cnt[C_SWEEPS])
            hi -= 1
            its = 0
            continue
        if lo == hi - 1:
            if schur:
                triangularize2(d, beta, u, v, lo, trk, x, xoff)
                eigs[lo - eoff] = d[lo]
                eigs[hi - eoff] = d[hi]
            else:
                l1, l2 = eig2(d[lo] + 0j, superdiag(beta, u, v, lo) + 0j,
                              beta[lo] + 0j, d[hi] + 0j)
                eigs[lo - eoff] = l1
                eigs[hi - eoff] = l2
            _log(dlog, cnt, hi, cnt[C_SWEEPS])
            _log(dlog, cnt, lo, cnt[C_SWEEPS])
            hi -= 2
            its = 0
            continue
        if done >= max_sweeps:
            return 1
        its += 1
        if its % EXC_PERIOD == 0:
            sigma = _exceptional(d, beta, u, v, lo, hi)
            cnt[C_EXCEPTIONAL] += 1
        else:
            sigma = wilkinson(d, beta, u, v, hi)
        sweep_single(d, beta, u, v, lo, hi, sigma, trk, x, xoff)
        done += 1
        cnt[slot] += 1
        if slot == C_SWEEPS:
            _record(diag, cnt, lo, hi, sigma, trk)
    return 0


@njit(cache=True)
def restore_hessenberg(d, beta, u, v, w0, j, x, trk):
    """Reduce the spiked block back to Hessenberg form.

    The block spans rows/cols ``w0-1 .. w0+j-1``: column ``w0-1`` holds the
    spike ``x[0:j]`` (``x[0]`` sits on the subdiagonal) and the trailing
    ``j x j`` part is upper triangular.  Spike entries are annihilated from
    the bottom; each annihilation except the last leaves a bulge that is
    chased to the end of the block.  Returns the number of rotations.
    """
    e = w0 + j - 1
    nrot = 0
    for m in range(j - 1, 0, -1):
        r0 = w0 + m - 1
        c, s, r = givens(x[m - 1], x[m])
        x[m - 1] = r
        x[m] = 0
        if m == 1:
            beta[w0 - 1] = r
        bulge = sim_single(d, beta, u, v, r0, e, c, s)
        probe(u, v, r0, 1, trk)
        nrot += 1
        for k in range(r0 + 1, e):
            bulge = chase_single(d, beta, u, v, k, e, bulge, trk, x[:0], 0)
            nrot += 1
    return nrot


@njit(cache=True)
def aed_single(d, beta, u, v, lo, hi, k, eps, trk, eigs, cnt, dlog, shifts, aedrec):
    """Aggressive early deflation on the trailing ``k x k`` window of ``[lo, hi]``.

    Deflated eigenvalues are written to ``eigs``; undeflated window
    eigenvalues are written to ``shifts`` ordered by distance to the new
    corner entry.  Returns ``(deflated, n_shifts)``; ``(-1, 0)`` signals a
    window that failed to converge and was rolled back.
    """
    w0 = hi - k + 1
    cnt[C_AED_CALLS] += 1
    cd = d[w0:hi + 1].copy()
    cb = beta[w0 - 1:hi].copy()
    cu = u[w0:hi + 1].copy()
    cv = v[w0:hi + 1].copy()
    x = np.zeros(k, dtype=d.dtype)
    x[0] = beta[w0 - 1]
    bnorm = abs(beta[w0 - 1])
    beta[w0 - 1] = 0
    weig = np.empty(k, dtype=np.complex128)
    st = qr_basic_single(d, beta, u, v, w0, hi, weig, w0, eps, 50 * k,
                         trk, x, w0, True, cnt, C_AED_SWEEPS, dlog[:0], np.empty((0, 7)))
    if st != 0:
        d[w0:hi + 1] = cd
        beta[w0 - 1:hi] = cb
        u[w0:hi + 1] = cu
        v[w0:hi + 1] = cv
        cnt[C_AED_FAILED] += 1
        return -1, 0
    nd = 0
    for i in range(k - 1, -1, -1):
        tol = min(bnorm, abs(d[w0 + i])) * eps
        if abs(x[i]) <= tol:
            nd += 1
        else:
            break
    j = k - nd
    spike_norm = 0.0
    for i in range(k):
        spike_norm += _abs2(x[i])
    spike_norm = np.sqrt(spike_norm)
    for i in range(j, k):
        x[i] = 0
    for i in range(k - 1, j - 1, -1):
        eigs[w0 + i] = d[w0 + i]
        _log(dlog, cnt, w0 + i, cnt[C_SWEEPS])
    cnt[C_AED_DEFLATED] += nd
    ns = 0
    if j == 0:
        beta[w0 - 1] = 0
    else:
        beta[w0 - 1] = x[0]
        cand = np.empty(j, dtype=np.complex128)
        for i in range(j):
            cand[i] = d[w0 + i]
        restore_hessenberg(d, beta, u, v, w0, j, x, trk)
        corner = d[w0 + j - 1] + 0j
        dist = np.empty(j)
        for i in range(j):
            dist[i] = abs(cand[i] - corner)
        order = np.argsort(dist, kind="mergesort")
        ns = min(j, shifts.shape[0])
        for i in range(ns):
            shifts[i] = cand[order[i]]
    m = cnt[C_AED_REC]
    if m < aedrec.shape[0]:
        aedrec[m, 0] = k
        aedrec[m, 1] = nd
        aedrec[m, 2] = ns
        aedrec[m, 3] = spike_norm
        cnt[C_AED_REC] = m + 1
    return nd, ns


@njit(cache=True)
def aed_window_size(active):
    return min(32, max(4, active // 16))


@njit(cache=True)
def qr_aed_single(d, beta, u, v, lo0, hi0, eigs, eps, max_sweeps, trk, cnt, dlog,
                  diag, aedrec, use_aed, kfix, aed_every, aed_min, nibble, seed):
    """Sequential single-shift driver with optional aggressive early deflation.

    Processes the block ``[lo0, hi0]`` (the whole matrix in the usual case).
    Returns 0 on convergence and 1 when the sweep budget is exhausted.
    """
    if seed >= 0:
        np.random.seed(seed)
    hi = hi0
    its = 0
    pool = np.empty(max(kfix, 32), dtype=np.complex128)
    npool = 0
    pidx = 0
    since_aed = aed_every
    defl_since = True
    while hi >= lo0:
        lo = find_lo(d, beta, lo0, hi, eps)
        if lo == hi:
            eigs[hi] = d[hi]
            _log(dlog, cnt, hi, cnt[C_SWEEPS])
            hi -= 1
            its = 0
            defl_since = True
            continue
        if lo == hi - 1:
            l1, l2 = eig2(d[lo] + 0j, superdiag(beta, u, v, lo) + 0j,
                          beta[lo] + 0j, d[hi] + 0j)
            eigs[lo] = l1
            eigs[hi] = l2
            _log(dlog, cnt, hi, cnt[C_SWEEPS])
            _log(dlog, cnt, lo, cnt[C_SWEEPS])
            hi -= 2
            its = 0
            defl_since = True
            continue
        active = hi - lo + 1
        if use_aed and active >= aed_min and (since_aed >= aed_every or defl_since
                                              or pidx >= npool):
            k = kfix if kfix > 0 else aed_window_size(active)
            k = min(k, active - 1)
            nd, ns = aed_single(d, beta, u, v, lo, hi, k, eps, trk, eigs, cnt,
                                dlog, pool, aedrec)
            since_aed = 0
            defl_since = False
            pidx = 0
            npool = max(ns, 0)
            if nd > 0:
                hi -= nd
                its = 0
                if nd * 100 >= nibble * k:
                    since_aed = aed_every
                continue
        if cnt[C_SWEEPS] >= max_sweeps:
            return 1
        its += 1
        if its % EXC_PERIOD == 0:
            sigma = _exceptional(d, beta, u, v, lo, hi)
            cnt[C_EXCEPTIONAL] += 1
        elif pidx < npool:
            sigma = pool[pidx]
            pidx += 1
        else:
            sigma = wilkinson(d, beta, u, v, hi)
        sweep_single(d, beta, u, v, lo, hi, sigma, trk, beta[:0], 0)
        cnt[C_SWEEPS] += 1
        since_aed += 1
        _record(diag, cnt, lo, hi, sigma, trk)
    return 0


# ---------------------------------------------------------------------------
# double shift (real arithmetic)


@njit(cache=True)
def leading_double(d, beta, u, v, lo, tr, det):
    """First three entries of ``(A^2 - tr A + det I) e_lo``."""
    g = superdiag(beta, u, v, lo)
    x0 = d[lo] * d[lo] + g * beta[lo] - tr * d[lo] + det
    x1 = beta[lo] * (d[lo] + d[lo + 1] - tr)
    x2 = beta[lo] * beta[lo + 1]
    return x0, x1, x2


@njit(cache=True)
def _rot_rows(B, r, c, s):
    for q in range(B.shape[1]):
        a = B[r, q]
        b = B[r + 1, q]
        B[r, q] = c * a + s * b
        B[r + 1, q] = -np.conj(s) * a + c * b


@njit(cache=True)
def _rot_cols(B, q, c, s):
    sc = np.conj(s)
    for r in range(B.shape[0]):
        a = B[r, q]
        b = B[r, q + 1]
        B[r, q] = c * a + sc * b
        B[r, q + 1] = -s * a + c * b


@njit(cache=True)
def step_double(d, beta, u, v, k, hi, a0, a1, a2, b3, first, trk):
    """One double-shift step at position ``k``.

    ``(a0, a1, a2)`` is the column to reduce: the shifted first column when
    ``first`` is set, otherwise ``(beta[k-1], b[k+1,k-1], b[k+2,k-1])``.
    ``b3`` is the bulge entry at ``(k+2, k)``.  Returns the new bulge
    ``(b[k+2,k], b[k+3,k], b[k+3,k+1])``.
    """
    two = k + 2 <= hi
    ca = 1.0
    sa = 0.0 * a0
    if two:
        ca, sa, a1 = givens(a1, a2)
    cb, sb, r = givens(a0, a1)
    if not first:
        beta[k - 1] = r
    nr = min(4, hi - k + 1)
    nc = min(3, hi - k + 1)
    B = np.zeros((nr, nc), dtype=d.dtype)
    B[0, 0] = d[k]
    B[1, 0] = beta[k]
    B[0, 1] = superdiag(beta, u, v, k)
    B[1, 1] = d[k + 1]
    if nc == 3:
        B[2, 0] = b3
        B[2, 1] = beta[k + 1]
        B[2, 2] = d[k + 2]
        B[1, 2] = superdiag(beta, u, v, k + 1)
        B[0, 2] = np.conj(b3) - np.conj(u[k + 2]) * v[k] + u[k] * np.conj(v[k + 2])
    if nr == 4:
        B[3, 2] = beta[k + 2]
    if two:
        _rot_rows(B, 1, ca, sa)
    _rot_rows(B, 0, cb, sb)
    if two:
        _rot_cols(B, 1, ca, sa)
    _rot_cols(B, 0, cb, sb)
    d[k] = B[0, 0]
    d[k + 1] = B[1, 1]
    beta[k] = B[1, 0]
    nb1 = 0.0 * a0
    nb2 = 0.0 * a0
    nb3 = 0.0 * a0
    if nc == 3:
        d[k + 2] = B[2, 2]
        beta[k + 1] = B[2, 1]
        nb1 = B[2, 0]
    if nr == 4:
        beta[k + 2] = B[3, 2]
        nb2 = B[3, 0]
        nb3 = B[3, 1]
    if two:
        rotate_pair(u, k + 1, ca, sa)
        rotate_pair(v, k + 1, ca, sa)
        probe(u, v, k + 1, 2, trk)
    rotate_pair(u, k, cb, sb)
    rotate_pair(v, k, cb, sb)
    probe(u, v, k, 2, trk)
    return nb1, nb2, nb3


@njit(cache=True)
def sweep_double(d, beta, u, v, lo, hi, tr, det, trk):
    """Francis double-shift sweep on ``[lo, hi]`` (block size at least 3)."""
    x0, x1, x2 = leading_double(d, beta, u, v, lo, tr, det)
    b1, b2, b3 = step_double(d, beta, u, v, lo, hi, x0, x1, x2, 0.0 * x0, True, trk)
    for k in range(lo + 1, hi):
        b1, b2, b3 = step_double(d, beta, u, v, k, hi, beta[k - 1], b1, b2, b3, False, trk)


@njit(cache=True)
def eig2_real(a, b, c, dd):
    """Eigenvalues of a real 2x2 block; complex pairs are exact conjugates."""
    p = 0.5 * (a - dd)
    bc = b * c
    disc2 = p * p + bc
    if disc2 >= 0:
        y = p + np.copysign(np.sqrt(disc2), p)
        if y == 0:
            return dd + p + 0j, dd + p + 0j
        return dd + y + 0j, dd - bc / y + 0j
    re = 0.5 * (a + dd)
    im = np.sqrt(-disc2)
    return complex(re, im), complex(re, -im)


@njit(cache=True)
def qr_basic_double(d, beta, u, v, eigs, eps, max_sweeps, trk, cnt, dlog, diag, seed):
    """Real double-shift driver over the whole matrix."""
    if seed >= 0:
        np.random.seed(seed)
    n = d.shape[0]
    hi = n - 1
    its = 0
    while hi >= 0:
        lo = find_lo(d, beta, 0, hi, eps)
        if lo == hi:
            eigs[hi] = d[hi]
            _log(dlog, cnt, hi, cnt[C_SWEEPS])
            hi -= 1
            its = 0
            continue
        if lo == hi - 1:
            l1, l2 = eig2_real(d[lo], superdiag(beta, u, v, lo), beta[lo], d[hi])
            eigs[lo] = l1
            eigs[hi] = l2
            _log(dlog, cnt, hi, cnt[C_SWEEPS])
            _log(dlog, cnt, lo, cnt[C_SWEEPS])
            hi -= 2
            its = 0
            continue
        if cnt[C_SWEEPS] >= max_sweeps:
            return 1
        its += 1
        a = d[hi - 1]
        b = superdiag(beta, u, v, hi - 1)
        c = beta[hi - 1]
        dd = d[hi]
        if its % EXC_PERIOD == 0:
            s = (abs(beta[hi - 1]) + abs(beta[hi - 2])) * (0.75 + 0.5 * np.random.random())
            h = 0.75 * s + dd
            tr = 2.0 * h
            det = h * h + 0.4375 * s * s
            cnt[C_EXCEPTIONAL] += 1
        else:
            tr = a + dd
            det = a * dd - b * c
        sweep_double(d, beta, u, v, lo, hi, tr, det, trk)
        cnt[C_SWEEPS] += 1
        _record(diag, cnt, lo, hi, complex(0.5 * tr, 0.0), trk)
    return 0
