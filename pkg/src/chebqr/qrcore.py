"""Structured single- and double-shift QR iteration on colleague generators.

The heavy lifting happens in compiled kernels; this module provides the
step-level API (leading columns, chasing steps, probes, deflation, shifts)
and the sequential driver :func:`eigenvalues`.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K
from .colleague import Generators

EPS = np.finfo(float).eps


class ConvergenceError(RuntimeError):
    """The QR iteration hit its sweep budget.

    ``report`` holds the partial :class:`RootReport`; unconverged
    eigenvalues are NaN.
    """

    def __init__(self, message: str, report: "RootReport"):
        super().__init__(message)
        self.report = report


@dataclass
class SweepPlan:
    """Shift description for one sweep.

    Single mode uses ``shift``; double mode uses the real quadratic
    ``z^2 - trace z + det`` whose roots are the conjugate shift pair.
    """

    mode: str = "single"
    shift: complex = 0j
    trace: float = 0.0
    det: float = 0.0

    @classmethod
    def single(cls, sigma) -> "SweepPlan":
        return cls("single", complex(sigma))

    @classmethod
    def double(cls, re_sigma: float, abs2_sigma: float) -> "SweepPlan":
        return cls("double", complex(re_sigma), 2.0 * re_sigma, abs2_sigma)


class StabilityTracker:
    """Running supremum of the windowed generator products.

    Parameters
    ----------
    g : Generators
        Matrix used to seed the supremum with a full scan.
    j : int
        Window width (1 for single shift, 2 for double shift).
    full_scan : bool
        Also maintain a reference value computed by rescanning every window
        after every rotation.  O(n) per rotation; meant for testing.
    """

    def __init__(self, g: Generators, j: int = 1, full_scan: bool = False):
        self.window_j = j
        self.trk = np.zeros(4)
        self.trk[0] = K.full_scan(g.u, g.v, j)
        self.trk[1] = self.trk[0]
        self.trk[3] = 1.0 if full_scan else 0.0
        self.sweeps = 0

    @property
    def gamma_hat(self) -> float:
        return float(np.sqrt(self.trk[0]))

    @property
    def gamma_hat_fullscan(self) -> float:
        return float(np.sqrt(self.trk[1]))

    @property
    def rotations_applied(self) -> int:
        return int(self.trk[2])

    def merge(self, other: "StabilityTracker") -> None:
        self.trk[0] = max(self.trk[0], other.trk[0])
        self.trk[1] = max(self.trk[1], other.trk[1])
        self.trk[2] += other.trk[2]
        self.sweeps += other.sweeps


@dataclass
class RootReport:
    """Eigenvalues plus the diagnostics gathered while computing them.

    ``deflations`` lists ``(position, sweep)`` pairs with 0-based positions.
    """

    eigenvalues: np.ndarray
    iterations: int
    gamma_hat: float
    deflations: list = field(default_factory=list)
    mode: str = "single"
    rotations: int = 0
    aed_calls: int = 0
    aed_sweeps: int = 0
    aed_deflated: int = 0
    exceptional_shifts: int = 0
    workers: int = 1
    diagnostics: list = field(default_factory=list)
    aed_records: list = field(default_factory=list)
    converged: bool = True
    tickets: list = field(default_factory=list)
    flushes: list = field(default_factory=list)

    def diagnostics_jsonl(self) -> str:
        return "\n".join(json.dumps(r) for r in self.diagnostics + self.aed_records)


# ---------------------------------------------------------------------------
# step-level API


def leading_column_single(g: Generators, sigma):
    """First two entries of ``(A - sigma I) e_lo`` at the active window head."""
    lo = g.active[0]
    return g.d[lo] - sigma, g.beta[lo]


def leading_column_double(g: Generators, re_sigma: float, abs2_sigma: float):
    """First three entries of ``(A^2 - 2 Re(sigma) A + |sigma|^2 I) e_lo``."""
    lo = g.active[0]
    return K.leading_double(g.d, g.beta, g.u, g.v, lo, 2.0 * re_sigma, abs2_sigma)


def _window(g: Generators):
    lo, hi = g.active
    return lo, hi - 1


def start_sweep_single(g: Generators, sigma, tracker: StabilityTracker) -> None:
    """Apply the shifted first rotation and store the resulting bulge."""
    lo, hi = _window(g)
    b = K.start_single(g.d, g.beta, g.u, g.v, lo, hi, sigma, tracker.trk, g.beta[:0], 0)
    if lo + 2 <= hi:
        g.extra[(lo + 2, lo)] = b


def chase_step_single(g: Generators, i: int, tracker: StabilityTracker) -> None:
    """Annihilate the bulge at ``(i+1, i-1)`` with a rotation on rows ``(i, i+1)``."""
    _, hi = _window(g)
    b = g.extra.pop((i + 1, i - 1), 0.0)
    nb = K.chase_single(g.d, g.beta, g.u, g.v, i, hi, b, tracker.trk, g.beta[:0], 0)
    if i + 2 <= hi:
        g.extra[(i + 2, i)] = nb


def sweep_single(g: Generators, sigma, tracker: StabilityTracker) -> None:
    """One complete single-shift sweep over the active window."""
    lo, hi = _window(g)
    start_sweep_single(g, sigma, tracker)
    for i in range(lo + 1, hi):
        chase_step_single(g, i, tracker)
    tracker.sweeps += 1


def _double_step(g: Generators, k: int, a, b3, first: bool, tracker):
    _, hi = _window(g)
    b1, b2, b3n = K.step_double(g.d, g.beta, g.u, g.v, k, hi, a[0], a[1], a[2], b3,
                                first, tracker.trk)
    if k + 2 <= hi:
        g.extra[(k + 2, k)] = b1
    if k + 3 <= hi:
        g.extra[(k + 3, k)] = b2
        g.extra[(k + 3, k + 1)] = b3n


def start_sweep_double(g: Generators, plan: SweepPlan, tracker: StabilityTracker) -> None:
    lo, _ = _window(g)
    x = K.leading_double(g.d, g.beta, g.u, g.v, lo, plan.trace, plan.det)
    _double_step(g, lo, x, 0.0, True, tracker)


def chase_step_double(g: Generators, i: int, tracker: StabilityTracker) -> None:
    """Push the three-entry bulge hanging below column ``i-1`` one row down."""
    a = (g.beta[i - 1], g.extra.pop((i + 1, i - 1), 0.0), g.extra.pop((i + 2, i - 1), 0.0))
    b3 = g.extra.pop((i + 2, i), 0.0)
    _double_step(g, i, a, b3, False, tracker)


def sweep_double(g: Generators, plan: SweepPlan, tracker: StabilityTracker) -> None:
    lo, hi = _window(g)
    start_sweep_double(g, plan, tracker)
    for i in range(lo + 1, hi):
        chase_step_double(g, i, tracker)
    tracker.sweeps += 1


def gamma_probe(g: Generators, touched_lo: int, touched_hi: int, j: int,
                tracker: StabilityTracker | None = None) -> float:
    """Largest window product among windows overlapping rows ``touched_lo..touched_hi``.

    The value is folded into ``tracker`` when one is given.
    """
    n = g.n
    best = 0.0
    for i in range(max(0, touched_lo - j - 1), min(n - j - 1, touched_hi + 1) + 1):
        best = max(best, K.window_sq(g.u, g.v, i, j))
    if tracker is not None:
        tracker.trk[0] = max(tracker.trk[0], best)
    return float(np.sqrt(best))


def gamma(u, v, j: int = 1) -> float:
    """``gamma_j(u, v)``: the largest window product over all windows."""
    return float(np.sqrt(K.full_scan(np.asarray(u), np.asarray(v), j)))


def deflation_scan(g: Generators, eps: float = EPS) -> list:
    """Zero negligible subdiagonal entries of the active window.

    Returns the deflated positions ``i`` (coupling rows ``i`` and ``i+1``)
    and narrows ``g.active`` to the trailing unreduced block.
    """
    lo, hi = _window(g)
    out = np.empty(max(hi - lo, 0), dtype=np.int64)
    m = K.deflation_positions(g.d, g.beta, lo, hi, eps, out)
    pos = [int(p) for p in out[:m]]
    if pos:
        g.active = (pos[-1] + 1, hi + 1)
    return pos


def wilkinson_shift(g: Generators, mode: str = "single") -> SweepPlan:
    """Shift from the trailing 2x2 block of the active window."""
    _, hi = _window(g)
    if mode == "double":
        a = g.d[hi - 1]
        b = K.superdiag(g.beta, g.u, g.v, hi - 1)
        c = g.beta[hi - 1]
        dd = g.d[hi]
        return SweepPlan("double", complex(0.5 * (a + dd)), float(a + dd), float(a * dd - b * c))
    return SweepPlan.single(K.wilkinson(g.d, g.beta, g.u, g.v, hi))


# ---------------------------------------------------------------------------
# driver


def default_seed() -> int:
    env = os.environ.get("CHEBQR_SEED")
    return int(env) if env not in (None, "") else 0


@dataclass
class SolverOptions:
    """Knobs of the sequential driver.

    ``aed_window = 0`` selects ``min(32, max(4, active // 16))``.  AED runs
    every ``aed_every`` sweeps, after every deflation and when the shift
    pool runs dry; it is repeated at once when at least ``aed_nibble``
    percent of the window deflated.
    """

    mode: str = "single"
    aed: bool = True
    aed_window: int = 0
    aed_every: int = 5
    aed_min: int = 48
    aed_nibble: int = 14
    eps: float = EPS
    max_sweeps: int | None = None
    seed: int | None = None
    record: bool = False
    full_scan: bool = False


def _report(eigs, cnt, trk, dlog, diag, aedrec, mode, converged, workers=1):
    ndefl = int(cnt[K.C_NDEFL])
    nsw = int(cnt[K.C_SWEEPS])
    diagnostics = []
    for row in diag[: min(nsw, len(diag))]:
        diagnostics.append({
            "sweep": int(row[0]),
            "active_window": [int(row[1]) + 1, int(row[2]) + 1],
            "shift": [float(row[3]), float(row[4])],
            "gamma_hat": float(row[5]),
            "deflations": int(row[6]),
        })
    aed_records = [{"k": int(r[0]), "deflated": int(r[1]), "shifts_returned": int(r[2]),
                    "spike_norm": float(r[3])} for r in aedrec[: int(cnt[K.C_AED_REC])]]
    return RootReport(
        eigenvalues=eigs,
        iterations=nsw,
        gamma_hat=float(np.sqrt(trk[0])),
        deflations=[(int(p), int(s)) for p, s in dlog[:ndefl]],
        mode=mode,
        rotations=int(trk[2]),
        aed_calls=int(cnt[K.C_AED_CALLS]),
        aed_sweeps=int(cnt[K.C_AED_SWEEPS]),
        aed_deflated=int(cnt[K.C_AED_DEFLATED]),
        exceptional_shifts=int(cnt[K.C_EXCEPTIONAL]),
        workers=workers,
        diagnostics=diagnostics,
        aed_records=aed_records,
        converged=converged,
    )


def prepare(g: Generators, mode: str, overwrite: bool) -> Generators:
    """Copy (unless ``overwrite``) and cast generators to the mode's dtype."""
    if mode not in ("single", "double"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "double":
        if any(np.iscomplexobj(a) and np.any(np.imag(a) != 0) for a in (g.d, g.beta, g.u, g.v)):
            raise ValueError("double-shift mode requires real generators")
        dt = np.float64
    else:
        dt = np.complex128
    if overwrite and all(a.dtype == dt for a in (g.d, g.beta, g.u, g.v)):
        return g
    out = Generators(*(np.ascontiguousarray(np.real(a) if dt == np.float64 else a, dtype=dt)
                       for a in (g.d, g.beta, g.u, g.v)), g.active, dict(g.extra))
    if overwrite:
        g.d, g.beta, g.u, g.v = out.d, out.beta, out.u, out.v
        return g
    return out


def eigenvalues(g: Generators, options: SolverOptions | None = None, overwrite: bool = False,
                tracker: StabilityTracker | None = None, **kwargs) -> RootReport:
    """All eigenvalues of the matrix encoded by ``g``.

    Parameters
    ----------
    g : Generators
        Upper Hessenberg Hermitian-plus-rank-one matrix without bulges.
    options : SolverOptions, optional
        Driver settings; keyword arguments override individual fields.
    overwrite : bool
        Iterate on ``g`` in place instead of a copy.
    tracker : StabilityTracker, optional
        Tracker to continue; a fresh one is seeded otherwise.

    Returns
    -------
    RootReport

    Raises
    ------
    ConvergenceError
        When the sweep budget ``50 n`` (or ``max_sweeps``) is exhausted.
    """
    opts = options or SolverOptions()
    for key, val in kwargs.items():
        if not hasattr(opts, key):
            raise TypeError(f"unknown option {key!r}")
        opts = SolverOptions(**{**opts.__dict__, key: val})
    if g.extra:
        raise ValueError("generators carry bulge entries; finish the sweep first")
    g = prepare(g, opts.mode, overwrite)
    n = g.n
    j = 2 if opts.mode == "double" else 1
    if tracker is None:
        tracker = StabilityTracker(g, j, opts.full_scan)
    eigs = np.full(n, np.nan + 0j)
    cnt = np.zeros(K.N_CNT, dtype=np.int64)
    dlog = np.zeros((n, 2), dtype=np.int64)
    max_sweeps = opts.max_sweeps if opts.max_sweeps is not None else 50 * n
    diag = np.zeros((max_sweeps if opts.record else 0, 7))
    aedrec = np.zeros((4 * n if opts.record else 0, 4))
    seed = opts.seed if opts.seed is not None else default_seed()
    if n == 1:
        eigs[0] = g.d[0]
        dlog[0] = (0, 0)
        cnt[K.C_NDEFL] = 1
        status = 0
    elif opts.mode == "double":
        status = K.qr_basic_double(g.d, g.beta, g.u, g.v, eigs, opts.eps, max_sweeps,
                                   tracker.trk, cnt, dlog, diag, seed)
    else:
        status = K.qr_aed_single(g.d, g.beta, g.u, g.v, 0, n - 1, eigs, opts.eps, max_sweeps,
                                 tracker.trk, cnt, dlog, diag, aedrec, opts.aed,
                                 opts.aed_window, opts.aed_every, opts.aed_min,
                                 opts.aed_nibble, seed)
    tracker.sweeps += int(cnt[K.C_SWEEPS])
    rep = _report(eigs, cnt, tracker.trk, dlog, diag, aedrec, opts.mode, status == 0)
    if status != 0:
        raise ConvergenceError(f"no convergence within {max_sweeps} sweeps", rep)
    return rep
