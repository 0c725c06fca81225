"""Parallel driver chasing several separated bulges at once."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numba
import numpy as np

from . import _kernels as K
from . import _pipeline as P
from .colleague import Generators
from .qrcore import (ConvergenceError, RootReport, SolverOptions, StabilityTracker, _report,
                     default_seed, eigenvalues, prepare)

GAP_SINGLE = 4
GAP_DOUBLE = 6
DEFAULT_CHUNK = 32


def min_spacing(chunk: int, gap: int = GAP_SINGLE) -> int:
    """Row separation between consecutive bulges at launch.

    Tickets advance ``chunk`` rows per super-step and a step reaches
    ``REACH_LO`` rows behind and ``REACH_HI`` ahead of its anchor; the
    spacing adds ``2 gap`` rows of slack on top of that.
    """
    return max(chunk + P.REACH_LO + P.REACH_HI, chunk + 2 * gap + 4)


@dataclass
class BulgeTicket:
    """One bulge in flight: its ordinal, shift and anchor row range in a super-step."""

    id: int
    round: int
    superstep: int
    start: int
    end: int
    state: str = "chasing"


def _threads(workers: int) -> int:
    t = max(1, min(workers, numba.config.NUMBA_NUM_THREADS))
    numba.set_num_threads(t)
    return t


def chase_pipeline(g: Generators, shifts, workers: int, tracker: StabilityTracker,
                   chunk: int = DEFAULT_CHUNK, trace: bool = False):
    """Apply one single-shift sweep per shift over the active window, pipelined.

    The result equals running :func:`chebqr.qrcore.sweep_single` for each
    shift in order.  Returns a list of :class:`BulgeTicket` records when
    ``trace`` is set.
    """
    shifts = np.ascontiguousarray(shifts, dtype=np.complex128)
    lo, hi = g.active[0], g.active[1] - 1
    if hi - lo + 1 < 3:
        raise ValueError("active window too small for bulge chasing")
    _threads(workers)
    cap = 64 * len(shifts) * (hi - lo + chunk) // chunk if trace else 0
    poslog = np.zeros((cap, 5), dtype=np.int64)
    nlog = np.zeros(1, dtype=np.int64)
    P.chase_pipeline(g.d, g.beta, g.u, g.v, lo, hi, shifts, len(shifts), workers, chunk,
                     min_spacing(chunk), tracker.trk, poslog, nlog, 0)
    tracker.sweeps += len(shifts)
    if trace:
        return _tickets(poslog[: nlog[0]])
    return None


def _tickets(poslog) -> list:
    return [BulgeTicket(int(r[2]), int(r[0]), int(r[1]), int(r[3]), int(r[4])) for r in poslog]


def parallel_eigenvalues(g: Generators, workers: int = 1, options: SolverOptions | None = None,
                         chunk: int = DEFAULT_CHUNK, trace: bool = False,
                         overwrite: bool = False, **kwargs) -> RootReport:
    """Eigenvalues via AED rounds feeding pipelined bulge chasing.

    With ``workers == 1`` this is exactly :func:`chebqr.qrcore.eigenvalues`.
    Otherwise AED windows of ``9 workers`` rows supply up to ``6 workers``
    shifts per round.  The report gains ``tickets`` (when ``trace`` is set)
    and ``flushes`` attributes.

    Double-shift mode has no pipelined variant and runs sequentially.
    """
    if workers < 1:
        raise ValueError("workers must be at least 1")
    opts = options or SolverOptions()
    if kwargs:
        opts = SolverOptions(**{**opts.__dict__, **kwargs})
    if workers == 1 or opts.mode == "double" or g.n < 3:
        if workers > 1 and opts.mode == "double":
            warnings.warn("double-shift mode runs sequentially", RuntimeWarning, stacklevel=2)
        rep = eigenvalues(g, opts, overwrite=overwrite)
        rep.tickets, rep.flushes = [], []
        return rep
    if g.extra:
        raise ValueError("generators carry bulge entries; finish the sweep first")
    g = prepare(g, "single", overwrite)
    n = g.n
    _threads(workers)
    tracker = StabilityTracker(g, 1, False)
    eigs = np.full(n, np.nan + 0j)
    cnt = np.zeros(K.N_CNT, dtype=np.int64)
    dlog = np.zeros((n, 2), dtype=np.int64)
    max_sweeps = opts.max_sweeps if opts.max_sweeps is not None else 50 * n
    diag = np.zeros((max_sweeps if opts.record else 0, 7))
    aedrec = np.zeros((4 * n if opts.record else 0, 4))
    poslog = np.zeros((2_000_000 if trace else 0, 5), dtype=np.int64)
    nlog = np.zeros(1, dtype=np.int64)
    flushlog = np.zeros((4 * n, 3), dtype=np.int64)
    seed = opts.seed if opts.seed is not None else default_seed()
    status = P.qr_parallel_single(g.d, g.beta, g.u, g.v, eigs, opts.eps, max_sweeps,
                                  tracker.trk, cnt, dlog, diag, aedrec, workers, chunk,
                                  min_spacing(chunk), seed, poslog, nlog, flushlog)
    rep = _report(eigs, cnt, tracker.trk, dlog, diag, aedrec, "single", status == 0, workers)
    rep.tickets = _tickets(poslog[: nlog[0]]) if trace else []
    rep.flushes = [{"tickets": int(a), "active": int(b), "deflations": int(c)}
                   for a, b, c in flushlog if a > 0]
    if status != 0:
        raise ConvergenceError(f"no convergence within {max_sweeps} sweeps", rep)
    return rep
