"""Command-line front end and the function rootfinding pipeline.

Subcommands::

    chebqr zeros EXPR [--tol T] [--workers N] [--json | --csv] [--all]
    chebqr zeros --coeffs FILE [...]
    chebqr eig --coeffs FILE [--all] [--json | --csv]
    chebqr bench --degrees 256,512,... [--workers N] [--no-aed]

Exit codes: 0 success, 2 expression error, 3 convergence failure,
4 unreadable coefficient file.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from .chebtech import (ChebSeries, CoefficientFileError, ResolutionError, adapt_interpolate,
                       clenshaw, clenshaw_derivative, read_coeffs)
from .colleague import build_colleague, linear_root, strip_leading_zeros
from .expr import ParseError, compile_expr
from .oracle import backward_error
from .parchase import parallel_eigenvalues
from .qrcore import ConvergenceError, RootReport, SolverOptions, default_seed

SCHEMA = "chebqr.report/1"
SUSPECT_GAMMA = 1e4
FILTER_TOL = 1e-8
DEDUP_TOL = 1e-13
RESIDUAL_TOL = 1e-8


@dataclass
class ZerosReport:
    """Roots of a function on ``[-1, 1]`` with the solver's diagnostics."""

    real_roots: np.ndarray
    degree: int
    gamma_hat: float
    B: float
    iterations: int
    p_norm: float
    stability: str = "ok"
    all_eigenvalues: np.ndarray | None = None
    workers: int = 1
    mode: str = "single"
    elapsed: float = 0.0
    notes: list = field(default_factory=list)
    coeffs: np.ndarray | None = None

    def to_dict(self, include_all: bool = False) -> dict:
        out = {
            "schema": SCHEMA,
            "degree": self.degree,
            "real_roots": [float(r) for r in self.real_roots],
            "gamma_hat": self.gamma_hat,
            "backward_error": self.B,
            "iterations": self.iterations,
            "p_norm": self.p_norm,
            "stability": self.stability,
            "workers": self.workers,
            "mode": self.mode,
            "elapsed": self.elapsed,
            "notes": list(self.notes),
        }
        if include_all and self.all_eigenvalues is not None:
            out["all_eigenvalues"] = [[float(z.real), float(z.imag)] for z in self.all_eigenvalues]
        return out


def filter_real_roots(eigs, tol: float = FILTER_TOL, dedup: float = DEDUP_TOL) -> np.ndarray:
    """Eigenvalues that are real and inside ``[-1, 1]`` up to ``tol max(1, |z|)``.

    Kept values are projected to the real axis, clamped to ``[-1, 1]``,
    sorted and deduplicated.
    """
    z = np.asarray(eigs, dtype=complex)
    scale = tol * np.maximum(1.0, np.abs(z))
    keep = (np.abs(z.imag) <= scale) & (z.real >= -1 - scale) & (z.real <= 1 + scale)
    r = np.sort(np.clip(z.real[keep], -1.0, 1.0))
    if len(r) > 1:
        r = r[np.concatenate([[True], np.diff(r) > dedup * np.maximum(1.0, np.abs(r[1:]))])]
    return r


def residual_ok(coeffs, roots, tol: float = RESIDUAL_TOL) -> np.ndarray:
    """``|p(r)| <= tol (||c||_1 + |p'(r)|)`` for each root."""
    c = np.asarray(coeffs)
    roots = np.asarray(roots, dtype=float)
    if len(roots) == 0:
        return np.zeros(0, dtype=bool)
    val = np.abs(clenshaw(c, roots))
    der = np.abs(clenshaw_derivative(c, roots))
    return val <= tol * (np.sum(np.abs(c)) + der)


def solve_coeffs(coeffs, workers: int = 1, options: SolverOptions | None = None):
    """All roots of a Chebyshev series; returns ``(eigenvalues, RootReport | None)``."""
    c = strip_leading_zeros(coeffs)
    n = len(c) - 1
    if n == 0:
        return np.zeros(0, dtype=complex), None
    if n == 1:
        return np.array([complex(linear_root(c))]), None
    g = build_colleague(c)
    rep = parallel_eigenvalues(g, workers, options)
    return rep.eigenvalues, rep


def zeros(f, tol: float = 1e-14, workers: int = 1, mode: str = "single", aed: bool = True,
          all_eigenvalues: bool = False, suspect_threshold: float = SUSPECT_GAMMA,
          seed: int | None = None) -> ZerosReport:
    """Roots of ``f`` in ``[-1, 1]``.

    ``f`` may be an expression string, a callable, a :class:`ChebSeries`
    or a coefficient array (the latter two skip interpolation).
    """
    t0 = time.perf_counter()
    notes = []
    if isinstance(f, str):
        f = compile_expr(f)
    if isinstance(f, ChebSeries):
        c = np.asarray(f.coeffs)
    elif callable(f):
        c = adapt_interpolate(f, tol).coeffs
    else:
        c = np.asarray(f)
    c = strip_leading_zeros(c) if np.any(c != 0) else c[:1]
    n = len(c) - 1
    opts = SolverOptions(mode=mode, aed=aed, seed=seed)
    if n == 0:
        notes.append("identically zero: every point is a root" if c[0] == 0
                     else "constant function: no roots")
        return ZerosReport(np.zeros(0), 0, 0.0, 0.0, 0, float(abs(c[0])), "ok",
                           np.zeros(0, dtype=complex) if all_eigenvalues else None,
                           workers, mode, time.perf_counter() - t0, notes, c)
    eigs, rep = solve_coeffs(c, workers, opts)
    if rep is None:
        notes.append("degree 1: root computed directly")
    gamma_hat = rep.gamma_hat if rep is not None else 0.0
    iterations = rep.iterations if rep is not None else 0
    B = backward_error(c, eigs).B
    roots = filter_real_roots(eigs)
    stability = "suspect" if gamma_hat > suspect_threshold else "ok"
    if stability == "suspect":
        notes.append(f"gamma_hat {gamma_hat:.3g} exceeds {suspect_threshold:.3g}: "
                     "roots may be inaccurate")
    bad = ~residual_ok(c, roots)
    if np.any(bad):
        notes.append(f"{int(bad.sum())} roots fail the residual check")
    return ZerosReport(roots, n, gamma_hat, B, iterations, float(np.linalg.norm(c / c[-1])),
                       stability, eigs if all_eigenvalues else None, workers, mode,
                       time.perf_counter() - t0, notes, c)


# ---------------------------------------------------------------------------
# output


def _emit_zeros(rep: ZerosReport, fmt: str, include_all: bool, out) -> None:
    if fmt == "json":
        json.dump(rep.to_dict(include_all), out)
        out.write("\n")
        return
    if fmt == "csv":
        out.write("index,root\n")
        for i, r in enumerate(rep.real_roots, 1):
            out.write(f"{i},{float(r)!r}\n")
        return
    out.write(f"degree      {rep.degree}\n")
    out.write(f"roots       {len(rep.real_roots)}\n")
    out.write(f"gamma_hat   {rep.gamma_hat:.3e}\n")
    out.write(f"backward    {rep.B:.3e}\n")
    out.write(f"iterations  {rep.iterations}\n")
    out.write(f"p_norm      {rep.p_norm:.3e}\n")
    out.write(f"stability: {rep.stability}\n")
    for note in rep.notes:
        out.write(f"note: {note}\n")
    for r in rep.real_roots:
        out.write(f"{r: .16e}\n")
    if include_all and rep.all_eigenvalues is not None:
        out.write("all eigenvalues:\n")
        for z in rep.all_eigenvalues:
            out.write(f"{z.real: .16e} {z.imag: .16e}\n")


def _emit_eig(eigs, rep: RootReport | None, B: float, fmt: str, include_all: bool, out) -> None:
    eigs = np.asarray(eigs)
    order = np.lexsort((eigs.imag, eigs.real))
    eigs = eigs[order]
    gamma_hat = rep.gamma_hat if rep else 0.0
    iterations = rep.iterations if rep else 0
    if fmt == "json":
        d = {"schema": SCHEMA, "degree": len(eigs), "gamma_hat": gamma_hat,
             "backward_error": B, "iterations": iterations,
             "stability": "suspect" if gamma_hat > SUSPECT_GAMMA else "ok",
             "eigenvalues": [[float(z.real), float(z.imag)] for z in eigs]}
        if include_all and rep is not None:
            d["diagnostics"] = rep.diagnostics
            d["aed"] = rep.aed_records
        json.dump(d, out)
        out.write("\n")
        return
    if fmt == "csv":
        out.write("index,real,imag\n")
        for i, z in enumerate(eigs, 1):
            out.write(f"{i},{float(z.real)!r},{float(z.imag)!r}\n")
        return
    out.write(f"degree      {len(eigs)}\n")
    out.write(f"gamma_hat   {gamma_hat:.3e}\n")
    out.write(f"backward    {B:.3e}\n")
    out.write(f"iterations  {iterations}\n")
    for z in eigs:
        out.write(f"{z.real: .16e} {z.imag: .16e}\n")
    if include_all and rep is not None and rep.diagnostics:
        out.write(rep.diagnostics_jsonl() + "\n")


def _bench(degrees, workers: int, aed: bool, repeats: int, fmt: str, seed: int, out) -> None:
    rng = np.random.default_rng(seed)
    rows = []
    for n in degrees:
        for _ in range(repeats):
            c = rng.standard_normal(n + 1)
            g = build_colleague(c)
            t0 = time.perf_counter()
            rep = parallel_eigenvalues(g, workers, SolverOptions(aed=aed, seed=seed))
            dt = time.perf_counter() - t0
            rows.append({"degree": n, "seconds": dt, "sweeps": rep.iterations,
                         "sweeps_per_n": rep.iterations / n, "gamma_hat": rep.gamma_hat,
                         "workers": workers, "aed": aed})
    if fmt == "json":
        for r in rows:
            out.write(json.dumps(r) + "\n")
        return
    out.write("degree,seconds,sweeps,sweeps_per_n,gamma_hat\n" if fmt == "csv" else
              f"{'degree':>8} {'seconds':>10} {'sweeps':>8} {'sweeps/n':>9} {'gamma_hat':>10}\n")
    for r in rows:
        if fmt == "csv":
            out.write(f"{r['degree']},{r['seconds']:.6f},{r['sweeps']},"
                      f"{r['sweeps_per_n']:.4f},{r['gamma_hat']:.6e}\n")
        else:
            out.write(f"{r['degree']:>8} {r['seconds']:>10.4f} {r['sweeps']:>8} "
                      f"{r['sweeps_per_n']:>9.3f} {r['gamma_hat']:>10.3e}\n")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="chebqr",
                                 description="Roots of Chebyshev series via structured QR.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--workers", type=int, default=1, help="parallel chasing threads")
        p.add_argument("--mode", choices=["single", "double"], default="single")
        p.add_argument("--no-aed", action="store_true", help="disable early deflation")
        p.add_argument("--all", "--all-eigenvalues", dest="all", action="store_true",
                       help="also print every eigenvalue")
        fmt = p.add_mutually_exclusive_group()
        fmt.add_argument("--json", action="store_true")
        fmt.add_argument("--csv", action="store_true")

    z = sub.add_parser("zeros", help="roots of f(x) in [-1, 1]")
    z.add_argument("expr", nargs="?", help="expression in x, e.g. 'exp(x)*sin(800*x)'")
    z.add_argument("--coeffs", help="read Chebyshev coefficients from a file")
    z.add_argument("--tol", type=float, default=1e-14, help="interpolation tolerance")
    z.add_argument("--suspect", type=float, default=SUSPECT_GAMMA,
                   help="gamma_hat above which results are flagged")
    common(z)

    e = sub.add_parser("eig", help="all eigenvalues of a colleague matrix")
    e.add_argument("--coeffs", required=True, help="Chebyshev coefficient file")
    common(e)

    b = sub.add_parser("bench", help="time random-coefficient solves")
    b.add_argument("--degrees", default="256,512,1024",
                   help="comma-separated degrees")
    b.add_argument("--workers", type=int, default=1)
    b.add_argument("--no-aed", action="store_true")
    b.add_argument("--repeats", type=int, default=1)
    fmt = b.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true")
    fmt.add_argument("--csv", action="store_true")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    out = sys.stdout
    fmt = "json" if args.json else "csv" if args.csv else "text"
    seed = default_seed()
    try:
        if args.command == "bench":
            try:
                degrees = [int(s) for s in args.degrees.split(",") if s.strip()]
            except ValueError:
                print(f"chebqr: bad --degrees value {args.degrees!r}", file=sys.stderr)
                return 2
            _bench(degrees, args.workers, not args.no_aed, args.repeats, fmt, seed, out)
            return 0
        if args.command == "eig":
            c = read_coeffs(args.coeffs)
            opts = SolverOptions(mode=args.mode, aed=not args.no_aed, seed=seed,
                                 record=args.all)
            eigs, rep = solve_coeffs(c, args.workers, opts)
            B = backward_error(c, eigs).B if len(eigs) else 0.0
            _emit_eig(eigs, rep, B, fmt, args.all, out)
            return 0
        if (args.expr is None) == (args.coeffs is None):
            print("chebqr zeros: give exactly one of EXPR or --coeffs", file=sys.stderr)
            return 2
        src = read_coeffs(args.coeffs) if args.coeffs else args.expr
        rep = zeros(src, tol=args.tol, workers=args.workers, mode=args.mode,
                    aed=not args.no_aed, all_eigenvalues=args.all,
                    suspect_threshold=args.suspect, seed=seed)
        _emit_zeros(rep, fmt, args.all, out)
        return 0
    except ParseError as exc:
        print(f"chebqr: parse error: {exc}", file=sys.stderr)
        return 2
    except CoefficientFileError as exc:
        print(f"chebqr: {exc}", file=sys.stderr)
        return 4
    except (ConvergenceError, ResolutionError) as exc:
        print(f"chebqr: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        # bad coefficients (zero polynomial, negligible leading term) or bad values
        print(f"chebqr: {exc}", file=sys.stderr)
        return 4 if getattr(args, "coeffs", None) else 2


if __name__ == "__main__":
    sys.exit(main())
