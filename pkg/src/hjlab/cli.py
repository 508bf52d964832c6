"""Command-line entry point.

Subcommands: experiment, ergodic, evolve, hopflax, h4check, trajectory.
Exit codes: 0 success (and all verdicts pass for `experiment`), 1 verdict
failure, 2 usage or configuration error.  All file output stays under --out.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .core import Grid1D, SampledFn, polynomial_bump
from .ergodic import constant_profile_residual, estimate_lambda_min
from .experiments import EXPERIMENT_NAMES, run_experiment
from .fd_solver import EvolveConfig, evolve_lf
from .hamiltonians import AbsShift, EikonalShift, QuadPotential, Quadratic, check_h4
from .reporting import _atomic_write_bytes, write_report_bundle, write_report_json
from .variational import backtrack_minimizer, hopf_lax_evaluate

FAMILIES = ("quadratic", "eikonal-shift", "abs-shift", "quad-potential")


def _add_family_flags(p: argparse.ArgumentParser):
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--drift", type=float, default=0.0, help="drift of the quadratic family")
    p.add_argument("--c", type=float, default=0.0, help="shift of the eikonal family")
    p.add_argument("--alpha", type=float, default=1.0, help="offset of the flat-slope family")
    p.add_argument("--eps", type=float, default=0.1, help="forcing strength of quad-potential")
    p.add_argument("--f", type=str, default=None,
                   help="CSV (header x,value) with the forcing profile; default: unit-depth bump")


def load_profile_csv(path) -> SampledFn:
    """Read a piecewise-linear profile from a CSV with header ``x,value``."""
    rows = Path(path).read_text().strip().splitlines()
    if not rows or rows[0].strip().lower() not in ("x,value", '"x","value"'):
        raise ValueError(f"{path}: expected CSV header 'x,value'")
    data = np.array([[float(c) for c in r.split(",")] for r in rows[1:]])
    if data.shape[0] < 2:
        raise ValueError(f"{path}: need at least two samples")
    return SampledFn.from_breakpoints(data[:, 0], data[:, 1])


def build_hamiltonian(args):
    if args.family == "quadratic":
        return Quadratic(drift=args.drift)
    if args.family == "eikonal-shift":
        return EikonalShift(c=args.c)
    if args.family == "abs-shift":
        return AbsShift(alpha=args.alpha)
    if args.family == "quad-potential":
        if args.f is not None:
            f = load_profile_csv(args.f)
        else:
            grid = Grid1D(-3.0, 3.0, 601)
            f = SampledFn.from_callable(grid, polynomial_bump(height=-1.0, radius=1.0),
                                        extension="constant")
        return QuadPotential(eps=args.eps, f=f)
    raise ValueError(f"unknown family {args.family!r}")


def _write_csv(path: Path, header: str, rows):
    lines = [header] + [f"{float(a):.17g},{float(b):.17g}" for a, b in rows]
    _atomic_write_bytes(path, ("\n".join(lines) + "\n").encode())


def _parse_floats(text: str):
    return [float(tok) for tok in text.split(",") if tok.strip()]


# ---------------------------------------------------------------------------
# subcommand bodies
# ---------------------------------------------------------------------------

def _cmd_experiment(args) -> int:
    overrides = None
    if args.config is not None:
        overrides = json.loads(Path(args.config).read_text())
    report = run_experiment(args.name, overrides)
    for v in report.verdicts:
        state = "PASS" if v.passed else "FAIL"
        print(f"{state} {v.criterion}: {v.measured:.6g} {v.comparator} {v.threshold:.6g}")
    if args.out is not None:
        out = Path(args.out)
        if args.format == "json":
            write_report_json(report, out / f"{report.name}.json")
        elif args.format == "csv":
            for series_name, points in report.series.items():
                _write_csv(out / f"{report.name}.{series_name}.csv", "t,value", points)
        else:
            write_report_bundle(report, out)
    return 0 if report.passed else 1


def _cmd_ergodic(args) -> int:
    h = build_hamiltonian(args)
    radii = _parse_floats(args.radii)
    report = estimate_lambda_min(h, (args.lam_lo, args.lam_hi), radii, tol=args.tol)
    lo, hi = report.lam_min_bracket
    lam_bar_residual = constant_profile_residual(h, h.value(0.0, 0.0))
    print(f"lambda_min bracket: [{lo:.6g}, {hi:.6g}]")
    print(f"constant-profile value H(x,0): {h.value(0.0, 0.0):.6g} "
          f"(residual {lam_bar_residual:.3g})")
    for lam, status in zip(report.lam_grid, report.statuses):
        print(f"lambda={lam:.6g}: {status}")
    if args.out is not None:
        payload = {
            "family": args.family,
            "lam_min_bracket": [lo, hi],
            "lam_grid": [float(v) for v in report.lam_grid],
            "statuses": report.statuses,
        }
        _atomic_write_bytes(Path(args.out) / "ergodic.json",
                            (json.dumps(payload, indent=2, sort_keys=True) + "\n").encode())
    return 0


def _load_u0(args, grid: Grid1D) -> SampledFn:
    if args.u0 is not None:
        return load_profile_csv(args.u0)
    return SampledFn.on_grid(grid, np.zeros(grid.n))


def _cmd_evolve(args) -> int:
    h = build_hamiltonian(args)
    grid = Grid1D(args.x_min, args.x_max, args.n)
    u0 = _load_u0(args, grid)
    snaps = tuple(_parse_floats(args.snapshots)) if args.snapshots else ()
    cfg = EvolveConfig(grid, args.t_end, cfl=args.cfl, theta=args.theta,
                       snapshot_times=snaps)
    res = evolve_lf(h, SampledFn.on_grid(grid, u0(grid.nodes())), cfg)
    print(f"evolved to t={args.t_end:g} with dt={res.dt:.6g}, theta={res.theta:.6g}")
    if args.out is not None:
        out = Path(args.out)
        xs = grid.nodes()
        _write_csv(out / "final.csv", "x,value", zip(xs, res.final.values))
        for t, fn in res.snapshots:
            _write_csv(out / f"snapshot_t{t:g}.csv", "x,value", zip(xs, fn.values))
        _write_csv(out / "m_series.csv", "t,value", res.m_series)
    return 0


def _cmd_hopflax(args) -> int:
    h = build_hamiltonian(args)
    if args.u0 is None:
        raise ValueError("hopflax requires --u0")
    u0 = load_profile_csv(args.u0)
    xs = _parse_floats(args.x)
    rows = [(x, hopf_lax_evaluate(h, u0, x, args.t)) for x in xs]
    for x, v in rows:
        print(f"{x:.17g},{v:.17g}")
    if args.out is not None:
        _write_csv(Path(args.out) / "hopflax.csv", "x,value", rows)
    return 0


def _cmd_h4check(args) -> int:
    h = build_hamiltonian(args)
    report = check_h4(h, args.eta, args.k_box, args.samples)
    print(f"status: {report.status}")
    print(f"psi_estimate: {report.psi_estimate:.6g}")
    print(f"admissible samples: {report.n_admissible}")
    if report.witness is not None:
        x, p, q, mu = report.witness
        print(f"witness: x={x:.12g} p={p:.12g} q={q:.12g} mu={mu:.12g}")
    return 0


def _cmd_trajectory(args) -> int:
    h = build_hamiltonian(args)
    if args.u0 is None:
        raise ValueError("trajectory requires --u0")
    u0 = load_profile_csv(args.u0)
    traj = backtrack_minimizer(h, u0, args.x, args.t)
    print(f"start_point: {traj.start_point:.12g}")
    print(f"action: {traj.action:.12g}")
    if traj.non_unique:
        print("warning: minimizer not unique within tolerance", file=sys.stderr)
    if args.out is not None:
        _write_csv(Path(args.out) / "trajectory.csv", "t,value",
                   zip(traj.times, traj.positions))
    return 0


# ---------------------------------------------------------------------------
# parser / dispatch
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="hjlab",
                                  description="Hamilton-Jacobi numerical laboratory")
    sub = top.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("experiment", help="run a named experiment")
    p.add_argument("name", choices=EXPERIMENT_NAMES)
    p.add_argument("--out", type=str, default=None)
    p.add_argument("--format", choices=("json", "csv", "both"), default="both")
    p.add_argument("--config", type=str, default=None, help="JSON file of config overrides")
    p.set_defaults(fn=_cmd_experiment)

    p = sub.add_parser("ergodic", help="bracket the least admissible constant")
    _add_family_flags(p)
    p.add_argument("--lam-lo", type=float, default=-1.0)
    p.add_argument("--lam-hi", type=float, default=2.0)
    p.add_argument("--radii", type=str, default="2,4")
    p.add_argument("--tol", type=float, default=0.05)
    p.add_argument("--out", type=str, default=None)
    p.set_defaults(fn=_cmd_ergodic)

    p = sub.add_parser("evolve", help="monotone finite-difference evolution")
    _add_family_flags(p)
    p.add_argument("--u0", type=str, default=None, help="CSV (header x,value); default zero")
    p.add_argument("--x-min", type=float, default=-10.0)
    p.add_argument("--x-max", type=float, default=10.0)
    p.add_argument("--n", type=int, default=1001)
    p.add_argument("--t-end", type=float, required=True)
    p.add_argument("--cfl", type=float, default=0.9)
    p.add_argument("--theta", type=float, default=None)
    p.add_argument("--snapshots", type=str, default=None, help="comma-separated times")
    p.add_argument("--out", type=str, default=None)
    p.set_defaults(fn=_cmd_evolve)

    p = sub.add_parser("hopflax", help="variational evaluation at points")
    _add_family_flags(p)
    p.add_argument("--u0", type=str, default=None, help="CSV (header x,value)")
    p.add_argument("--x", type=str, required=True, help="comma-separated query points")
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--out", type=str, default=None)
    p.set_defaults(fn=_cmd_hopflax)

    p = sub.add_parser("h4check", help="uniform strong-convexity margin check")
    _add_family_flags(p)
    p.add_argument("--eta", type=float, default=0.25)
    p.add_argument("--k-box", type=float, default=5.0)
    p.add_argument("--samples", type=int, default=4096)
    p.set_defaults(fn=_cmd_h4check)

    p = sub.add_parser("trajectory", help="backtrack the minimizing path")
    _add_family_flags(p)
    p.add_argument("--u0", type=str, default=None, help="CSV (header x,value)")
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--out", type=str, default=None)
    p.set_defaults(fn=_cmd_trajectory)

    return top


def run_cli(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as e:
        # argparse exits 0 for --help, 2 for usage errors
        return int(e.code or 0)
    try:
        return args.fn(args)
    except (ValueError, OSError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


def main():
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
