"""Command-line front-end.

Subcommands compute densities, correlations, kernel tables, hard-edge
limits, Monte Carlo samples, and run the verification suites.  Output is
CSV (RFC-4180-style rows under '#'-prefixed metadata lines) or JSON with
the single schema {"meta": ..., "columns": [...], "rows": [[...]]}.

Exit codes: 0 success, 1 verification failure, 2 invalid configuration.
Set BURESCAUCHY_THREADS to bound BLAS-style threading in grid sweeps.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import __version__
from .bures import EnsembleParams, bures_correlation, delta_sigma_kernels
from .cauchy import CauchyParams, correlation as cauchy_correlation, kernels as cauchy_kernels
from .hard_edge import HardEdgeParams, convergence_study, limit_correlation, limit_kernels
from .quadrature import DEFAULT_NODES
from .sampling import MCConfig, sample_bures, sample_cauchy
from .verify import SUITES, run_all, run_suite

__all__ = ["main", "build_parser"]


def _meta(args, **extra):
    meta = {"version": __version__, "quadrature_nodes": DEFAULT_NODES}
    for key in ("ensemble", "n", "a", "b", "grid", "points", "seed", "sweeps",
                "chains", "burn_in", "suite", "n_list"):
        if hasattr(args, key) and getattr(args, key) is not None:
            meta[key] = getattr(args, key)
    meta.update(extra)
    return meta


def _emit(args, meta, columns, rows):
    fmt = args.format
    out = open(args.output, "w") if args.output else sys.stdout
    try:
        if fmt == "json":
            json.dump({"meta": meta, "columns": columns,
                       "rows": [[_jsonable(v) for v in r] for r in rows]}, out, indent=1)
            out.write("\n")
        else:
            for k in sorted(meta):
                out.write(f"# {k}: {meta[k]}\n")
            out.write(",".join(columns) + "\n")
            for r in rows:
                out.write(",".join(_fmt_cell(v) for v in r) + "\n")
    finally:
        if args.output:
            out.close()


def _jsonable(v):
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, complex):
        return [v.real, v.imag]
    return v


def _fmt_cell(v):
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def _parse_grid(spec):
    try:
        parts = spec.split(":")
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
        kind = parts[3] if len(parts) > 3 else "linear"
    except (IndexError, ValueError) as exc:
        raise SystemExit2(f"bad grid spec {spec!r}; want min:max:points[:linear|log]") from exc
    if n < 2:
        raise SystemExit2("grid needs at least 2 points")
    if kind == "log":
        if lo <= 0:
            raise SystemExit2("log grid needs min > 0")
        return np.geomspace(lo, hi, n)
    return np.linspace(lo, hi, n)


class SystemExit2(SystemExit):
    def __init__(self, msg):
        print(f"error: {msg}", file=sys.stderr)
        super().__init__(2)


def _ensemble_params(args):
    try:
        if args.ensemble == "bures":
            return EnsembleParams(args.n, args.a)
        return CauchyParams(args.n, args.a, args.b if args.b is not None else args.a + 1.0)
    except ValueError as exc:
        raise SystemExit2(str(exc)) from exc


def cmd_density(args):
    grid = _parse_grid(args.grid)
    p = _ensemble_params(args)
    if args.ensemble == "bures":
        ks = delta_sigma_kernels(p)
        dens = ks.density(grid)
        columns = ["z", "density"]
        rows = [[z, d] for z, d in zip(grid, dens)]
    else:
        ks = cauchy_kernels(p)
        dx = ks.density_x(grid)
        dy = ks.density_y(grid)
        columns = ["z", "density_x", "density_y"]
        rows = [[z, a_, b_] for z, a_, b_ in zip(grid, dx, dy)]
    from .oracle import density_integral
    if args.ensemble == "bures":
        norm = {"density_integral": density_integral(p)}
    else:
        norm = {"density_x_integral": density_integral(p, "cauchy_x"),
                "density_y_integral": density_integral(p, "cauchy_y")}
    _emit(args, _meta(args, **norm), columns, rows)
    return 0


def cmd_correl(args):
    pts = [float(v) for v in args.points.split(",")]
    p = _ensemble_params(args)
    try:
        if args.ensemble == "bures":
            val = bures_correlation(p, pts)
        else:
            k = args.k if args.k is not None else len(pts) // 2
            xs, ys = pts[:k], pts[k:]
            val = cauchy_correlation(p, xs, ys)
    except ValueError as exc:
        raise SystemExit2(str(exc)) from exc
    _emit(args, _meta(args), ["points", "value"], [[";".join(map(str, pts)), val]])
    return 0


def cmd_kernel(args):
    grid = _parse_grid(args.grid)
    p = _ensemble_params(args)
    if args.ensemble == "bures":
        ks = delta_sigma_kernels(p)
        columns = ["z1", "z2", "delta_k11", "sigma_k01", "delta_k00"]
        rows = [[u, v, ks.delta_k11(u, v), ks.sigma_k01(u, v), ks.delta_k00(v, u)]
                for u in grid for v in grid]
    else:
        ks = cauchy_kernels(p)
        columns = ["z1", "z2", "k00", "k01", "k10", "k11"]
        rows = [[u, v, ks.K00(u, v), ks.K01(u, v), ks.K10(u, v), ks.K11(u, v)]
                for u in grid for v in grid]
    _emit(args, _meta(args), columns, rows)
    return 0


def cmd_hard_edge(args):
    grid = _parse_grid(args.grid)
    if args.n_list:
        n_list = [int(v) for v in args.n_list.split(",")]
        rows_raw = convergence_study(args.a, grid, n_list)
        columns = list(rows_raw[0].keys())
        rows = [[r[c] for c in columns] for r in rows_raw]
    else:
        lk = limit_kernels(HardEdgeParams(args.a))
        dens = lk.density(grid)
        columns = ["z", "limit_density"]
        rows = [[z, d] for z, d in zip(grid, dens)]
    _emit(args, _meta(args), columns, rows)
    return 0


def cmd_sample(args):
    cfg = MCConfig(chains=args.chains, sweeps=args.sweeps,
                   burn_in=args.burn_in, seed=args.seed)
    try:
        if args.ensemble == "bures":
            batch = sample_bures(args.n, args.a, cfg)
            flat = batch.flat()
            columns = [f"z{i+1}" for i in range(args.n)]
            rows = [list(row) for row in flat[:: max(1, args.thin)]]
        else:
            b = args.b if args.b is not None else args.a + 1.0
            batch = sample_cauchy(args.n, args.a, b, cfg)
            fx, fy = batch.flat()
            columns = [f"x{i+1}" for i in range(args.n)] + [f"y{i+1}" for i in range(args.n)]
            rows = [list(rx) + list(ry) for rx, ry in
                    zip(fx[:: max(1, args.thin)], fy[:: max(1, args.thin)])]
    except ValueError as exc:
        raise SystemExit2(str(exc)) from exc
    meta = _meta(args, acceptance=[float(x) for x in batch.acceptance],
                 step_scale=[float(x) for x in batch.step_scale])
    _emit(args, meta, columns, rows)
    return 0


def cmd_verify(args):
    if args.suite == "all":
        reports = run_all(fast_mc=args.fast)
    else:
        kwargs = {"fast": args.fast} if args.suite == "monte_carlo" else {}
        reports = [run_suite(args.suite, **kwargs)]
    failed = 0
    for rep in reports:
        print(f"== suite {rep['suite']} ({rep['seconds']:.1f}s)")
        for row in rep["rows"]:
            mark = "PASS" if row["passed"] else "FAIL"
            print(f"  [{mark}] {row['name']}: residual {row['residual']:.3e} "
                  f"(tol {row['tolerance']:g})")
            failed += 0 if row["passed"] else 1
    print(f"{'ALL PASSED' if failed == 0 else f'{failed} CHECKS FAILED'}")
    return 0 if failed == 0 else 1


def build_parser():
    ap = argparse.ArgumentParser(
        prog="burescauchy",
        description="Eigenvalue statistics of the Bures ensemble via the "
                    "Cauchy two-matrix model")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp, cauchy_b=True):
        sp.add_argument("--ensemble", choices=("bures", "cauchy"), default="bures")
        sp.add_argument("--n", type=int, required=True)
        sp.add_argument("--a", type=float, required=True)
        if cauchy_b:
            sp.add_argument("--b", type=float, default=None,
                            help="cauchy only; defaults to a+1")
        sp.add_argument("--output", default=None)
        sp.add_argument("--format", choices=("csv", "json"), default="csv")

    sp = sub.add_parser("density", help="level densities on a grid")
    common(sp)
    sp.add_argument("--grid", required=True, help="min:max:points[:linear|log]")
    sp.set_defaults(func=cmd_density)

    sp = sub.add_parser("correl", help="k-point correlation at fixed points")
    common(sp)
    sp.add_argument("--points", required=True, help="comma-separated")
    sp.add_argument("--k", type=int, default=None,
                    help="cauchy: how many leading points are x-side")
    sp.set_defaults(func=cmd_correl)

    sp = sub.add_parser("kernel", help="kernel tables on a grid")
    common(sp)
    sp.add_argument("--grid", required=True)
    sp.set_defaults(func=cmd_kernel)

    sp = sub.add_parser("hard-edge", help="limiting density or convergence table")
    sp.add_argument("--a", type=float, required=True)
    sp.add_argument("--grid", required=True)
    sp.add_argument("--n-list", default=None, help="comma-separated N for convergence")
    sp.add_argument("--output", default=None)
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.set_defaults(func=cmd_hard_edge)

    sp = sub.add_parser("sample", help="Metropolis sampling")
    common(sp)
    sp.add_argument("--sweeps", type=int, default=10000)
    sp.add_argument("--burn-in", dest="burn_in", type=int, default=1000)
    sp.add_argument("--chains", type=int, default=4)
    sp.add_argument("--seed", type=int, default=1234)
    sp.add_argument("--thin", type=int, default=1)
    sp.set_defaults(func=cmd_sample)

    sp = sub.add_parser("verify", help="run verification suites")
    sp.add_argument("--suite", default="all", choices=["all"] + sorted(SUITES))
    sp.add_argument("--fast", action="store_true",
                    help="shorter Monte Carlo runs (smoke testing)")
    sp.set_defaults(func=cmd_verify)
    return ap


def main(argv=None):
    threads = os.environ.get("BURESCAUCHY_THREADS")
    if threads:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
            os.environ.setdefault(var, threads)
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SystemExit2:
        raise
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
