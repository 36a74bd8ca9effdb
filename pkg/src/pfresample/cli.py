"""Command line entry point: ``pfresample <subcommand> ...``."""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

import numpy as np

from . import bench, report, simdata
from .core import max_weight
from .resamplers import OFFSPRING_SCHEMES, ResampleConfig, Scheme, resample, resample_ancestors, resample_offspring
from .tuning import DEFAULT_EPSILON, chain_params, required_B, schedule_for

RECORD_COLUMNS = ["scheme", "presort", "P", "dirichlet_alpha", "replicate", "B", "error"]
SUMMARY_COLUMNS = ["scheme", "presort", "P", "dirichlet_alpha", "n", "B", "mean_error", "se_error"]
TIMING_COLUMNS = ["scheme", "presort", "P", "dirichlet_alpha", "n", "B", "mean_wall_ns", "median_wall_ns", "se_wall_ns"]


def _simulate(args):
    spec = simdata.DirichletSpec(args.particles, args.alpha, args.seed, args.replicate)
    simdata.write_weights(args.out, simdata.sample_dirichlet(spec), alpha=args.alpha, seed=args.seed)


def _resample(args):
    ws, _ = simdata.read_weights(args.input)
    scheme = Scheme(args.scheme)
    B = args.B
    if scheme is Scheme.METROPOLIS and B is None:
        B = schedule_for(ws.P, max(max_weight(ws), 1.0 / ws.P), args.epsilon).B
    cfg = ResampleConfig(scheme, presort=args.presort, B=B or 1, seed=args.seed)
    if args.kind == "offspring":
        vec, name = resample_offspring(ws, cfg), "offspring"
    elif args.kind == "ancestors":
        vec, name = resample_ancestors(ws, cfg), "ancestor"
    else:
        vec = resample(ws, cfg)
        name = "offspring" if scheme in OFFSPRING_SCHEMES else "ancestor"
    fh = sys.stdout if args.out in (None, "-") else open(args.out, "w", newline="", encoding="utf-8")
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["index", name])
        w.writerows(enumerate(vec.tolist()))
    finally:
        if fh is not sys.stdout:
            fh.close()


def _tune(args):
    sched = required_B(chain_params(args.particles, args.wmax, args.epsilon))
    p = sched.params
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["P", "w_max", "epsilon", "alpha", "beta", "lambda", "B"])
    w.writerow([p.P, repr(p.w_max), repr(p.epsilon), repr(p.alpha), repr(p.beta), repr(p.lam), sched.B])


def _bench(args):
    schemes = [s for part in args.schemes for s in part.split(",") if s]
    cells = simdata.grid(full_grid=args.grid == "paper", max_P=args.max_particles, alphas=args.alphas)
    failures = []
    records = bench.run_benchmark(
        cells,
        schemes,
        replicates=args.replicates,
        seed=args.seed,
        epsilon=args.epsilon,
        b_divisor=args.b_divisor,
        failures=failures,
    )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    meta = {
        "protocol": "fresh Dirichlet draw per replicate; all schemes resample the same draw (paired)",
        "metropolis_B": f"bound at epsilon={args.epsilon} for the 99th percentile of w_max over "
        f"{bench.PILOT_DRAWS} pilot draws, divided by {args.b_divisor}",
        "grid": f"{args.grid} max_P={args.max_particles if args.grid == 'desk' else 65536}",
        "seed": args.seed,
        "replicates": args.replicates,
    }
    report.emit_csv(records, out / "records.csv", cls=bench.TrialRecord, columns=RECORD_COLUMNS, meta=meta)
    summaries = bench.summarize(records) if records else []
    report.emit_csv(summaries, out / "summary.csv", cls=bench.CellSummary, columns=SUMMARY_COLUMNS, meta=meta)
    report.emit_csv(
        summaries,
        out / "timing.csv",
        cls=bench.CellSummary,
        columns=TIMING_COLUMNS,
        meta={"note": "wall-clock times are machine-specific and non-normative"},
    )
    if summaries:
        report.emit_svg(summaries, out / "error.svg", "mean_error", "mean resampling error")
        report.emit_svg(summaries, out / "runtime.svg", "median_wall_ns", "median runtime (ns)")
    for cell, exc in failures:
        print(f"warning: cell P={cell.P} alpha={cell.alpha:g} failed: {exc}", file=sys.stderr)


def _demo(args):
    from .filtering import FilterDemoSpec, demo_filter

    spec = FilterDemoSpec(
        T=args.steps,
        P=args.particles,
        scheme=None if args.scheme == "none" else args.scheme,
        B=args.B,
        wmax_tolerance=args.wmax_tolerance,
        seed=args.seed,
    )
    res = demo_filter(spec)
    se = res.standard_errors()
    fh = sys.stdout if args.out in (None, "-") else open(args.out, "w", newline="", encoding="utf-8")
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", "truth", "obs", "pf_mean", "pf_var", "kf_mean", "kf_var", "se", "ess", "w_max"])
        for t in range(spec.T + 1):
            w.writerow(
                [t]
                + [f"{v:.17g}" for v in (res.truth[t], res.obs[t], res.mean[t], res.var[t], res.kf_mean[t], res.kf_var[t], se[t], res.ess[t], res.w_max[t])]
            )
    finally:
        if fh is not sys.stdout:
            fh.close()
    if res.degenerate_steps:
        print(f"warning: all weights underflowed at steps {res.degenerate_steps}", file=sys.stderr)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pfresample", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate-weights", help="draw one symmetric Dirichlet weight set")
    p.add_argument("--particles", "-P", type=int, required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--replicate", type=int, default=0)
    p.add_argument("--out", default="-")
    p.set_defaults(func=_simulate)

    p = sub.add_parser("resample", help="resample a weight file")
    p.add_argument("--input", required=True)
    p.add_argument("--scheme", choices=[s.value for s in Scheme], default="systematic")
    p.add_argument("--presort", action="store_true")
    p.add_argument("--B", type=int, default=None, help="Metropolis steps (default: bound at the file's w_max)")
    p.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--kind", choices=["native", "offspring", "ancestors"], default="native")
    p.add_argument("--out", default="-")
    p.set_defaults(func=_resample)

    p = sub.add_parser("tune-b", help="Metropolis step count for P, w_max and epsilon")
    p.add_argument("--particles", "-P", type=int, required=True)
    p.add_argument("--wmax", type=float, required=True)
    p.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON)
    p.set_defaults(func=_tune)

    p = sub.add_parser("bench", help="error and runtime over the (P, alpha) grid")
    p.add_argument("--grid", choices=["desk", "paper"], default="desk")
    p.add_argument("--max-particles", type=int, default=simdata.DESK_MAX_P)
    p.add_argument("--alphas", type=float, nargs="+", default=list(simdata.GRID_ALPHAS))
    p.add_argument("--schemes", nargs="+", default=list(bench.SCHEME_NAMES))
    p.add_argument("--replicates", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON)
    p.add_argument("--b-divisor", type=int, default=1)
    p.add_argument("--out", default="bench-out")
    p.set_defaults(func=_bench)

    p = sub.add_parser("demo-filter", help="bootstrap filter vs Kalman filter on a 1-d model")
    p.add_argument("--particles", "-P", type=int, default=8192)
    p.add_argument("--steps", "-T", type=int, default=50)
    p.add_argument("--scheme", choices=[s.value for s in Scheme] + ["none"], default="systematic")
    p.add_argument("--B", type=int, default=None)
    p.add_argument("--wmax-tolerance", type=float, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="-")
    p.set_defaults(func=_demo)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (ValueError, OSError, IndexError) as exc:
        print(f"pfresample {args.command}: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
