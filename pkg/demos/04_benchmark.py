"""
A small paired benchmark
========================

Every scheme resamples the same weight draw in each replicate, so the
differences in error are paired.  The full grid is ``pfresample bench``.
"""

import tempfile
from pathlib import Path

from pfresample.bench import paired_difference, run_benchmark, summarize
from pfresample.report import emit_csv, emit_svg
from pfresample.simdata import DirichletSpec

cells = [DirichletSpec(P, a) for a in (1.0, 0.1) for P in (256, 1024, 4096)]
recs = run_benchmark(cells, ["multinomial", "stratified", "systematic", "metropolis"], replicates=50, seed=42)
summ = summarize(recs)

for s in sorted(summ, key=lambda s: (s.dirichlet_alpha, s.P, s.mean_error)):
    print(f"alpha={s.dirichlet_alpha:<4} P={s.P:<5} {s.scheme:<11} error={s.mean_error:.3e} "
          f"median={s.median_wall_ns / 1e3:8.1f} us" + (f"  B={s.B}" if s.B else ""))

d, se = paired_difference(recs, "multinomial", "stratified", 4096, 0.1)
print(f"multinomial - stratified at P=4096, alpha=0.1: {d:.3e} +/- {se:.1e}")

out = Path(tempfile.mkdtemp())
emit_csv(summ, out / "summary.csv")
emit_svg(summ, out / "error.svg", "mean_error")
print("wrote", out)
