"""Paired benchmark of the resamplers over simulated Dirichlet weight sets.

For every grid cell and replicate one weight set is drawn, and every scheme
resamples that same set, so error comparisons between schemes are paired.
Each replicate uses a fresh weight draw.  Timing covers only the resampling
call (monotonic clock, nanoseconds) after three warm-up calls per cell and
scheme.  Absolute times are machine-specific and only their ordering and
scaling are meaningful.
"""

from __future__ import annotations

import logging
import math
import statistics
import struct
import time
from dataclasses import dataclass

import numpy as np

from . import rng
from .core import max_weight, resampling_error
from .resamplers import ResampleConfig, Scheme, resample_offspring
from .simdata import DirichletSpec, sample_dirichlet
from .tuning import DEFAULT_EPSILON, schedule_for

log = logging.getLogger(__name__)

WARMUP = 3
PILOT_DRAWS = 100
PILOT_QUANTILE = 99.0
_PILOT_TAG = 0x9170
_RESAMPLE_TAG = 0x2E5A

SCHEME_NAMES = ("multinomial", "multinomial-sorted", "stratified", "systematic", "metropolis")


@dataclass(frozen=True)
class SchemeSpec:
    scheme: Scheme
    presort: bool = False

    @property
    def name(self) -> str:
        return self.scheme.value + ("-sorted" if self.presort else "")

    @classmethod
    def parse(cls, name: str) -> SchemeSpec:
        name = name.strip().lower()
        if name.endswith("-sorted"):
            s = cls(Scheme(name[: -len("-sorted")]), presort=True)
            if s.scheme is not Scheme.MULTINOMIAL:
                raise ValueError("only multinomial supports presorting")
            return s
        return cls(Scheme(name))


@dataclass(frozen=True)
class TrialRecord:
    scheme: str
    presort: bool
    P: int
    dirichlet_alpha: float
    replicate: int
    error: float
    wall_ns: int
    B: int


@dataclass(frozen=True)
class CellSummary:
    scheme: str
    presort: bool
    P: int
    dirichlet_alpha: float
    n: int
    B: int
    mean_error: float
    se_error: float
    mean_wall_ns: float
    median_wall_ns: float
    se_wall_ns: float


def _alpha_bits(alpha: float) -> int:
    return struct.unpack("<Q", struct.pack("<d", float(alpha)))[0]


def pilot_wmax(P: int, alpha: float, seed: int, draws: int = PILOT_DRAWS, quantile: float = PILOT_QUANTILE) -> float:
    """Upper tolerance for ``w_max``: a high quantile over independent pilot draws."""
    pilot_seed = rng.derive_seed(seed, _PILOT_TAG)
    wm = [max_weight(sample_dirichlet(DirichletSpec(P, alpha, pilot_seed, r))) for r in range(draws)]
    return float(np.percentile(wm, quantile))


def metropolis_B(P: int, alpha: float, seed: int, epsilon: float = DEFAULT_EPSILON, b_divisor: int = 1) -> int:
    """Steps for a cell: the bound at the pilot ``w_max`` tolerance, divided by ``b_divisor``."""
    tol = max(pilot_wmax(P, alpha, seed), 1.0 / P)
    return max(1, schedule_for(P, min(tol, 1.0), epsilon).B // b_divisor)


def run_benchmark(
    grid,
    schemes=SCHEME_NAMES,
    replicates: int = 1000,
    seed: int = 0,
    epsilon: float = DEFAULT_EPSILON,
    b_divisor: int = 1,
    warmup: int = WARMUP,
    failures: list | None = None,
) -> list[TrialRecord]:
    """Resample every weight draw with every scheme, recording error and wall time.

    ``grid`` is an iterable of :class:`DirichletSpec` (their own seeds are
    ignored; ``seed`` drives the whole run).  A cell that raises is logged,
    appended to ``failures`` as ``(spec, exception)`` and skipped.
    """
    if replicates < 1:
        raise ValueError("replicates must be >= 1")
    specs = [s if isinstance(s, SchemeSpec) else SchemeSpec.parse(s) for s in schemes]
    records: list[TrialRecord] = []
    for cell in grid:
        try:
            records.extend(_run_cell(cell.P, cell.alpha, specs, replicates, seed, epsilon, b_divisor, warmup))
        except Exception as exc:  # keep going; the cell is reported
            log.warning("cell P=%d alpha=%g failed: %s", cell.P, cell.alpha, exc)
            if failures is not None:
                failures.append((cell, exc))
    return records


def _run_cell(P, alpha, specs, replicates, seed, epsilon, b_divisor, warmup):
    B = 0
    if any(s.scheme is Scheme.METROPOLIS for s in specs):
        B = metropolis_B(P, alpha, seed, epsilon, b_divisor)
    data_seed = rng.derive_seed(seed, P, _alpha_bits(alpha))
    cfgs = [
        ResampleConfig(s.scheme, presort=s.presort, B=B if s.scheme is Scheme.METROPOLIS else 1)
        for s in specs
    ]
    out = []
    for r in range(replicates):
        ws = sample_dirichlet(DirichletSpec(P, alpha, data_seed, r))
        rs_seed = rng.derive_seed(seed, _RESAMPLE_TAG, P, _alpha_bits(alpha), r)
        for spec, base in zip(specs, cfgs):
            cfg = ResampleConfig(base.scheme, base.presort, base.B, rs_seed, base.scan_blocks)
            if r == 0:
                for _ in range(warmup):
                    resample_offspring(ws, cfg)
            t0 = time.perf_counter_ns()
            o = resample_offspring(ws, cfg)
            dt = max(1, time.perf_counter_ns() - t0)
            out.append(
                TrialRecord(
                    scheme=spec.scheme.value,
                    presort=spec.presort,
                    P=P,
                    dirichlet_alpha=float(alpha),
                    replicate=r,
                    error=resampling_error(o, ws),
                    wall_ns=dt,
                    B=B if spec.scheme is Scheme.METROPOLIS else 0,
                )
            )
    return out


def _se(xs) -> float:
    return statistics.stdev(xs) / math.sqrt(len(xs)) if len(xs) > 1 else 0.0


def summarize(records) -> list[CellSummary]:
    """Per-(scheme, presort, P, alpha) means, medians and standard errors."""
    records = list(records)
    if not records:
        raise ValueError("no records to summarize")
    groups: dict[tuple, list[TrialRecord]] = {}
    for rec in records:
        groups.setdefault((rec.scheme, rec.presort, rec.P, rec.dirichlet_alpha), []).append(rec)
    out = []
    for (scheme, presort, P, alpha), recs in groups.items():
        err = [r.error for r in recs]
        wall = [r.wall_ns for r in recs]
        out.append(
            CellSummary(
                scheme=scheme,
                presort=presort,
                P=P,
                dirichlet_alpha=alpha,
                n=len(recs),
                B=recs[0].B,
                mean_error=math.fsum(err) / len(err),
                se_error=_se(err),
                mean_wall_ns=math.fsum(wall) / len(wall),
                median_wall_ns=float(statistics.median(wall)),
                se_wall_ns=_se(wall),
            )
        )
    return out


def paired_difference(records, scheme_a: str, scheme_b: str, P: int, alpha: float) -> tuple[float, float]:
    """Mean and standard error of ``error(a) - error(b)`` over shared replicates."""
    def by_rep(name):
        spec = SchemeSpec.parse(name)
        return {
            r.replicate: r.error
            for r in records
            if r.scheme == spec.scheme.value and r.presort == spec.presort and r.P == P and r.dirichlet_alpha == alpha
        }

    a, b = by_rep(scheme_a), by_rep(scheme_b)
    reps = sorted(a.keys() & b.keys())
    if len(reps) < 2:
        raise ValueError("need at least two shared replicates")
    d = [a[k] - b[k] for k in reps]
    return math.fsum(d) / len(d), _se(d)


def metropolis_scaling(P_values, B: int = 64, repeats: int = 7, seed: int = 0) -> dict:
    """Median Metropolis wall time over a ``P`` sweep and a least-squares fit against ``P*B``.

    Non-normative: only the linearity (``r2``) is of interest.
    """
    from .resamplers import metropolis

    xs, ys = [], []
    for P in P_values:
        ws = sample_dirichlet(DirichletSpec(P, 1.0, seed))
        cfg = ResampleConfig(Scheme.METROPOLIS, B=B, seed=seed)
        for _ in range(WARMUP):
            metropolis(ws, cfg)
        times = []
        for _ in range(repeats):
            t0 = time.perf_counter_ns()
            metropolis(ws, cfg)
            times.append(time.perf_counter_ns() - t0)
        xs.append(P * B)
        ys.append(statistics.median(times))
    x, y = np.asarray(xs, float), np.asarray(ys, float)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    r2 = 1.0 - float(resid @ resid) / float(((y - y.mean()) ** 2).sum())
    return {"work": xs, "median_ns": ys, "slope_ns": float(slope), "intercept_ns": float(intercept), "r2": r2}
