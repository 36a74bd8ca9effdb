"""Symmetric Dirichlet weight sets over a (P, alpha) grid.

Gamma variates use the Marsaglia-Tsang squeeze/rejection method (ACM TOMS
26(3), 2000).  Shapes below one are boosted: ``Gamma(a) = Gamma(a + 1) *
U**(1/a)``, evaluated in log space so that the tiny variates produced at
``alpha = 0.01`` do not underflow before normalization.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from numba import njit

from . import rng
from .core import WeightSet

FULL_GRID_P = tuple(2**k for k in range(8, 17))
GRID_ALPHAS = (10.0, 1.0, 0.1, 0.01)
DESK_MAX_P = 16384


@dataclass(frozen=True)
class DirichletSpec:
    P: int
    alpha: float
    seed: int = 0
    replicate: int = 0

    def __post_init__(self):
        if self.P < 2:
            raise ValueError("P must be at least 2")
        if not (self.alpha > 0 and math.isfinite(self.alpha)):
            raise ValueError(f"Dirichlet alpha must be positive, got {self.alpha!r}")

    def key(self) -> int:
        alpha_bits = struct.unpack("<Q", struct.pack("<d", float(self.alpha)))[0]
        return rng.derive_seed(self.seed, self.P, alpha_bits, self.replicate)


@njit(cache=True)
def _std_normal(k0, k1, i, ctr):
    u1, u2 = rng.uniform_pair(k0, k1, rng.STREAM_GAMMA, i, ctr)
    return math.sqrt(-2.0 * math.log(1.0 - u1)) * math.cos(2.0 * math.pi * u2)


@njit(cache=True)
def _log_gamma_variates(shape, k0, k1, out):
    boost = shape < 1.0
    a = shape + 1.0 if boost else shape
    d = a - 1.0 / 3.0
    c = 1.0 / math.sqrt(9.0 * d)
    for i in range(out.shape[0]):
        ctr = 0
        while True:
            x = _std_normal(k0, k1, i, ctr)
            u, ub = rng.uniform_pair(k0, k1, rng.STREAM_GAMMA, i, ctr + 1)
            ctr += 2
            v = 1.0 + c * x
            if v <= 0.0:
                continue
            v = v * v * v
            u = 1.0 - u  # (0, 1]
            if u < 1.0 - 0.0331 * x**4 or math.log(u) < 0.5 * x * x + d * (1.0 - v + math.log(v)):
                lg = math.log(d) + math.log(v)
                if boost:
                    lg += math.log(1.0 - ub) / shape
                out[i] = lg
                break


def log_gamma_variates(shape: float, n: int, seed: int) -> np.ndarray:
    """Logs of ``n`` independent Gamma(shape, 1) variates; element ``i`` uses stream index ``i``."""
    if not shape > 0:
        raise ValueError("gamma shape must be positive")
    out = np.empty(n)
    k0, k1 = rng.split_key(seed)
    _log_gamma_variates(float(shape), k0, k1, out)
    return out


def sample_dirichlet(spec: DirichletSpec) -> WeightSet:
    """Draw normalized weights from a symmetric Dirichlet(alpha) of dimension P."""
    lg = log_gamma_variates(spec.alpha, spec.P, spec.key())
    g = np.exp(lg - lg.max())
    return WeightSet(g / math.fsum(g))


def grid(full_grid: bool = False, max_P: int = DESK_MAX_P, seed: int = 0, alphas=GRID_ALPHAS) -> list[DirichletSpec]:
    """Cross product of ``P = 256, 512, ...`` with the Dirichlet alphas.

    The full grid runs to ``P = 65536``; the desk grid stops at ``max_P``.
    """
    ps = [p for p in FULL_GRID_P if full_grid or p <= max_P]
    return [DirichletSpec(P=p, alpha=float(a), seed=seed) for a in alphas for p in ps]


# --- weight files ----------------------------------------------------------
# Line 1: "<P> <alpha> <seed>" (alpha and seed may be "-" for foreign data).
# Then one weight per line, 17 significant digits.


def write_weights(path, w, alpha=None, seed=None) -> None:
    v = np.asarray(w.w if isinstance(w, WeightSet) else w, dtype=np.float64)
    head = f"{v.size} {'-' if alpha is None else repr(float(alpha))} {'-' if seed is None else int(seed)}\n"
    body = "".join(f"{x:.17g}\n" for x in v)
    if path in (None, "-"):
        import sys

        sys.stdout.write(head + body)
    else:
        Path(path).write_text(head + body, encoding="utf-8")


def read_weights(path) -> tuple[WeightSet, dict]:
    lines = Path(path).read_text(encoding="utf-8").split()
    if len(lines) < 3:
        raise ValueError(f"{path}: missing 'P alpha seed' header")
    P = int(lines[0])
    meta = {
        "P": P,
        "alpha": None if lines[1] == "-" else float(lines[1]),
        "seed": None if lines[2] == "-" else int(lines[2]),
    }
    values = np.array([float(x) for x in lines[3:]])
    if values.size != P:
        raise ValueError(f"{path}: header says P={P} but found {values.size} weights")
    return WeightSet(values), meta
