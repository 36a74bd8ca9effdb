"""Multinomial, stratified, systematic and Metropolis resamplers.

Stratified and systematic resampling return offspring counts; multinomial
and Metropolis resampling return ancestor indices.  Use
:func:`resample_offspring` when a uniform output is needed.

All schemes are deterministic functions of ``(weights, config)``: random
numbers come from :mod:`pfresample.rng`, keyed by the config seed, the
particle index and a per-particle draw counter.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from numba import njit, prange

from . import rng
from .core import ancestors_to_offspring, as_weights, offspring_to_ancestors

DEFAULT_SCAN_BLOCKS = 16


class Scheme(str, enum.Enum):
    MULTINOMIAL = "multinomial"
    STRATIFIED = "stratified"
    SYSTEMATIC = "systematic"
    METROPOLIS = "metropolis"


OFFSPRING_SCHEMES = (Scheme.STRATIFIED, Scheme.SYSTEMATIC)


@dataclass(frozen=True)
class ResampleConfig:
    """Which scheme to run and how.

    ``presort`` only affects multinomial resampling and ``B`` (the number of
    chain steps per particle) only Metropolis resampling.  ``scan_blocks``
    fixes the block decomposition of the prefix sum, and with it the
    reduction order.
    """

    scheme: Scheme = Scheme.SYSTEMATIC
    presort: bool = False
    B: int = 1
    seed: int = 0
    scan_blocks: int = DEFAULT_SCAN_BLOCKS

    def __post_init__(self):
        object.__setattr__(self, "scheme", Scheme(self.scheme))
        if self.scheme is Scheme.METROPOLIS and self.B < 0:
            raise ValueError("B must be non-negative")
        if self.scan_blocks < 1:
            raise ValueError("scan_blocks must be >= 1")
        object.__setattr__(self, "seed", int(self.seed) & ((1 << 64) - 1))


# --- prefix sum ------------------------------------------------------------


@njit(cache=True)
def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _scan_kernel(w, bounds, out):
    nb = bounds.shape[0] - 1
    lo = np.empty(w.shape[0])
    tot_hi = np.empty(nb)
    tot_lo = np.empty(nb)
    # Neumaier-compensated inclusive scan of each block
    for b in prange(nb):
        s = 0.0
        c = 0.0
        for i in range(bounds[b], bounds[b + 1]):
            s, e = _two_sum(s, w[i])
            c += e
            out[i] = s
            lo[i] = c
        tot_hi[b] = s
        tot_lo[b] = c
    # block offsets, left to right in double-double
    off_hi = np.zeros(nb)
    off_lo = np.zeros(nb)
    s = 0.0
    c = 0.0
    for b in range(1, nb):
        s, e = _two_sum(s, tot_hi[b - 1])
        c += e + tot_lo[b - 1]
        off_hi[b], off_lo[b] = _two_sum(s, c)
    for b in prange(nb):
        for i in range(bounds[b], bounds[b + 1]):
            s2, e2 = _two_sum(off_hi[b], out[i])
            out[i] = s2 + (e2 + (off_lo[b] + lo[i]))
    # zero weights repeat the previous value; the result is nondecreasing
    prev = 0.0
    for i in range(w.shape[0]):
        if w[i] == 0.0 or out[i] < prev:
            out[i] = prev
        prev = out[i]


# Same arithmetic either way; the serial build avoids thread start-up on small inputs.
_scan_parallel = njit(parallel=True, cache=True)(_scan_kernel)
_scan_serial = njit(cache=True)(_scan_kernel)
_PARALLEL_MIN_P = 1 << 15


def prefix_sum(w, blocks: int = DEFAULT_SCAN_BLOCKS) -> np.ndarray:
    """Inclusive prefix sum of the weights.

    The vector is split into ``blocks`` contiguous blocks (``np.array_split``
    boundaries).  Each block is scanned independently with compensated
    summation, block totals are combined left to right in double-double
    arithmetic, and the offsets are added back per block.  The reduction
    order depends only on ``(P, blocks)``, and every element is within a
    couple of ulps of the exact prefix sum.

    Zero weights repeat the previous cumulative value exactly, and the result
    is nondecreasing.
    """
    return _scan(as_weights(w).w, blocks)


def _scan(x, blocks):
    P = x.shape[0]
    blocks = max(1, min(int(blocks), P))
    sizes = np.full(blocks, P // blocks, dtype=np.int64)
    sizes[: P % blocks] += 1
    bounds = np.zeros(blocks + 1, dtype=np.int64)
    np.cumsum(sizes, out=bounds[1:])
    W = np.empty(P)
    (_scan_parallel if P >= _PARALLEL_MIN_P else _scan_serial)(x, bounds, W)
    return W


def sequential_prefix_sum(w) -> np.ndarray:
    """Reference scan: one left-to-right compensated pass, no blocking."""
    return prefix_sum(w, blocks=1)


def lower_bound(W, u):
    """Smallest index ``i`` with ``W[i] >= u``.

    A position exactly on a cumulative boundary ``W[i]`` selects particle
    ``i``.  ``u`` may be a scalar or an array; values outside
    ``[0, W[-1]]`` raise ``ValueError``.
    """
    W = np.asarray(W, dtype=np.float64)
    ua = np.asarray(u, dtype=np.float64)
    if not (ua.min() >= 0 and ua.max() <= W[-1]):
        raise ValueError(f"position outside [0, {W[-1]!r}]")
    idx = np.searchsorted(W, ua, side="left")
    return int(idx) if idx.ndim == 0 else idx.astype(np.int64)


# --- random draws ----------------------------------------------------------


@njit(cache=True)
def _draw_uniforms(k0, k1, stream, n, out):
    for i in range(n):
        out[i], _ = rng.uniform_pair(k0, k1, stream, i, 0)


@njit(cache=True)
def _draw_open_uniforms(k0, k1, stream, n, out):
    for i in range(n):
        x0, x1, _, _ = rng.philox4x32(
            np.uint64(0), np.uint64(i), np.uint64(stream), np.uint64(0), k0, k1
        )
        out[i] = rng.to_open_unit(x0, x1)


def _uniforms(seed, stream, n, open_interval=False):
    out = np.empty(n)
    k0, k1 = rng.split_key(seed)
    if open_interval:
        _draw_open_uniforms(k0, k1, stream, n, out)
    else:
        _draw_uniforms(k0, k1, stream, n, out)
    return out


# --- schemes ---------------------------------------------------------------


def multinomial(w, cfg: ResampleConfig | None = None) -> np.ndarray:
    """Ancestors drawn i.i.d. from the normalized weights.

    Particle ``i`` draws ``u_i`` uniformly on ``(0, total]`` and takes the
    binary-search position of ``u_i`` in the cumulative weights.  With
    ``cfg.presort`` the weights are sorted ascending first and the chosen
    indices mapped back through the permutation.
    """
    cfg = cfg or ResampleConfig(Scheme.MULTINOMIAL)
    x = as_weights(w).w
    P = x.shape[0]
    perm = None
    if cfg.presort:
        perm = np.argsort(x, kind="stable")
        x = x[perm]
    W = _scan(x, cfg.scan_blocks)
    total = W[-1]
    u = (1.0 - _uniforms(cfg.seed, rng.STREAM_MULTINOMIAL, P)) * total
    a = lower_bound(W, u)
    return perm[a] if perm is not None else a


def offspring_from_positions(W, positions) -> np.ndarray:
    """Count positions falling in each particle's cumulative interval."""
    W = np.asarray(W)
    pos = np.minimum(np.asarray(positions, dtype=np.float64), W[-1])
    return np.bincount(lower_bound(W, pos), minlength=W.shape[0]).astype(np.int64)


def stratified_positions(P: int, total: float, u) -> np.ndarray:
    """Position ``(i + u_i) * total / P`` for each of the ``P`` strata."""
    return (np.arange(P) + np.asarray(u, dtype=np.float64)) * total / P


def stratified(w, cfg: ResampleConfig | None = None) -> np.ndarray:
    """Offspring counts with an independent offset in each of ``P`` equal strata."""
    cfg = cfg or ResampleConfig(Scheme.STRATIFIED)
    ws = as_weights(w)
    W = _scan(ws.w, cfg.scan_blocks)
    u = _uniforms(cfg.seed, rng.STREAM_STRATIFIED, ws.P, open_interval=True)
    return offspring_from_positions(W, stratified_positions(ws.P, W[-1], u))


def systematic(w, cfg: ResampleConfig | None = None, offset: float | None = None) -> np.ndarray:
    """Offspring counts with one offset shared by all strata.

    ``offset`` in the open interval ``(0, 1)`` overrides the random draw.  An
    offset of exactly 0 would put the first position on 0 and every other
    position on a stratum boundary, where the left-open interval rule
    double-counts; random offsets are drawn from ``(0, 1)`` for the same
    reason.
    """
    cfg = cfg or ResampleConfig(Scheme.SYSTEMATIC)
    ws = as_weights(w)
    W = _scan(ws.w, cfg.scan_blocks)
    if offset is None:
        offset = _uniforms(cfg.seed, rng.STREAM_SYSTEMATIC, 1, open_interval=True)[0]
    elif not 0.0 < offset < 1.0:
        raise ValueError("offset must lie in (0, 1)")
    return offspring_from_positions(W, stratified_positions(ws.P, W[-1], offset))


def _metropolis_kernel(w, starts, B, k0, k1, chain0, out):
    P = w.shape[0]
    for c in prange(starts.shape[0]):
        k = starts[c]
        for b in range(B):
            u, r = rng.uniform_pair(k0, k1, rng.STREAM_METROPOLIS, chain0 + c, b)
            j = int(r * P)
            if j >= P:
                j = P - 1
            wk = w[k]
            if wk == 0.0 or u <= w[j] / wk:
                k = j
        out[c] = k


_metropolis_parallel = njit(parallel=True, cache=True)(_metropolis_kernel)
_metropolis_serial = njit(cache=True)(_metropolis_kernel)


def metropolis_chains(w, starts, B: int, seed: int, chain0: int = 0) -> np.ndarray:
    """Run one Metropolis chain per entry of ``starts`` for ``B`` steps.

    Chain ``c`` draws from the stream of index ``chain0 + c``; it proposes a
    uniformly chosen particle ``j`` and moves there when ``u <= w[j]/w[k]``.
    A chain sitting on a zero weight always moves.  Returns final states.
    """
    x = as_weights(w).w
    starts = np.asarray(starts, dtype=np.int64)
    if starts.size and (starts.min() < 0 or starts.max() >= x.shape[0]):
        raise IndexError("chain start out of range")
    if B < 0:
        raise ValueError("B must be non-negative")
    out = np.empty(starts.shape[0], dtype=np.int64)
    k0, k1 = rng.split_key(seed)
    kernel = _metropolis_parallel if starts.shape[0] * B >= _PARALLEL_MIN_P else _metropolis_serial
    kernel(x, starts, int(B), k0, k1, int(chain0), out)
    return out


def metropolis(w, cfg: ResampleConfig | None = None) -> np.ndarray:
    """Ancestors from ``P`` independent Metropolis chains, chain ``i`` starting at ``i``.

    Only weight ratios are used; no sum over particles is formed.  ``B = 0``
    returns the identity ancestry.
    """
    cfg = cfg or ResampleConfig(Scheme.METROPOLIS)
    ws = as_weights(w)
    return metropolis_chains(ws, np.arange(ws.P), cfg.B, cfg.seed)


_DISPATCH = {
    Scheme.MULTINOMIAL: multinomial,
    Scheme.STRATIFIED: stratified,
    Scheme.SYSTEMATIC: systematic,
    Scheme.METROPOLIS: metropolis,
}


def resample(w, cfg: ResampleConfig) -> np.ndarray:
    """Run ``cfg.scheme``; returns offspring or ancestors as the scheme does natively."""
    return _DISPATCH[cfg.scheme](w, cfg)


def resample_offspring(w, cfg: ResampleConfig) -> np.ndarray:
    out = resample(w, cfg)
    if cfg.scheme in OFFSPRING_SCHEMES:
        return out
    return ancestors_to_offspring(out, out.shape[0])


def resample_ancestors(w, cfg: ResampleConfig) -> np.ndarray:
    out = resample(w, cfg)
    if cfg.scheme in OFFSPRING_SCHEMES:
        return offspring_to_ancestors(out)
    return out
