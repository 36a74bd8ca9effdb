"""Weight sets, ancestry conversions and the resampling error metric.

Indices are 0-based throughout.  Offspring and ancestor vectors are plain
``int64`` numpy arrays; :class:`WeightSet` is the only wrapper type, so that
invalid weights are rejected once, at construction.
"""

from __future__ import annotations

import math

import numpy as np


class InvalidWeightsError(ValueError):
    """Weights are empty, negative, non-finite or all zero."""


class InconsistentOffspringError(ValueError):
    """Offspring counts do not sum to the particle count."""


class WeightSet:
    """Non-negative, unnormalized importance weights.

    The array is copied to float64 and frozen.  ``total`` is the correctly
    rounded sum of the weights (``math.fsum``), so normalized weights sum to
    one within a few ulps.
    """

    __slots__ = ("w", "total")

    def __init__(self, w):
        arr = np.array(w, dtype=np.float64).ravel()
        if arr.size == 0:
            raise InvalidWeightsError("weight vector is empty")
        lo = arr.min()
        if not lo >= 0:
            raise InvalidWeightsError("weights must be finite" if np.isnan(lo) else "weights must be non-negative")
        total = math.fsum(arr)
        if not math.isfinite(total):
            if np.isinf(arr).any():
                raise InvalidWeightsError("weights must be finite")
            raise InvalidWeightsError("sum of weights overflows")
        if not total > 0:
            raise InvalidWeightsError("at least one weight must be positive")
        arr.setflags(write=False)
        self.w = arr
        self.total = total

    @property
    def P(self) -> int:
        return self.w.shape[0]

    def __len__(self) -> int:
        return self.w.shape[0]

    def __repr__(self) -> str:
        return f"WeightSet(P={self.P}, total={self.total!r})"


def as_weights(w) -> WeightSet:
    return w if isinstance(w, WeightSet) else WeightSet(w)


def normalize(w) -> np.ndarray:
    """Return ``w / sum(w)``."""
    ws = as_weights(w)
    return ws.w / ws.total


def ess(w) -> float:
    """Effective sample size ``1 / sum(v**2)`` of the normalized weights."""
    v = normalize(w)
    return 1.0 / math.fsum(v * v)


def max_weight(w) -> float:
    """Largest normalized weight."""
    ws = as_weights(w)
    return float(ws.w.max() / ws.total)


def check_offspring(o, P: int | None = None) -> np.ndarray:
    o = np.asarray(o)
    if o.ndim != 1 or not np.issubdtype(o.dtype, np.integer):
        raise InconsistentOffspringError("offspring must be a 1-d integer vector")
    if np.any(o < 0):
        raise InconsistentOffspringError("offspring counts must be non-negative")
    n = o.shape[0] if P is None else P
    if int(o.sum()) != n or o.shape[0] != n:
        raise InconsistentOffspringError(
            f"offspring counts sum to {int(o.sum())}, expected {n}"
        )
    return o.astype(np.int64, copy=False)


def check_ancestors(a, P: int | None = None) -> np.ndarray:
    a = np.asarray(a)
    if a.ndim != 1 or not np.issubdtype(a.dtype, np.integer):
        raise IndexError("ancestors must be a 1-d integer vector")
    n = a.shape[0] if P is None else P
    if a.size and (a.min() < 0 or a.max() >= n):
        raise IndexError(f"ancestor index out of range [0, {n})")
    return a.astype(np.int64, copy=False)


def offspring_to_ancestors(o) -> np.ndarray:
    """Expand counts into ancestors, particle ``i`` filling ``o[i]`` consecutive slots.

    >>> offspring_to_ancestors([2, 0, 1, 1])
    array([0, 0, 2, 3])
    """
    o = check_offspring(o)
    return np.repeat(np.arange(o.shape[0], dtype=np.int64), o)


def ancestors_to_offspring(a, P: int | None = None) -> np.ndarray:
    """Count how often each particle appears as an ancestor."""
    a = check_ancestors(a, P)
    n = a.shape[0] if P is None else P
    return np.bincount(a, minlength=n).astype(np.int64)


def resampling_error(o, w) -> float:
    """Squared distance ``sum((o_i/P - v_i)**2)`` between offspring shares and weights."""
    o = np.asarray(o)
    v = normalize(w)
    if o.shape != v.shape:
        raise ValueError(f"length mismatch: {o.shape[0]} offspring vs {v.shape[0]} weights")
    d = o / o.shape[0] - v
    return math.fsum(d * d)
