"""Counter-based random streams.

Every random number used by the package is a pure function of
``(seed, stream, index, counter)``: the 64-bit seed is the Philox key, and
the remaining three words (plus a zero) form the 128-bit counter.  Each
particle therefore owns an independent stream that does not depend on the
order in which threads visit particles.

The generator is Philox4x32-10 (Salmon et al., "Parallel random numbers: as
easy as 1, 2, 3", SC'11), checked against the Random123 known-answer vectors
in the test suite.
"""

from __future__ import annotations

import numpy as np
from numba import njit

MASK32 = np.uint64(0xFFFFFFFF)
_M0 = np.uint64(0xD2511F53)
_M1 = np.uint64(0xCD9E8D57)
_W0 = np.uint64(0x9E3779B9)
_W1 = np.uint64(0xBB67AE85)
_S32 = np.uint64(32)
_S5 = np.uint64(5)
_S6 = np.uint64(6)

# Stream tags; one per consumer so that no two consumers share a counter space.
STREAM_MULTINOMIAL = 1
STREAM_STRATIFIED = 2
STREAM_SYSTEMATIC = 3
STREAM_METROPOLIS = 4
STREAM_GAMMA = 5
STREAM_FILTER = 6
STREAM_TEST = 99

_SM_GAMMA = 0x9E3779B97F4A7C15
_SM_MUL1 = 0xBF58476D1CE4E5B9
_SM_MUL2 = 0x94D049BB133111EB
_U64 = (1 << 64) - 1


@njit(cache=True, inline="always")
def philox4x32(c0, c1, c2, c3, k0, k1):
    """Ten-round Philox4x32 block.  All words are uint64 holding 32-bit values."""
    for r in range(10):
        if r > 0:
            k0 = (k0 + _W0) & MASK32
            k1 = (k1 + _W1) & MASK32
        p0 = _M0 * c0
        p1 = _M1 * c2
        n0 = (p1 >> _S32) ^ c1 ^ k0
        n1 = p1 & MASK32
        n2 = (p0 >> _S32) ^ c3 ^ k1
        n3 = p0 & MASK32
        c0, c1, c2, c3 = n0, n1, n2, n3
    return c0, c1, c2, c3


@njit(cache=True, inline="always")
def to_unit(a, b):
    """53-bit double in [0, 1) from two 32-bit words."""
    return float(((a >> _S5) << np.uint64(26)) | (b >> _S6)) * (1.0 / 9007199254740992.0)


@njit(cache=True, inline="always")
def to_open_unit(a, b):
    """53-bit double in the open interval (0, 1)."""
    k = ((a >> _S5) << np.uint64(26)) | (b >> _S6)
    return (float(k) + 0.5) * (1.0 / 9007199254740992.0)


@njit(cache=True, inline="always")
def uniform_pair(k0, k1, stream, index, counter):
    """Two independent [0, 1) doubles for one (stream, index, counter) cell."""
    x0, x1, x2, x3 = philox4x32(
        np.uint64(counter) & MASK32,
        np.uint64(index) & MASK32,
        np.uint64(stream) & MASK32,
        np.uint64(0),
        k0,
        k1,
    )
    return to_unit(x0, x1), to_unit(x2, x3)


def split_key(seed: int) -> tuple[np.uint64, np.uint64]:
    seed = int(seed) & _U64
    return np.uint64(seed & 0xFFFFFFFF), np.uint64(seed >> 32)


def _splitmix64(x: int) -> int:
    x = (x + _SM_GAMMA) & _U64
    x = ((x ^ (x >> 30)) * _SM_MUL1) & _U64
    x = ((x ^ (x >> 27)) * _SM_MUL2) & _U64
    return x ^ (x >> 31)


def derive_seed(seed: int, *tags: int) -> int:
    """Mix integer tags into a 64-bit seed (SplitMix64 chaining).

    Used to give each benchmark cell, replicate and scheme its own key.
    """
    x = _splitmix64(int(seed) & _U64)
    for t in tags:
        x = _splitmix64(x ^ (int(t) & _U64))
    return x


@njit(cache=True)
def _block_kernel(k0, k1, c0, c1, c2, c3, out):
    for i in range(c0.shape[0]):
        x = philox4x32(
            np.uint64(c0[i]), np.uint64(c1[i]), np.uint64(c2[i]), np.uint64(c3[i]), k0, k1
        )
        for j in range(4):
            out[i, j] = x[j]


def philox_block(counters, key) -> np.ndarray:
    """Evaluate Philox4x32-10 on an ``(n, 4)`` array of counter words.

    ``key`` is a pair of 32-bit words.  Returns an ``(n, 4)`` uint64 array of
    32-bit output words.  This is the array form used for known-answer tests.
    """
    ctr = np.atleast_2d(np.asarray(counters, dtype=np.uint64))
    out = np.empty(ctr.shape, dtype=np.uint64)
    _block_kernel(
        np.uint64(key[0]),
        np.uint64(key[1]),
        ctr[:, 0].copy(),
        ctr[:, 1].copy(),
        ctr[:, 2].copy(),
        ctr[:, 3].copy(),
        out,
    )
    return out


@njit(cache=True)
def _uniform_kernel(k0, k1, stream, index, counter, out):
    for i in range(index.shape[0]):
        u, _ = uniform_pair(k0, k1, stream, index[i], counter)
        out[i] = u


def uniforms(seed: int, stream: int, index, counter: int = 0) -> np.ndarray:
    """First [0, 1) variate of each ``(seed, stream, index[i], counter)`` cell."""
    index = np.asarray(index, dtype=np.int64)
    out = np.empty(index.shape[0], dtype=np.float64)
    k0, k1 = split_key(seed)
    _uniform_kernel(k0, k1, stream, index, counter, out)
    return out


@njit(cache=True)
def _normal_kernel(k0, k1, stream, counter, out):
    for i in range(out.shape[0]):
        u1, u2 = uniform_pair(k0, k1, stream, i, counter)
        out[i] = np.sqrt(-2.0 * np.log(1.0 - u1)) * np.cos(2.0 * np.pi * u2)


def normals(seed: int, stream: int, n: int, counter: int = 0) -> np.ndarray:
    """``n`` standard normals (Box-Muller), element ``i`` from stream index ``i``."""
    out = np.empty(n)
    k0, k1 = split_key(seed)
    _normal_kernel(k0, k1, stream, counter, out)
    return out
