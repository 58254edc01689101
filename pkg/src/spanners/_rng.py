"""Counter-based random streams.

Every random decision in the library flows from one user seed through
(seed, stream, index) triples.  Scalar-per-vertex draws (exponential radii,
sampling coins) use a splitmix64 sequence, so the draw for vertex ``i`` can be
regenerated in isolation and does not depend on draw order, array layout or
platform.  Bulk graph sampling uses numpy's Philox generator keyed the same
way; Philox is counter-based as well.
"""

from __future__ import annotations

import numpy as np

_MASK = np.uint64(0xFFFFFFFFFFFFFFFF)
_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_TWO53_INV = 2.0 ** -53


def _finalize(z: np.ndarray | np.uint64):
    # uint64 wraparound is the whole point here
    with np.errstate(over="ignore"):
        z = (z ^ (z >> np.uint64(30))) * _M1
        z = (z ^ (z >> np.uint64(27))) * _M2
        return z ^ (z >> np.uint64(31))


def stream_key(seed: int, *parts: int) -> int:
    """Fold a seed and stream identifiers into a single 64-bit key."""
    with np.errstate(over="ignore"):
        s = np.uint64(seed & 0xFFFFFFFFFFFFFFFF)
        s = _finalize(s + _GAMMA)
        for p in parts:
            s = _finalize((s ^ np.uint64(p & 0xFFFFFFFFFFFFFFFF)) + _GAMMA)
    return int(s)


def uniform01(key: int, ids) -> np.ndarray:
    """Uniform draws on (0, 1], one per id, independent of evaluation order.

    U = 1 is attainable (2^53 equispaced values), so -log(U) can be exactly 0.
    """
    ids = np.asarray(ids, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(key) + (ids + np.uint64(1)) * _GAMMA
        h = _finalize(z)
    return ((h >> np.uint64(11)).astype(np.float64) + 1.0) * _TWO53_INV


def exponential(key: int, ids, beta: float) -> np.ndarray:
    """Inverse-transform exponential draws r = -ln(U)/beta, U on (0, 1]."""
    if beta <= 0:
        raise ValueError("beta must be positive")
    return -np.log(uniform01(key, ids)) / beta


def generator(key: int) -> np.random.Generator:
    """Philox generator for bulk sampling under the same keying scheme."""
    return np.random.Generator(np.random.Philox(key=key))
