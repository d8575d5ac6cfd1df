"""Counter-based deterministic sampling.

Every draw is a pure function of (seed, index, slot): a 64-bit mixing hash
turns the triple into a uniform in (0, 1), and normals go through the
inverse CDF.  Batches can therefore be regenerated point by point, are
identical across runs, and carry no generator state.
"""

from __future__ import annotations

import numpy as np
from scipy.special import ndtri

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_SLOT = np.uint64(0xD1B54A32D192ED03)


def _mix(x: np.ndarray) -> np.ndarray:
    """splitmix64 finalizer, vectorized over uint64 arrays."""
    x = (x ^ (x >> np.uint64(30))) * _MIX1
    x = (x ^ (x >> np.uint64(27))) * _MIX2
    return x ^ (x >> np.uint64(31))


def _keys(seed: int, indices: np.ndarray, slot: int) -> np.ndarray:
    idx = np.atleast_1d(np.asarray(indices, dtype=np.uint64))
    with np.errstate(over="ignore"):
        h = _mix(np.uint64(seed & 0xFFFFFFFFFFFFFFFF) + _GOLDEN)
        h = _mix(h ^ (idx + _GOLDEN))
        h = _mix(h ^ (np.uint64(slot & 0xFFFFFFFFFFFFFFFF) * _SLOT + _GOLDEN))
    return h


def uniform_slot(seed: int, indices, slot: int) -> np.ndarray:
    """Uniforms in the open interval (0, 1), one per index."""
    h = _keys(seed, indices, slot)
    return ((h >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0**-53


def uniforms(seed: int, indices, slots: int, base_slot: int = 0) -> np.ndarray:
    """(len(indices), slots) array of independent uniforms in (0, 1)."""
    idx = np.atleast_1d(np.asarray(indices, dtype=np.uint64))
    out = np.empty((idx.size, slots), dtype=np.float64)
    for s in range(slots):
        out[:, s] = uniform_slot(seed, idx, base_slot + s)
    return out


def normals(seed: int, indices, slots: int, base_slot: int = 0) -> np.ndarray:
    """(len(indices), slots) standard normals via the inverse CDF."""
    idx = np.atleast_1d(np.asarray(indices, dtype=np.uint64))
    out = np.empty((idx.size, slots), dtype=np.float64)
    for s in range(slots):
        out[:, s] = ndtri(uniform_slot(seed, idx, base_slot + s))
    return out
