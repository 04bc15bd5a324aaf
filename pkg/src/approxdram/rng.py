"""Deterministic counter-based random streams.

Every stochastic component of the toolkit draws from stateless hashes of
(key, coordinate, counter) tuples instead of stateful generators, so results
are independent of evaluation order and safe to parallelize.  Keys are
derived from a user seed plus string labels (stage names, object ids), which
gives stage-level reproducibility without any seed bookkeeping by callers.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_GOLDEN = 0x9E3779B97F4A7C15

# FNV-1a, used only for hashing label strings into key material.
_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3


def mix64_int(x: int) -> int:
    """SplitMix64 finalizer on a plain integer (mod 2^64)."""
    x &= _MASK64
    x ^= x >> 30
    x = (x * _MIX1) & _MASK64
    x ^= x >> 27
    x = (x * _MIX2) & _MASK64
    x ^= x >> 31
    return x


def _fnv1a(data: bytes) -> int:
    h = _FNV_OFFSET
    for b in data:
        h ^= b
        h = (h * _FNV_PRIME) & _MASK64
    return h


def derive_key(seed: int, *parts: int | str) -> int:
    """Mix a base seed with labels/indices into a new 64-bit stream key.

    Deterministic across platforms and processes.  Distinct part sequences
    give statistically independent keys.
    """
    h = mix64_int(seed ^ _GOLDEN)
    for p in parts:
        if isinstance(p, str):
            v = _fnv1a(p.encode("utf-8"))
        else:
            v = int(p) & _MASK64
        h = mix64_int(h ^ mix64_int(v + _GOLDEN))
    return h


def generator(key: int) -> np.random.Generator:
    """Bulk-draw generator (Philox, counter-based) for a derived key."""
    return np.random.Generator(np.random.Philox(key=key & _MASK64))


def mix64(x: np.ndarray) -> np.ndarray:
    """Vectorized SplitMix64 finalizer over a uint64 array."""
    x = x.astype(np.uint64, copy=True)
    x ^= x >> np.uint64(30)
    x *= np.uint64(_MIX1)
    x ^= x >> np.uint64(27)
    x *= np.uint64(_MIX2)
    x ^= x >> np.uint64(31)
    return x


def hash_cells(cell_ids: np.ndarray) -> np.ndarray:
    """Pre-mix flat cell ids; cache per layout and reuse across accesses."""
    return mix64(cell_ids.astype(np.uint64) + np.uint64(_GOLDEN))


def uniforms(key: int, cell_ids: np.ndarray, premixed: bool = False) -> np.ndarray:
    """One uniform in [0, 1) per cell id, a pure function of (key, id)."""
    h = cell_ids if premixed else hash_cells(np.asarray(cell_ids))
    h = mix64(h ^ np.uint64(mix64_int(key)))
    return (h >> np.uint64(11)) * np.float64(2.0**-53)


def uniform_grid(key: int, cell_ids: np.ndarray, counters: np.ndarray) -> np.ndarray:
    """Uniforms of shape (len(counters), len(cell_ids)).

    Entry (i, j) depends only on (key, counters[i], cell_ids[j]); reads of
    the same cells under different access counters are independent.
    """
    hc = hash_cells(np.asarray(cell_ids))
    hk = mix64(np.asarray(counters, dtype=np.uint64) + np.uint64(mix64_int(key)))
    h = mix64(hc[None, :] ^ hk[:, None])
    return (h >> np.uint64(11)) * np.float64(2.0**-53)
