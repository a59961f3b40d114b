"""Deterministic randomness utilities.

All simulation code draws from ``numpy.random.Generator`` streams derived
here.  Streams are keyed explicitly (master seed plus integer path), so the
order in which parallel workers execute can never change a result.

The 64-bit mixing function used by the hashing oracle is SplitMix64, chosen
because it is bit-exact reproducible from its published constants in any
language.
"""

from __future__ import annotations

import numpy as np

MASK64 = 0xFFFF_FFFF_FFFF_FFFF

_GAMMA = 0x9E37_79B9_7F4A_7C15
_MIX1 = 0xBF58_476D_1CE4_E5B9
_MIX2 = 0x94D0_49BB_1331_11EB


def splitmix64(x: np.ndarray | int) -> np.ndarray | int:
    """SplitMix64 finalizer applied to an integer or a uint64 array."""
    if np.ndim(x) == 0:
        z = (int(x) + _GAMMA) & MASK64
        z = ((z ^ (z >> 30)) * _MIX1) & MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & MASK64
        return z ^ (z >> 31)
    with np.errstate(over="ignore"):
        z = np.asarray(x, dtype=np.uint64) + np.uint64(_GAMMA)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
        return z ^ (z >> np.uint64(31))


def hash_bucket(seed: np.ndarray | int, value: np.ndarray | int, g: int) -> np.ndarray | int:
    """Map (seed, value) into a bucket in [0, g) via SplitMix64 mixing.

    Modulo bias is accepted: g is never larger than e^10 + 1, far below 2^64.
    """
    if np.ndim(seed) == 0 and np.ndim(value) == 0:
        return splitmix64(int(seed) ^ splitmix64(int(value))) % g
    seed = np.asarray(seed, dtype=np.uint64)
    value = np.asarray(value, dtype=np.uint64)
    mixed = splitmix64(seed ^ splitmix64(value))
    return (mixed % np.uint64(g)).astype(np.int64)


def stream(master_seed: int, *key: int) -> np.random.Generator:
    """Independent generator for a (master seed, integer path) pair.

    Two calls with the same arguments return generators that produce
    identical draws; distinct paths are statistically independent.
    """
    ss = np.random.SeedSequence(master_seed, spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.PCG64(ss))


def draw_hash_seeds(rng: np.random.Generator, size: int) -> np.ndarray:
    """Fresh 64-bit hash seeds, one per report."""
    return rng.integers(0, 1 << 64, size=size, dtype=np.uint64)
