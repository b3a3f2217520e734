"""
harness/seeds.py

Child-seed derivation. A seed and any tuple of non-negative integer keys
(n-index, replication index, lane, block, ...) map to a 64-bit child seed
through the splitmix64 finaliser:

    h = splitmix64(seed)
    for key in keys:
        h = splitmix64(h XOR key)

The result depends only on (seed, keys), never on evaluation order, so any
replication can be regenerated on its own and parallel runs match serial
ones bit for bit.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1

_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def splitmix64(x: int) -> int:
    z = (x + _GOLDEN) & MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & MASK64
    return z ^ (z >> 31)


def derive_seed(seed: int, *keys: int) -> int:
    if not 0 <= seed <= MASK64:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed!r}")
    h = splitmix64(seed)
    for key in keys:
        if key < 0:
            raise ValueError(f"seed keys must be >= 0, got {key!r}")
        h = splitmix64(h ^ (key & MASK64))
    return h


def child_rng(seed: int, *keys: int) -> np.random.Generator:
    return np.random.default_rng(derive_seed(seed, *keys))
