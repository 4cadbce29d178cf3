"""Seed derivation helpers.

All randomness in the toolkit flows through counter-based Philox streams
keyed by explicit integer tuples, so any unit of work (a tagging round, a
bag, a fold) can be recomputed independently of execution order or worker
count.
"""

from __future__ import annotations

import numpy as np

_U64 = np.uint64(2**64 - 1)


def seed_sequence(*keys: int) -> np.random.SeedSequence:
    """Build a SeedSequence from an integer key path such as (seed, round)."""
    return np.random.SeedSequence([int(k) & 0xFFFFFFFFFFFFFFFF for k in keys])


def generator(*keys: int) -> np.random.Generator:
    """Deterministic Philox generator for the given key path."""
    return np.random.Generator(np.random.Philox(seed_sequence(*keys)))


def derive_seed(*keys: int) -> int:
    """Collapse a key path into a single reusable 63-bit integer seed."""
    state = seed_sequence(*keys).generate_state(2, dtype=np.uint32)
    return int((int(state[0]) << 31) ^ int(state[1]))


def open_unit_uniform(gen: np.random.Generator, size: int) -> np.ndarray:
    """Uniform draws on the half-open interval (0, 1].

    Zero is excluded so a threshold of exactly 0 never fires and a
    threshold of exactly 1 always does.
    """
    return (gen.integers(0, 2**53, size=size, dtype=np.int64) + 1) / 2.0**53
