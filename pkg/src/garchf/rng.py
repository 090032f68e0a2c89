"""Seed handling.

A seed is either a plain integer or a tuple ``(master, i, j, ...)``.  The tuple
form names stream ``(i, j, ...)`` of the master seed, so parallel replications
can be generated independently and in any order.
"""

from __future__ import annotations

from typing import Union

import numpy as np

SeedLike = Union[int, tuple, np.random.SeedSequence]


def seed_sequence(seed: SeedLike) -> np.random.SeedSequence:
    if isinstance(seed, np.random.SeedSequence):
        return seed
    if isinstance(seed, (tuple, list)):
        if len(seed) == 0:
            raise ValueError("empty seed tuple")
        master, *keys = (int(s) for s in seed)
        return np.random.SeedSequence(entropy=master, spawn_key=tuple(keys))
    if isinstance(seed, (int, np.integer)):
        return np.random.SeedSequence(entropy=int(seed))
    raise TypeError(f"unsupported seed type {type(seed).__name__}")


def generator(seed: SeedLike) -> np.random.Generator:
    """PCG64 generator for ``seed``."""
    return np.random.Generator(np.random.PCG64(seed_sequence(seed)))


def split(seed: SeedLike, index: int) -> tuple:
    """Seed of child stream ``index``; deterministic and order independent."""
    if isinstance(seed, (tuple, list)):
        return tuple(int(s) for s in seed) + (int(index),)
    if isinstance(seed, np.random.SeedSequence):
        return (int(seed.entropy), *seed.spawn_key, int(index))
    return (int(seed), int(index))
