"""Deterministic, splittable random streams.

Every sampled object in the package is a pure function of a 64-bit seed plus a
path of keys (family name, trial index, restart index, ...). Streams are built
from :class:`numpy.random.SeedSequence` so sibling streams are independent.
"""

from __future__ import annotations

import zlib

import numpy as np

_MASK64 = (1 << 64) - 1


def _key_to_int(key: int | str) -> int:
    if isinstance(key, str):
        return zlib.crc32(key.encode("utf-8"))
    return int(key) & _MASK64


def stream(seed: int, *path: int | str) -> np.random.Generator:
    """Return a PCG64 generator determined by ``seed`` and ``path``."""
    entropy = [_key_to_int(seed)] + [_key_to_int(k) for k in path]
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))


def child_seed(seed: int, *path: int | str) -> int:
    """Derive a 64-bit seed for a sub-task, e.g. one trial of a batch."""
    return int(stream(seed, "child", *path).integers(0, 1 << 63))


def complex_normal(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
