"""Deterministic RNG construction from any 64-bit integer seed."""

from __future__ import annotations

import numpy as np

__all__ = ["rng_for"]

_MASK64 = (1 << 64) - 1


def rng_for(seed: int) -> np.random.Generator:
    """PCG64 generator; negative seeds map to their unsigned bit pattern."""
    return np.random.Generator(np.random.PCG64(int(seed) & _MASK64))
