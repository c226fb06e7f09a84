"""Counter-based random streams (Philox4x32-10).

A variate is a pure function of ``(seed, stream, slot, draw)``, so results do
not depend on evaluation order and pixels can be sampled independently.
"""
from __future__ import annotations

import numpy as np
from scipy.special import ndtri

from ._backend import kernels

# stream identifiers; one per independent consumer
CARRIER = 1
EMBEDDER = 2
TREND_SINGLE = 3
TREND_TRUTH = 4
UNCERTAINTY_CARRIER = 5
UNCERTAINTY_EMBEDDER = 6
TREND_JOINT_CARRIER = 7
TREND_JOINT_EMBEDDER = 8

SEED_MASK = (1 << 64) - 1


def uniforms(seed: int, stream: int, slots, draws) -> np.ndarray:
    """Uniform variates in (0, 1) for broadcast arrays of slots and draws."""
    return kernels.philox_uniforms(int(seed) & SEED_MASK, stream, slots, draws)


def slot_uniforms(seed: int, stream: int, num_slots: int, draw: int = 0) -> np.ndarray:
    """One variate per slot ``0..num_slots-1`` at a fixed draw index."""
    return uniforms(seed, stream, np.arange(num_slots, dtype=np.uint64), draw)


def draw_uniforms(seed: int, stream: int, slot: int, size: int, start: int = 0) -> np.ndarray:
    """``size`` consecutive draws from a single slot."""
    draws = np.arange(start, start + size, dtype=np.uint64)
    return uniforms(seed, stream, slot, draws)


def standard_normal(u: np.ndarray) -> np.ndarray:
    """Inverse-CDF transform of open-interval uniforms to N(0, 1)."""
    return ndtri(u)
