"""Seeded counter-based random streams.

Philox is a 64-bit counter-based generator, so an identically keyed stream
produces the same values on every platform. Distinct stream ids give
independent streams for the same seed; token sampling and topic sampling
use separate streams so consuming one never shifts the other.
"""

from __future__ import annotations

import numpy as np

TOKEN_STREAM = 0
TOPIC_STREAM = 1


def stream(seed: int, stream_id: int = TOKEN_STREAM) -> np.random.Generator:
    """Return a Philox generator keyed by (seed, stream_id)."""
    if seed < 0 or seed >= 2**64:
        raise ValueError(f"seed must be in [0, 2**64), got {seed}")
    key = np.array([seed, stream_id], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def sample_categorical(rng: np.random.Generator, weights: np.ndarray) -> int:
    """Draw an index proportionally to a nonnegative weight vector.

    Inverse-CDF sampling on the running sum; zero-weight entries can never
    be drawn, even when rounding makes the total differ slightly from 1.
    """
    cum = np.cumsum(weights)
    total = cum[-1]
    if not np.isfinite(total) or total <= 0.0:
        raise ValueError("weights must be nonnegative with a positive finite sum")
    u = rng.random() * total
    idx = int(np.searchsorted(cum, u, side="right"))
    return min(idx, int(weights.size) - 1)
