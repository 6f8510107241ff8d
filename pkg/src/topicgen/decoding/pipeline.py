"""Per-step logit shaping: topic fusion, temperature, repetition, filtering.

The fixed order of a decoding step is: raw logits -> fuse_topic ->
apply_temperature_repetition -> output mapping (softmax/sparsemax/entmax)
-> top-k / nucleus filtering -> sampling.
"""

from __future__ import annotations

from typing import Iterable

import numpy as np

from topicgen.errors import DataError

NEG_INF = float("-inf")


def fuse_topic(scores, prior, gamma: float, threshold: float = NEG_INF) -> np.ndarray:
    """Add gamma-scaled topic log-priors to raw logits.

    Positions whose logit is <= threshold keep a neutral 0 adjustment, so
    tokens the language model already rules out are not disturbed. With
    threshold -inf every position is adjusted; with gamma 0 the logits
    pass through bit-for-bit.
    """
    scores = np.asarray(getattr(scores, "scores", scores), dtype=np.float64)
    logprob = np.asarray(getattr(prior, "logprob", prior), dtype=np.float64)
    if scores.shape != logprob.shape:
        raise DataError(
            f"vocabulary mismatch: logits have shape {scores.shape}, "
            f"topic prior has shape {logprob.shape}"
        )
    if gamma < 0.0:
        raise ValueError(f"gamma must be >= 0, got {gamma}")
    if gamma == 0.0:
        return scores.copy()
    if threshold == NEG_INF:
        gated = logprob
    else:
        gated = np.where(scores > threshold, logprob, 0.0)
    return scores + gamma * gated


def apply_temperature_repetition(
    scores: np.ndarray,
    temperature: float,
    penalty: float,
    generated: Iterable[int],
    sign_aware: bool = False,
) -> np.ndarray:
    """Divide logits by T and additionally by the penalty on generated tokens.

    Verbatim division is the default; dividing a negative logit by r > 1
    raises its probability, so an opt-in sign-aware mode multiplies
    negative logits instead.
    """
    if temperature <= 0.0:
        raise ValueError(f"temperature must be > 0, got {temperature}")
    if penalty < 1.0:
        raise ValueError(f"repetition penalty must be >= 1, got {penalty}")
    scores = np.asarray(scores, dtype=np.float64)
    divisor = np.ones_like(scores)
    seen = np.fromiter(set(generated), dtype=np.int64, count=-1)
    if seen.size:
        if seen.min() < 0 or seen.max() >= scores.size:
            raise DataError("generated token id out of vocabulary range")
        divisor[seen] = penalty
    if sign_aware:
        adjusted = np.where(scores < 0.0, scores * divisor, scores / divisor)
        return adjusted / temperature
    return scores / (temperature * divisor)


def nucleus_filter(p: np.ndarray, top_p: float) -> np.ndarray:
    """Keep the smallest probability-sorted prefix with mass >= top_p.

    Ties at the boundary are broken by ascending token id (stable sort),
    the kept mass is renormalized, and everything else becomes exact zero.
    Zero-probability tokens are never kept.
    """
    if not 0.0 < top_p <= 1.0:
        raise ValueError(f"top_p must be in (0, 1], got {top_p}")
    p = np.asarray(p, dtype=np.float64)
    order = np.argsort(-p, kind="stable")
    cum = np.cumsum(p[order])
    target = min(top_p, float(cum[-1]))  # defend against total mass < top_p
    cut = int(np.searchsorted(cum, target, side="left")) + 1
    kept = order[:cut]
    out = np.zeros_like(p)
    out[kept] = p[kept] / p[kept].sum()
    return out


def top_k_filter(p: np.ndarray, k: int) -> np.ndarray:
    """Keep the k most probable tokens (ties by ascending id), renormalize."""
    if k < 1:
        raise ValueError(f"top_k must be >= 1, got {k}")
    p = np.asarray(p, dtype=np.float64)
    if k >= p.size:
        return p.copy()
    kept = np.argsort(-p, kind="stable")[:k]
    out = np.zeros_like(p)
    out[kept] = p[kept] / p[kept].sum()
    return out
