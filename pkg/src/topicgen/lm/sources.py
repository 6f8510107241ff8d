"""Common surface for next-token logit providers.

A logit source is any object with ``vocab_size``, ``bos_id``, ``eos_id``,
an optional ``max_context`` (None for unbounded), and a
``logits(context) -> LogitVector`` method. The decoder runs unchanged
against every source.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Protocol, Sequence, runtime_checkable

import numpy as np

from topicgen.errors import DataError


@dataclass
class LogitVector:
    """Unnormalized next-token scores over the shared vocabulary."""

    scores: np.ndarray
    source: str = ""


@runtime_checkable
class LogitSource(Protocol):
    vocab_size: int
    bos_id: int
    eos_id: int

    def logits(self, context: Sequence[int]) -> LogitVector: ...


def next_logits(source, context: Sequence[int]) -> LogitVector:
    """Query a source, injecting BOS for an empty context and validating.

    Raises DataError when the reply is the wrong length or non-finite, so
    a misbehaving provider is caught at the boundary rather than deep in
    the decoding pipeline.
    """
    ctx = list(context) if len(context) else [source.bos_id]
    max_context = getattr(source, "max_context", None)
    if max_context is not None and len(ctx) > max_context:
        ctx = ctx[-max_context:]  # sliding window keeps generation going
    vector = source.logits(ctx)
    scores = np.asarray(vector.scores, dtype=np.float64)
    if scores.shape != (source.vocab_size,):
        raise DataError(
            f"source {vector.source or type(source).__name__!r} returned "
            f"{scores.shape} logits for vocab size {source.vocab_size}"
        )
    if not np.all(np.isfinite(scores)):
        raise DataError("source returned non-finite logits")
    vector.scores = scores
    return vector
