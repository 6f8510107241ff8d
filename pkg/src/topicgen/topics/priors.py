"""Per-token topic priors consumed by the decoding fusion step."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from topicgen.errors import DataError
from topicgen.topics.lda import LdaModel
from topicgen.topics.lsi import LsiModel


@dataclass(frozen=True)
class TopicPrior:
    """Log P(topic | token) for every token id, floored and finite.

    Tokens outside the topic vocabulary carry exactly 0.0, a neutral
    adjustment: frequency-filtered function words must pass through the
    fusion untouched or fluency collapses.
    """

    topic_id: int
    logprob: np.ndarray
    epsilon: float
    in_vocab: np.ndarray = None

    @property
    def mass(self) -> np.ndarray:
        """exp(logprob) inside the topic vocabulary, 0 outside."""
        out = np.exp(self.logprob)
        if self.in_vocab is not None:
            out[~self.in_vocab] = 0.0
        return out


def topic_prior(
    model,
    topic: int,
    epsilon: float = 1e-10,
    *,
    bayes_inverted: bool = False,
    topic_weights=None,
) -> TopicPrior:
    """Build the log-prior vector for one topic.

    LDA uses the topic's token distribution directly; LSI uses the topic's
    L2-normalized left singular vector as a score. Scores at or below zero
    are floored at epsilon before the log. ``bayes_inverted`` (LDA only)
    instead normalizes across topics per token, P(t|x) proportional to
    phi[t, x] * weight[t].
    """
    if not 0 <= topic < model.n_topics:
        raise DataError(f"topic {topic} out of range [0, {model.n_topics})")
    if epsilon <= 0.0 or epsilon >= 1.0:
        raise ValueError(f"epsilon must be in (0, 1), got {epsilon}")

    if isinstance(model, LdaModel):
        if bayes_inverted:
            weights = (
                np.full(model.n_topics, 1.0 / model.n_topics)
                if topic_weights is None
                else np.asarray(topic_weights, dtype=np.float64)
            )
            weighted = model.topic_token * weights[:, None]
            denom = weighted.sum(axis=0)
            scores = np.divide(
                weighted[topic], denom, out=np.zeros(model.vocab_size), where=denom > 0
            )
        else:
            scores = model.topic_token[topic]
    elif isinstance(model, LsiModel):
        if bayes_inverted:
            raise DataError("bayes_inverted mode requires an LDA model")
        column = model.u[:, topic]
        norm = np.linalg.norm(column)
        if norm == 0.0:
            raise DataError(f"topic {topic} has a zero singular vector")
        scores = column / norm
    else:
        raise DataError(f"unsupported topic model type {type(model).__name__}")

    logprob = np.log(np.maximum(scores, epsilon))
    logprob = np.where(model.vocab_mask, logprob, 0.0)
    if not np.all(np.isfinite(logprob)):
        raise DataError("topic prior contains non-finite entries")
    return TopicPrior(
        topic_id=topic,
        logprob=logprob,
        epsilon=epsilon,
        in_vocab=np.asarray(model.vocab_mask, dtype=bool).copy(),
    )
