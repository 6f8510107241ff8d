"""Sampling loops: plain/topic-fused generation and document simulation."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np

from topicgen.decoding.mappings import entmax, softmax
from topicgen.decoding.pipeline import (
    NEG_INF,
    apply_temperature_repetition,
    fuse_topic,
    nucleus_filter,
    top_k_filter,
)
from topicgen.decoding.trace import GenerationTrace, StepRecord
from topicgen.errors import DataError, TopicgenError
from topicgen.lm.sources import next_logits
from topicgen.metrics.scores import entropy, surprise
from topicgen.rng import TOKEN_STREAM, TOPIC_STREAM, sample_categorical, stream


@dataclass(frozen=True)
class DecodeConfig:
    """Knobs for one decoding stream.

    gamma scales the topic log-prior added to the logits; threshold gates
    which positions receive it (-inf disables the gate). alpha selects the
    output mapping (1 softmax, 2 sparsemax, in between entmax). With
    gamma=0, temperature=1, repetition_penalty=1, top_p=1 and alpha=1 the
    pipeline reduces to plain language-model sampling.
    """

    gamma: float = 1.0
    threshold: float = NEG_INF
    alpha: float = 1.0
    temperature: float = 1.0
    repetition_penalty: float = 1.2
    top_p: float = 0.9
    top_k: int | None = None
    max_tokens: int = 50
    seed: int = 0
    sign_aware_repetition: bool = False
    literal_topic_probs: bool = False

    def validate(self) -> None:
        if self.gamma < 0.0:
            raise ValueError(f"gamma must be >= 0, got {self.gamma}")
        if self.alpha < 1.0:
            raise ValueError(f"alpha must be >= 1, got {self.alpha}")
        if self.temperature <= 0.0:
            raise ValueError(f"temperature must be > 0, got {self.temperature}")
        if self.repetition_penalty < 1.0:
            raise ValueError(f"repetition_penalty must be >= 1, got {self.repetition_penalty}")
        if not 0.0 < self.top_p <= 1.0:
            raise ValueError(f"top_p must be in (0, 1], got {self.top_p}")
        if self.top_k is not None and self.top_k < 1:
            raise ValueError(f"top_k must be >= 1, got {self.top_k}")
        if self.max_tokens < 0:
            raise ValueError(f"max_tokens must be >= 0, got {self.max_tokens}")
        if self.seed < 0:
            raise ValueError(f"seed must be >= 0, got {self.seed}")


def _header(source, config: DecodeConfig, prompt_ids, meta) -> dict:
    header = {
        "config": asdict(config),
        "seed": config.seed,
        "prompt_ids": list(prompt_ids),
        "source": type(source).__name__,
        "vocab_size": int(source.vocab_size),
    }
    if meta:
        header.update(meta)
    return header


def _step_distributions(raw_scores, fused_probs, collect_details):
    if not collect_details:
        return 0.0, 0.0, 0.0
    base = softmax(raw_scores)
    return entropy(base), entropy(fused_probs), surprise(fused_probs, base)


def _top_candidates(probs, token_strings, n=5):
    order = np.argsort(-probs, kind="stable")[:n]
    out = []
    for idx in order:
        if probs[idx] <= 0.0:
            break
        out.append([int(idx), _token_str(token_strings, int(idx)), float(probs[idx])])
    return out


def _token_str(token_strings, token_id: int) -> str:
    if token_strings is not None and 0 <= token_id < len(token_strings):
        return token_strings[token_id]
    return str(token_id)


def generate(
    source,
    prior,
    config: DecodeConfig,
    prompt_ids: Sequence[int],
    *,
    token_strings=None,
    meta=None,
    collect_details: bool = True,
    stop_at_eos: bool = True,
) -> GenerationTrace:
    """Decode up to max_tokens continuation tokens after the prompt.

    ``prior`` is a TopicPrior or None for plain sampling. Deterministic
    for a fixed seed: replaying the same inputs reproduces the trace
    bit-for-bit. On a source failure mid-stream the partial trace is
    returned with its error field set.
    """
    config.validate()
    if prior is not None and len(prior.logprob) != source.vocab_size:
        raise DataError(
            f"topic prior covers {len(prior.logprob)} tokens, "
            f"source vocabulary has {source.vocab_size}"
        )
    rng = stream(config.seed, TOKEN_STREAM)
    trace = GenerationTrace(header=_header(source, config, prompt_ids, meta))
    context = list(prompt_ids)
    seen: set[int] = set()

    for index in range(config.max_tokens):
        try:
            vector = next_logits(source, context)
        except TopicgenError as exc:
            trace.error = str(exc)
            trace.stop_reason = "error"
            return trace
        raw = vector.scores
        if prior is not None:
            fused = fuse_topic(raw, prior, config.gamma, config.threshold)
        else:
            fused = raw
        shaped = apply_temperature_repetition(
            fused, config.temperature, config.repetition_penalty, seen,
            sign_aware=config.sign_aware_repetition,
        )
        probs = entmax(shaped, config.alpha)
        filtered = top_k_filter(probs, config.top_k) if config.top_k else probs
        filtered = nucleus_filter(filtered, config.top_p)
        token = sample_categorical(rng, filtered)

        base_h, fused_h, kl = _step_distributions(raw, probs, collect_details)
        topic_lp = float(prior.logprob[token]) if prior is not None else 0.0
        trace.steps.append(StepRecord(
            index=index,
            token_id=token,
            token=_token_str(token_strings, token),
            base_entropy=base_h,
            fused_entropy=fused_h,
            surprise=kl,
            topic_logprob=topic_lp,
            top_candidates=_top_candidates(filtered, token_strings) if collect_details else [],
        ))
        if stop_at_eos and token == source.eos_id:
            trace.stop_reason = "eos"
            return trace
        trace.token_ids.append(token)
        context.append(token)
        seen.add(token)

    trace.stop_reason = "max_tokens"
    return trace


def simulate_document(
    source,
    lda,
    theta: np.ndarray,
    config: DecodeConfig,
    prompt_ids: Sequence[int],
    n_steps: int,
    *,
    epsilon: float = 1e-10,
    bayes_inverted: bool = False,
    token_strings=None,
    meta=None,
    collect_details: bool = True,
    stop_at_eos: bool = True,
) -> GenerationTrace:
    """Generate text whose topic mixture tracks a document's distribution.

    Each step draws a topic from ``theta`` and fuses that topic's prior
    with the logits before sampling the next token. Topic draws and token
    draws use independent streams of the same seed, so a one-hot theta
    reproduces fixed-topic generation exactly.
    """
    from topicgen.topics.priors import topic_prior

    config.validate()
    theta = np.asarray(theta, dtype=np.float64)
    if theta.shape != (lda.n_topics,):
        raise DataError(f"theta has shape {theta.shape}, model has {lda.n_topics} topics")
    if np.any(theta < 0.0) or abs(theta.sum() - 1.0) > 1e-6:
        raise DataError("theta must be a probability vector over topics")
    if n_steps <= 0:
        raise ValueError(f"n_steps must be > 0, got {n_steps}")

    rng_tokens = stream(config.seed, TOKEN_STREAM)
    rng_topics = stream(config.seed, TOPIC_STREAM)
    priors = {}
    trace = GenerationTrace(header=_header(source, config, prompt_ids, meta))
    trace.header["theta"] = [float(v) for v in theta]
    context = list(prompt_ids)
    seen: set[int] = set()

    for index in range(n_steps):
        topic = sample_categorical(rng_topics, theta)
        if topic not in priors:
            priors[topic] = topic_prior(
                lda, topic, epsilon=epsilon, bayes_inverted=bayes_inverted
            )
        prior = priors[topic]
        try:
            vector = next_logits(source, context)
        except TopicgenError as exc:
            trace.error = str(exc)
            trace.stop_reason = "error"
            return trace
        raw = vector.scores
        if config.literal_topic_probs:
            # the sampler recipe as printed adds raw topic probabilities
            fused = raw + config.gamma * lda.topic_token[topic]
        else:
            fused = fuse_topic(raw, prior, config.gamma, config.threshold)
        shaped = apply_temperature_repetition(
            fused, config.temperature, config.repetition_penalty, seen,
            sign_aware=config.sign_aware_repetition,
        )
        probs = entmax(shaped, config.alpha)
        filtered = top_k_filter(probs, config.top_k) if config.top_k else probs
        filtered = nucleus_filter(filtered, config.top_p)
        token = sample_categorical(rng_tokens, filtered)

        base_h, fused_h, kl = _step_distributions(raw, probs, collect_details)
        trace.steps.append(StepRecord(
            index=index,
            token_id=token,
            token=_token_str(token_strings, token),
            base_entropy=base_h,
            fused_entropy=fused_h,
            surprise=kl,
            topic_logprob=float(prior.logprob[token]),
            top_candidates=_top_candidates(filtered, token_strings) if collect_details else [],
            drawn_topic=topic,
        ))
        if stop_at_eos and token == source.eos_id:
            trace.stop_reason = "eos"
            return trace
        trace.token_ids.append(token)
        context.append(token)
        seen.add(token)

    trace.stop_reason = "max_tokens"
    return trace
