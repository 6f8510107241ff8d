"""Interpolated Kneser-Ney n-gram language model.

Desk-scale stand-in for a large causal LM: cheap to train, fluent enough
for decoding demos, and exposes the same logits interface as the other
sources. Probabilities over the full vocabulary sum to 1 for any context;
the final backoff level mixes with the uniform distribution so no token
ever has zero probability.
"""

from __future__ import annotations

import json
import logging
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from topicgen.errors import DataError
from topicgen.lm.sources import LogitVector

log = logging.getLogger(__name__)


@dataclass
class NgramModel:
    order: int
    discount: float
    vocab_size: int
    bos_id: int
    eos_id: int
    unigram: np.ndarray = field(repr=False, default=None)
    # tables[m] maps an (m-1)-token context to (successor ids, counts, total, n_types)
    tables: dict = field(repr=False, default_factory=dict)
    max_context: int | None = None

    def prob_vector(self, context) -> np.ndarray:
        """Next-token distribution for a context (backoff through orders)."""
        probs = self.unigram.copy()
        ctx = [self.bos_id] * (self.order - 1) + [int(t) for t in context]
        for m in range(2, self.order + 1):
            key = tuple(ctx[-(m - 1):])
            entry = self.tables.get((m, key))
            if entry is None:
                continue  # unseen context at this order: keep lower-order estimate
            ids, counts, total, n_types = entry
            probs *= self.discount * n_types / total
            probs[ids] += (counts - self.discount) / total
        return probs

    def logits(self, context) -> LogitVector:
        # bos has exact zero probability; floor keeps the scores finite
        probs = np.maximum(self.prob_vector(context), 1e-300)
        return LogitVector(scores=np.log(probs), source="ngram")

    def perplexity(self, documents) -> float:
        """exp of the mean negative log-likelihood over the documents."""
        total_logprob = 0.0
        total_tokens = 0
        for doc in documents:
            padded = [self.bos_id] * (self.order - 1) + list(doc) + [self.eos_id]
            for i in range(self.order - 1, len(padded)):
                p = self.prob_vector(padded[max(0, i - self.order + 1):i])
                total_logprob += float(np.log(p[padded[i]]))
                total_tokens += 1
        if total_tokens == 0:
            raise DataError("no tokens to score")
        return float(np.exp(-total_logprob / total_tokens))

    def save(self, path) -> None:
        payload = {
            "order": self.order,
            "discount": self.discount,
            "vocab_size": self.vocab_size,
            "bos_id": self.bos_id,
            "eos_id": self.eos_id,
            "unigram": [float(p) for p in self.unigram],
            "tables": [
                {
                    "order": m,
                    "context": list(key),
                    "ids": [int(i) for i in ids],
                    "counts": [float(c) for c in counts],
                    "total": total,
                    "n_types": n_types,
                }
                for (m, key), (ids, counts, total, n_types) in self.tables.items()
            ],
        }
        Path(path).write_text(json.dumps(payload), encoding="utf-8")

    @classmethod
    def load(cls, path) -> "NgramModel":
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
        model = cls(
            order=payload["order"],
            discount=payload["discount"],
            vocab_size=payload["vocab_size"],
            bos_id=payload["bos_id"],
            eos_id=payload["eos_id"],
            unigram=np.asarray(payload["unigram"], dtype=np.float64),
        )
        for entry in payload["tables"]:
            key = (entry["order"], tuple(entry["context"]))
            model.tables[key] = (
                np.asarray(entry["ids"], dtype=np.int64),
                np.asarray(entry["counts"], dtype=np.float64),
                entry["total"],
                entry["n_types"],
            )
        return model


def train_ngram(
    documents,
    vocab_size: int,
    bos_id: int,
    eos_id: int,
    *,
    order: int = 3,
    discount: float = 0.75,
) -> NgramModel:
    """Count n-grams and assemble the interpolated Kneser-Ney model.

    The top order uses raw counts; lower orders use continuation counts
    (distinct left extensions). The unigram level interpolates with the
    uniform distribution over the full vocabulary.
    """
    if not 1 <= order <= 5:
        raise DataError(f"order must be in [1, 5], got {order}")
    if not 0.0 < discount < 1.0:
        raise DataError(f"discount must be in (0, 1), got {discount}")
    docs = [list(d) for d in documents if len(d)]
    if not docs:
        raise DataError("empty corpus")

    # raw counts per order; grams[m][(context, successor)] = count
    grams = {m: Counter() for m in range(1, order + 1)}
    for doc in docs:
        padded = [bos_id] * (order - 1) + doc + [eos_id]
        body_start = order - 1
        for i in range(body_start, len(padded)):
            token = padded[i]
            grams[1][((), token)] += 1
            for m in range(2, order + 1):
                context = tuple(padded[i - m + 1:i])
                grams[m][(context, token)] += 1

    # continuation counts: distinct left extensions seen one order up
    continuation = {m: Counter() for m in range(1, order)}
    for m in range(2, order + 1):
        for (context, token) in grams[m]:
            continuation[m - 1][(context[1:], token)] += 1

    model = NgramModel(
        order=order,
        discount=discount,
        vocab_size=vocab_size,
        bos_id=bos_id,
        eos_id=eos_id,
    )

    # unigram level: continuation counts when a higher order exists
    uni_counts = continuation[1] if order > 1 else grams[1]
    counts_vec = np.zeros(vocab_size, dtype=np.float64)
    for ((_, token), count) in uni_counts.items():
        counts_vec[token] += count
    total = counts_vec.sum()
    n_types = int(np.count_nonzero(counts_vec))
    if total == 0:
        raise DataError("no n-gram statistics collected")
    # bos is never a continuation, so it gets none of the smoothing mass
    uniform = np.full(vocab_size, 1.0 / (vocab_size - 1))
    uniform[bos_id] = 0.0
    model.unigram = (
        np.maximum(counts_vec - discount, 0.0) / total
        + (discount * n_types / total) * uniform
    )

    # grouped successor tables for orders 2..n
    for m in range(2, order + 1):
        source = grams[m] if m == order else continuation[m]
        by_context = defaultdict(list)
        for (context, token), count in source.items():
            by_context[context].append((token, count))
        for context, items in by_context.items():
            items.sort()
            ids = np.asarray([t for t, _ in items], dtype=np.int64)
            counts = np.asarray([c for _, c in items], dtype=np.float64)
            model.tables[(m, context)] = (ids, counts, float(counts.sum()), len(items))

    log.info(
        "ngram: order %d, %d contexts, unigram support %d/%d",
        order, len(model.tables), n_types, vocab_size,
    )
    return model
