"""Evaluation quantities: entropy, divergence, coherence, diversity.

All distributions are plain 1-D numpy vectors over the shared vocabulary.
Entropies and divergences are in nats.
"""

from __future__ import annotations

import logging
from collections import Counter

import numpy as np

from topicgen.errors import DataError

log = logging.getLogger(__name__)

KL_FLOOR = 1e-12  # sparse base distributions carry exact zeros


def entropy(p) -> float:
    """-sum p log p with the 0 log 0 := 0 convention."""
    p = np.asarray(p, dtype=np.float64)
    nz = p[p > 0.0]
    return float(-(nz * np.log(nz)).sum())


def cross_entropy(p, q, floor: float = KL_FLOOR) -> float:
    """-sum p log q, with q floored so sparse outputs stay finite."""
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if p.shape != q.shape:
        raise DataError(f"distribution shapes differ: {p.shape} vs {q.shape}")
    mask = p > 0.0
    return float(-(p[mask] * np.log(np.maximum(q[mask], floor))).sum())


def surprise(p_fused, p_base, floor: float = KL_FLOOR) -> float:
    """KL(p_fused || p_base): how much the topic shifted the base model.

    Equals the cross entropy between the two minus the entropy of the
    fused distribution. Clamped at 0: flooring the base can otherwise
    leak a negative value on the order of vocab_size * floor.
    """
    p_fused = np.asarray(p_fused, dtype=np.float64)
    p_base = np.asarray(p_base, dtype=np.float64)
    if p_fused.shape != p_base.shape:
        raise DataError(f"distribution shapes differ: {p_fused.shape} vs {p_base.shape}")
    mask = p_fused > 0.0
    nz = p_fused[mask]
    kl = float((nz * (np.log(nz) - np.log(np.maximum(p_base[mask], floor)))).sum())
    return max(kl, 0.0)


def _unit_rows(vectors: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    norms = np.linalg.norm(vectors, axis=1)
    in_vocab = norms > 0.0
    unit = np.zeros_like(vectors)
    unit[in_vocab] = vectors[in_vocab] / norms[in_vocab, None]
    return unit, in_vocab


def coherence(token_ids, vectors, include_self: bool = True) -> float:
    """Mean pairwise cosine similarity of the tokens' word vectors.

    The pair set is every ordered pair over the surviving tokens; self
    pairs are included by default per the definition in use (disable with
    include_self=False). Tokens without a vector are dropped and the drop
    count is logged.
    """
    emb = vectors.vectors if hasattr(vectors, "vectors") else np.asarray(vectors)
    unit, in_vocab = _unit_rows(emb)
    ids = [int(t) for t in token_ids]
    if any(t < 0 or t >= emb.shape[0] for t in ids):
        raise DataError("token id outside the vector vocabulary")
    kept = [t for t in ids if in_vocab[t]]
    dropped = len(ids) - len(kept)
    if dropped:
        log.debug("coherence: dropped %d of %d tokens with no vector", dropped, len(ids))
    if len(kept) < 2:
        raise DataError(f"need >= 2 in-vocab tokens for coherence, have {len(kept)}")
    rows = unit[kept]
    sims = rows @ rows.T
    if include_self:
        return float(sims.mean())
    n = len(kept)
    return float((sims.sum() - np.trace(sims)) / (n * (n - 1)))


def dist_n(samples, n: int) -> float:
    """Percentage of distinct n-grams among all n-grams across samples."""
    if n not in (1, 2, 3):
        raise ValueError(f"n must be 1, 2 or 3, got {n}")
    grams = Counter()
    for sample in samples:
        seq = list(sample)
        for i in range(len(seq) - n + 1):
            grams[tuple(seq[i:i + n])] += 1
    total = sum(grams.values())
    if total == 0:
        raise DataError("no n-grams to count (empty input)")
    return 100.0 * len(grams) / total


def doc_similarity(doc_a, doc_b, vectors) -> float:
    """Cosine similarity of the two documents' mean token embeddings."""
    emb = vectors.vectors if hasattr(vectors, "vectors") else np.asarray(vectors)
    _, in_vocab = _unit_rows(emb)

    def _mean_vec(ids, name):
        kept = [int(t) for t in ids if 0 <= int(t) < emb.shape[0] and in_vocab[int(t)]]
        if not kept:
            raise DataError(f"document {name} has no in-vocabulary tokens")
        return emb[kept].mean(axis=0)

    a = _mean_vec(doc_a, "a")
    b = _mean_vec(doc_b, "b")
    return float(a @ b / (np.linalg.norm(a) * np.linalg.norm(b)))
