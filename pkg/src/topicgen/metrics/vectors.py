"""Word vectors from PPMI co-occurrence factorization.

Deterministic replacement for stochastically trained embeddings: count
symmetric-window co-occurrences, take positive pointwise mutual
information, factorize with a seeded truncated SVD. Cosine similarities
over these vectors drive coherence and document similarity.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from topicgen.errors import DataError
from topicgen.linalg import randomized_svd


@dataclass
class WordVectors:
    """Row i is the embedding of token id i; zero rows mean "no data"."""

    vectors: np.ndarray
    context_vectors: np.ndarray
    window: int
    method: str = "ppmi-svd"

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def reconstruction(self) -> np.ndarray:
        """The PPMI matrix implied by the factors (exact at full rank)."""
        return self.vectors @ self.context_vectors.T


def cooccurrence_counts(documents, vocab_size: int, window: int = 5) -> np.ndarray:
    """Symmetric within-document co-occurrence counts (vocab x vocab)."""
    counts = np.zeros((vocab_size, vocab_size), dtype=np.float64)
    for doc in documents:
        seq = list(doc)
        for i, a in enumerate(seq):
            hi = min(len(seq), i + window + 1)
            for j in range(i + 1, hi):
                b = seq[j]
                counts[a, b] += 1.0
                counts[b, a] += 1.0
    return counts


def ppmi_matrix(counts: np.ndarray) -> np.ndarray:
    """Positive pointwise mutual information of a count matrix."""
    total = counts.sum()
    if total <= 0:
        raise DataError("empty co-occurrence counts")
    row = counts.sum(axis=1)
    col = counts.sum(axis=0)
    with np.errstate(divide="ignore", invalid="ignore"):
        pmi = np.log(counts * total / np.outer(row, col))
    pmi[~np.isfinite(pmi)] = 0.0
    return np.maximum(pmi, 0.0)


def train_word_vectors(
    documents,
    vocab_size: int,
    dim: int,
    *,
    window: int = 5,
    seed: int = 0,
) -> WordVectors:
    """Factorize the corpus PPMI matrix into dim-dimensional embeddings."""
    if dim < 2:
        raise ValueError(f"dim must be >= 2, got {dim}")
    if dim > vocab_size:
        raise DataError(f"dim={dim} exceeds vocabulary size {vocab_size}")
    docs = list(documents)
    if not docs:
        raise DataError("empty corpus")
    counts = cooccurrence_counts(docs, vocab_size, window=window)
    ppmi = ppmi_matrix(counts)
    u, sigma, vt = randomized_svd(ppmi, dim, seed=seed)
    scale = np.sqrt(sigma)
    return WordVectors(
        vectors=u * scale,
        context_vectors=vt.T * scale,
        window=window,
    )


def save_word_vectors(vectors: WordVectors, path) -> None:
    """JSON header line plus little-endian float32 blobs."""
    n, d = vectors.vectors.shape
    header = {"kind": "word-vectors", "method": vectors.method,
              "window": vectors.window, "vocab_size": n, "dim": d}
    with Path(path).open("wb") as fh:
        fh.write((json.dumps(header) + "\n").encode("utf-8"))
        fh.write(np.ascontiguousarray(vectors.vectors, dtype="<f4").tobytes())
        fh.write(np.ascontiguousarray(vectors.context_vectors, dtype="<f4").tobytes())


def load_word_vectors(path) -> WordVectors:
    with Path(path).open("rb") as fh:
        header = json.loads(fh.readline().decode("utf-8"))
        n, d = header["vocab_size"], header["dim"]

        def read():
            raw = fh.read(n * d * 4)
            if len(raw) != n * d * 4:
                raise DataError(f"{path}: truncated word-vector blob")
            return np.frombuffer(raw, dtype="<f4").astype(np.float64).reshape(n, d)

        return WordVectors(
            vectors=read(), context_vectors=read(),
            window=int(header["window"]), method=header.get("method", "ppmi-svd"),
        )
