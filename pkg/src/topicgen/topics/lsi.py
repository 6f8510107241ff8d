"""Latent semantic indexing: truncated SVD of the token-document matrix."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from topicgen.errors import DataError
from topicgen.linalg import randomized_svd


@dataclass
class LsiModel:
    """Left singular vectors of the token-document matrix.

    ``u`` is vocab_size x K with orthonormal columns; ``sigma`` holds the
    corresponding singular values in non-increasing order. Rows for tokens
    outside the topic vocabulary are exactly zero because the input matrix
    has zero rows there.
    """

    u: np.ndarray
    sigma: np.ndarray
    vocab_mask: np.ndarray

    @property
    def n_topics(self) -> int:
        return self.u.shape[1]

    @property
    def vocab_size(self) -> int:
        return self.u.shape[0]

    def top_tokens(self, topic: int, n: int = 10) -> list[int]:
        """Token ids with the largest loading on one latent dimension."""
        return [int(i) for i in np.argsort(-self.u[:, topic], kind="stable")[:n]]


def train_lsi(
    matrix,
    n_topics: int,
    *,
    vocab_mask=None,
    seed: int = 0,
    oversample: int = 10,
    power_iters: int = 4,
) -> LsiModel:
    """Best rank-K factorization of a (sparse) token-document matrix.

    The randomized algorithm is seeded and reproducible; reconstruction
    error is non-increasing in K.
    """
    if n_topics <= 0:
        raise DataError(f"n_topics must be positive, got {n_topics}")
    n_rows, n_cols = matrix.shape
    if n_topics > min(n_rows, n_cols):
        raise DataError(
            f"n_topics={n_topics} exceeds min(matrix shape)={min(n_rows, n_cols)}"
        )
    u, sigma, _ = randomized_svd(
        matrix, n_topics, seed=seed, oversample=oversample, power_iters=power_iters
    )
    if vocab_mask is None:
        dense_rows = np.abs(matrix).sum(axis=1)
        vocab_mask = np.asarray(dense_rows).ravel() > 0.0
    vocab_mask = np.asarray(vocab_mask, dtype=bool)
    # zero input rows factor to exact zeros, not QR dust
    u = np.where(vocab_mask[:, None], u, 0.0)
    return LsiModel(u=u, sigma=sigma, vocab_mask=vocab_mask)


def reconstruction_error(matrix, model: LsiModel) -> float:
    """Frobenius error of projecting the matrix onto the latent space."""
    dense = matrix.toarray() if hasattr(matrix, "toarray") else np.asarray(matrix)
    approx = model.u @ (model.u.T @ dense)
    return float(np.linalg.norm(dense - approx))
