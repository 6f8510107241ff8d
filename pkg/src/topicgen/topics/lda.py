"""Latent Dirichlet Allocation: online variational Bayes trainer, the
generative sampler used as its oracle, and document-mixture inference.

The trainer follows the online natural-gradient scheme: minibatch E-steps
update per-document variational parameters, then the topic-token
parameters take a step of size rho_t = (tau0 + t)^(-kappa) toward the
batch statistics. Training is deterministic for a fixed seed.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.special import psi

from topicgen.errors import DataError
from topicgen.rng import stream

log = logging.getLogger(__name__)


@dataclass
class LdaModel:
    """Trained topic model.

    ``topic_token`` is K x vocab_size and row-stochastic; columns outside
    the topic vocabulary (kept_mask False at build time) are exactly zero.
    ``alpha`` is the symmetric document-topic prior, ``eta`` the
    topic-token prior.
    """

    topic_token: np.ndarray
    alpha: float
    eta: float
    vocab_mask: np.ndarray
    n_iterations: int = 0
    converged: bool = False
    final_delta: float = float("nan")

    @property
    def n_topics(self) -> int:
        return self.topic_token.shape[0]

    @property
    def vocab_size(self) -> int:
        return self.topic_token.shape[1]

    def top_tokens(self, topic: int, n: int = 10) -> list[int]:
        """Token ids with the highest probability under one topic."""
        row = self.topic_token[topic]
        return [int(i) for i in np.argsort(-row, kind="stable")[:n]]


@dataclass
class SyntheticCorpus:
    """Sampler output plus the latent variables, for recovery checks."""

    documents: list
    theta: np.ndarray
    topics: list = field(default_factory=list)


def _dirichlet_expectation(x: np.ndarray) -> np.ndarray:
    if x.ndim == 1:
        return psi(x) - psi(x.sum())
    return psi(x) - psi(x.sum(axis=1))[:, None]


def _count_matrix(documents, kept_ids: np.ndarray) -> np.ndarray:
    compact = {int(t): i for i, t in enumerate(kept_ids)}
    counts = np.zeros((len(documents), len(kept_ids)), dtype=np.float64)
    for d, doc in enumerate(documents):
        for token in doc:
            idx = compact.get(int(token))
            if idx is not None:
                counts[d, idx] += 1.0
    return counts


def _batch_e_step(counts, expelogbeta, alpha, iters, tol):
    """Variational per-document updates, vectorized over the batch."""
    n_docs, _ = counts.shape
    k = expelogbeta.shape[0]
    gamma = np.ones((n_docs, k))
    expelogtheta = np.exp(_dirichlet_expectation(gamma))
    phinorm = expelogtheta @ expelogbeta + 1e-100
    for _ in range(iters):
        last = gamma
        gamma = alpha + expelogtheta * ((counts / phinorm) @ expelogbeta.T)
        expelogtheta = np.exp(_dirichlet_expectation(gamma))
        phinorm = expelogtheta @ expelogbeta + 1e-100
        if np.abs(gamma - last).mean() < tol:
            break
    sstats = expelogtheta.T @ (counts / phinorm)
    return gamma, sstats * expelogbeta


def train_lda(
    corpus,
    n_topics: int,
    *,
    alpha: float = 0.1,
    eta: float | None = None,
    batch_size: int = 200,
    max_iterations: int = 600,
    seed: int = 0,
    tau0: float = 1.0,
    kappa: float = 0.7,
    convergence_tol: float = 1e-5,
    doc_iters: int = 100,
    doc_tol: float = 1e-3,
) -> LdaModel:
    """Fit K topics to a filtered corpus with online variational Bayes.

    One iteration consumes one minibatch; training stops at
    ``max_iterations`` batches or when the mean absolute change of the
    topic-token matrix between two passes over the corpus drops below
    ``convergence_tol``. ``eta`` defaults to 1/K.
    """
    if n_topics < 2:
        raise DataError(f"need at least 2 topics, got {n_topics}")
    if not corpus.documents:
        raise DataError("empty corpus")
    kept_ids = corpus.kept_ids
    if n_topics > kept_ids.size:
        raise DataError(
            f"n_topics={n_topics} exceeds kept vocabulary size {kept_ids.size}"
        )
    if eta is None:
        eta = 1.0 / n_topics

    rng = stream(seed)
    n_docs = len(corpus.documents)
    counts_all = _count_matrix(corpus.documents, kept_ids)
    lam = rng.gamma(100.0, 1.0 / 100.0, (n_topics, kept_ids.size))

    iteration = 0
    converged = False
    delta = float("nan")
    phi_last_pass = lam / lam.sum(axis=1)[:, None]
    while iteration < max_iterations and not converged:
        order = rng.permutation(n_docs)
        for start in range(0, n_docs, batch_size):
            if iteration >= max_iterations:
                break
            batch = counts_all[order[start:start + batch_size]]
            expelogbeta = np.exp(_dirichlet_expectation(lam))
            _, sstats = _batch_e_step(batch, expelogbeta, alpha, doc_iters, doc_tol)
            rho = (tau0 + iteration) ** (-kappa)
            lam = (1.0 - rho) * lam + rho * (eta + (n_docs / batch.shape[0]) * sstats)
            iteration += 1
        phi = lam / lam.sum(axis=1)[:, None]
        delta = float(np.abs(phi - phi_last_pass).mean())
        phi_last_pass = phi
        if delta < convergence_tol:
            converged = True
    log.info(
        "lda: %d topics, %d batches, pass delta %.2e%s",
        n_topics, iteration, delta, " (converged)" if converged else "",
    )

    topic_token = np.zeros((n_topics, corpus.vocab_size))
    topic_token[:, kept_ids] = lam / lam.sum(axis=1)[:, None]
    return LdaModel(
        topic_token=topic_token,
        alpha=alpha,
        eta=eta,
        vocab_mask=corpus.kept_mask.copy(),
        n_iterations=iteration,
        converged=converged,
        final_delta=delta,
    )


def lda_generate(
    topic_token: np.ndarray,
    alpha,
    n_docs: int,
    doc_length: int,
    seed: int = 0,
) -> SyntheticCorpus:
    """Sample a corpus from the generative process.

    Per document: theta ~ Dirichlet(alpha); per position: a topic from
    Cat(theta), then a token from that topic's distribution. The true
    theta and per-position topics are returned for oracle tests.
    """
    topic_token = np.asarray(topic_token, dtype=np.float64)
    if topic_token.ndim != 2:
        raise DataError(f"topic_token must be 2-D, got shape {topic_token.shape}")
    if np.any(topic_token < 0) or np.abs(topic_token.sum(axis=1) - 1.0).max() > 1e-8:
        raise DataError("topic_token rows must be probability vectors")
    k = topic_token.shape[0]
    alpha_vec = np.full(k, float(alpha)) if np.isscalar(alpha) else np.asarray(alpha, dtype=np.float64)
    if alpha_vec.shape != (k,):
        raise DataError(f"alpha must be scalar or length-{k}, got shape {alpha_vec.shape}")

    rng = stream(seed)
    theta = rng.dirichlet(alpha_vec, size=n_docs) if n_docs else np.zeros((0, k))
    cum_topics = np.cumsum(topic_token, axis=1)
    documents, topics = [], []
    for d in range(n_docs):
        if doc_length == 0:
            documents.append([])
            topics.append([])
            continue
        z = np.searchsorted(np.cumsum(theta[d]), rng.random(doc_length), side="right")
        z = np.minimum(z, k - 1)
        u = rng.random(doc_length)
        tokens = np.empty(doc_length, dtype=np.int64)
        for topic in np.unique(z):
            sel = z == topic
            tokens[sel] = np.searchsorted(cum_topics[topic], u[sel], side="right")
        tokens = np.minimum(tokens, topic_token.shape[1] - 1)
        documents.append(tokens.tolist())
        topics.append(z.tolist())
    return SyntheticCorpus(documents=documents, theta=theta, topics=topics)


def infer_doc_topics(model: LdaModel, doc, iterations: int = 200, tol: float = 1e-10) -> np.ndarray:
    """Estimate a document's topic mixture under a trained model.

    Maximum-likelihood mixture weights by EM over token counts (fold-in):
    depends on the document only through its counts, so duplicating the
    document leaves the estimate unchanged.
    """
    ids = [int(t) for t in doc if 0 <= int(t) < model.vocab_size and model.vocab_mask[int(t)]]
    if not ids:
        raise DataError("document has no tokens inside the topic vocabulary")
    uniq, counts = np.unique(np.asarray(ids), return_counts=True)
    counts = counts.astype(np.float64)
    total = counts.sum()
    token_probs = model.topic_token[:, uniq]  # K x U

    theta = np.full(model.n_topics, 1.0 / model.n_topics)
    for _ in range(iterations):
        mix = theta @ token_probs + 1e-300
        new_theta = theta * ((token_probs / mix) @ counts) / total
        new_theta = new_theta / new_theta.sum()
        if np.abs(new_theta - theta).max() < tol:
            theta = new_theta
            break
        theta = new_theta
    return theta
