"""Corpus ingestion, document-frequency filtering, token-document counts."""

from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from topicgen.errors import DataError

log = logging.getLogger(__name__)


@dataclass
class Corpus:
    """Filtered documents plus the bookkeeping the filter produced.

    ``documents`` hold only kept-token ids; documents emptied by the
    filter are dropped (``dropped_docs`` counts them). ``kept_mask[i]`` is
    True iff token i survived the document-frequency thresholds.
    """

    documents: list
    vocab_size: int
    doc_freq: np.ndarray
    kept_mask: np.ndarray
    min_doc_occurrence: int
    max_doc_occurrence: int
    dropped_docs: int = 0

    @property
    def n_docs(self) -> int:
        return len(self.documents)

    @property
    def kept_vocab_size(self) -> int:
        return int(self.kept_mask.sum())

    @property
    def kept_ids(self) -> np.ndarray:
        return np.flatnonzero(self.kept_mask)


def load_texts(path) -> list[str]:
    """One document per line from a file, or one per .txt file in a directory."""
    path = Path(path)
    if path.is_dir():
        files = sorted(path.glob("*.txt"))
        if not files:
            raise DataError(f"{path}: directory contains no .txt files")
        return [f.read_text(encoding="utf-8").strip() for f in files]
    if not path.exists():
        raise DataError(f"{path}: no such corpus file")
    return [line for line in path.read_text(encoding="utf-8").splitlines() if line.strip()]


def resolve_max_doc(max_doc_occurrence, n_docs: int) -> int:
    """Fractional thresholds (float in (0, 1]) resolve to ceil(f * n_docs)."""
    if isinstance(max_doc_occurrence, float):
        if not 0.0 < max_doc_occurrence <= 1.0:
            raise DataError(
                f"fractional max_doc_occurrence must be in (0, 1], got {max_doc_occurrence}"
            )
        return math.ceil(max_doc_occurrence * n_docs)
    return int(max_doc_occurrence)


def build_corpus(model, raw_texts, min_doc_occurrence: int, max_doc_occurrence) -> Corpus:
    """Encode texts and drop tokens by document frequency.

    A token is kept iff it occurs in at least ``min_doc_occurrence`` and
    at most ``max_doc_occurrence`` documents; the max may be an absolute
    count (int) or a fraction of the corpus (float in (0, 1]).
    """
    texts = [t for t in raw_texts if t]
    if not texts:
        raise DataError("empty corpus")
    encoded = [model.encode(t) for t in texts]
    n_docs = len(encoded)
    max_resolved = resolve_max_doc(max_doc_occurrence, n_docs)
    if min_doc_occurrence > max_resolved:
        raise DataError(
            f"min_doc_occurrence={min_doc_occurrence} exceeds resolved "
            f"max_doc_occurrence={max_resolved}"
        )

    doc_freq = np.zeros(model.vocab_size, dtype=np.int64)
    for doc in encoded:
        for token in set(doc):
            doc_freq[token] += 1
    kept_mask = (doc_freq >= min_doc_occurrence) & (doc_freq <= max_resolved)

    documents = []
    dropped = 0
    for doc in encoded:
        filtered = [t for t in doc if kept_mask[t]]
        if filtered:
            documents.append(filtered)
        else:
            dropped += 1
    log.info(
        "corpus: %d docs kept (%d dropped), vocabulary %d -> %d tokens",
        len(documents), dropped, model.vocab_size, int(kept_mask.sum()),
    )
    if not documents:
        raise DataError("document-frequency filter removed every document")
    return Corpus(
        documents=documents,
        vocab_size=model.vocab_size,
        doc_freq=doc_freq,
        kept_mask=kept_mask,
        min_doc_occurrence=min_doc_occurrence,
        max_doc_occurrence=max_resolved,
        dropped_docs=dropped,
    )


def token_doc_matrix(corpus: Corpus) -> sp.csc_matrix:
    """Sparse counts X[i, j] = occurrences of token i in document j."""
    rows, cols, vals = [], [], []
    for j, doc in enumerate(corpus.documents):
        for token, count in Counter(doc).items():
            rows.append(token)
            cols.append(j)
            vals.append(count)
    return sp.csc_matrix(
        (vals, (rows, cols)),
        shape=(corpus.vocab_size, corpus.n_docs),
        dtype=np.float64,
    )
