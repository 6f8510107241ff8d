"""Coherence-driven hyperparameter search over corpus filters and K."""

from __future__ import annotations

import csv
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from topicgen.corpus import build_corpus, token_doc_matrix
from topicgen.errors import DataError, TopicgenError
from topicgen.metrics.scores import coherence
from topicgen.topics.lda import train_lda
from topicgen.topics.lsi import train_lsi

log = logging.getLogger(__name__)


@dataclass
class SweepRow:
    min_doc: int
    max_doc: object  # absolute count or fraction, as given
    n_topics: int
    coherence: float | None = None
    error: str | None = None


class _RawTexts:
    """Pre-encoded documents presented through the tokenizer interface."""

    def __init__(self, documents, vocab_size):
        self.documents = [list(d) for d in documents]
        self.vocab_size = vocab_size

    def encode(self, doc):
        return list(doc)


def _score_cell(documents, vocab_size, cell, kind, vectors, seed, top_n, train_opts):
    min_doc, max_doc, n_topics = cell
    tokenizer = _RawTexts(documents, vocab_size)
    corpus = build_corpus(tokenizer, tokenizer.documents, min_doc, max_doc)
    if kind == "lda":
        model = train_lda(corpus, n_topics, seed=seed, **train_opts)
    elif kind == "lsi":
        model = train_lsi(token_doc_matrix(corpus), n_topics,
                          vocab_mask=corpus.kept_mask, seed=seed)
    else:
        raise DataError(f"unknown model kind {kind!r}")
    scores = [
        coherence(model.top_tokens(topic, top_n), vectors)
        for topic in range(model.n_topics)
    ]
    return sum(scores) / len(scores)


def sweep(
    documents,
    vocab_size: int,
    grid,
    kind: str,
    vectors,
    *,
    seed: int = 0,
    top_n: int = 10,
    jobs: int = 1,
    train_opts: dict | None = None,
) -> list[SweepRow]:
    """Train one model per (min_doc, max_doc, K) cell and score coherence.

    ``documents`` are already-encoded token-id sequences (the raw,
    unfiltered corpus); each cell applies its own document-frequency
    filter. A failing cell reports its error without aborting the sweep.
    Rows come back sorted by coherence, failures last.
    """
    cells = list(grid)
    if not cells:
        raise DataError("empty sweep grid")
    train_opts = train_opts or {}

    def run(cell):
        row = SweepRow(min_doc=cell[0], max_doc=cell[1], n_topics=cell[2])
        try:
            row.coherence = _score_cell(
                documents, vocab_size, cell, kind, vectors, seed, top_n, train_opts
            )
        except TopicgenError as exc:
            row.error = str(exc)
            log.warning("sweep cell %s failed: %s", cell, exc)
        return row

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(run, cells))
    else:
        rows = [run(cell) for cell in cells]
    rows.sort(key=lambda r: (r.coherence is None, r.coherence if r.coherence is not None else 0.0))
    return rows


def write_sweep_csv(rows, path) -> None:
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["min_doc", "max_doc", "K", "coherence"])
        for row in rows:
            if row.error is not None:
                continue
            writer.writerow([row.min_doc, row.max_doc, row.n_topics, f"{row.coherence:.5f}"])
