from topicgen.metrics.bench import BenchRow, bench, write_bench_csv
from topicgen.metrics.scores import (
    coherence,
    cross_entropy,
    dist_n,
    doc_similarity,
    entropy,
    surprise,
)
from topicgen.metrics.vectors import (
    WordVectors,
    load_word_vectors,
    ppmi_matrix,
    save_word_vectors,
    train_word_vectors,
)

__all__ = [
    "BenchRow",
    "WordVectors",
    "bench",
    "coherence",
    "cross_entropy",
    "dist_n",
    "doc_similarity",
    "entropy",
    "load_word_vectors",
    "ppmi_matrix",
    "save_word_vectors",
    "surprise",
    "train_word_vectors",
    "write_bench_csv",
]
