"""Session-scoped desk-corpus fixtures shared across the suite.

Everything is deterministic: fixed corpus seed, fixed training seeds, so
expectations frozen in tests stay valid.
"""

import pytest

from topicgen.bpe import train_bpe
from topicgen.corpus import build_corpus
from topicgen.data import desk_corpus
from topicgen.lm import train_ngram
from topicgen.metrics import train_word_vectors
from topicgen.topics import train_lda


@pytest.fixture(scope="session")
def desk_texts():
    return desk_corpus(800)


@pytest.fixture(scope="session")
def desk_bpe(desk_texts):
    return train_bpe(desk_texts, vocab_size=400)


@pytest.fixture(scope="session")
def desk_filtered(desk_bpe, desk_texts):
    return build_corpus(desk_bpe, desk_texts, 20, 0.3)


@pytest.fixture(scope="session")
def desk_lda(desk_filtered):
    return train_lda(desk_filtered, 5, seed=0)


@pytest.fixture(scope="session")
def desk_ngram(desk_bpe, desk_texts):
    docs = [desk_bpe.encode(t) for t in desk_texts]
    return train_ngram(docs, desk_bpe.vocab_size, desk_bpe.bos_id, desk_bpe.eos_id, order=3)


@pytest.fixture(scope="session")
def desk_vectors(desk_bpe, desk_filtered):
    return train_word_vectors(desk_filtered.documents, desk_bpe.vocab_size, dim=32, seed=0)


@pytest.fixture(scope="session")
def desk_prompt(desk_bpe):
    return desk_bpe.encode("the issue is")
