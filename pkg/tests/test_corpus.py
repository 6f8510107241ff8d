"""Document-frequency filtering and the token-document matrix."""

import numpy as np
import pytest

from topicgen.bpe import train_bpe
from topicgen.corpus import build_corpus, load_texts, resolve_max_doc, token_doc_matrix
from topicgen.errors import DataError


@pytest.fixture(scope="module")
def tokenizer():
    texts = [f"doc {w}" for w in ("alpha beta", "alpha gamma", "beta gamma delta")]
    return train_bpe(texts * 4, vocab_size=48)


class TestResolveMaxDoc:
    def test_fraction_uses_ceiling(self):
        assert resolve_max_doc(0.3, 10) == 3
        assert resolve_max_doc(0.25, 10) == 3  # ceil(2.5)

    def test_int_is_absolute(self):
        assert resolve_max_doc(7, 10) == 7

    def test_fraction_of_one_keeps_everything(self):
        assert resolve_max_doc(1.0, 42) == 42

    def test_bad_fraction_raises(self):
        with pytest.raises(DataError):
            resolve_max_doc(1.5, 10)


class TestBuildCorpus:
    def test_noop_filter_keeps_all_seen_tokens(self, tokenizer):
        texts = ["alpha beta", "alpha gamma"]
        corpus = build_corpus(tokenizer, texts, 1, len(texts))
        seen = {t for doc in (tokenizer.encode(x) for x in texts) for t in doc}
        assert set(np.flatnonzero(corpus.kept_mask)) >= seen
        assert corpus.dropped_docs == 0

    def test_token_in_every_doc_dropped_by_max(self, tokenizer):
        texts = ["alpha beta", "alpha gamma", "alpha delta"]
        corpus = build_corpus(tokenizer, texts, 1, 2)
        for token in tokenizer.encode("alpha"):
            assert not corpus.kept_mask[token]

    def test_kept_mask_matches_thresholds_exactly(self, tokenizer):
        texts = ["alpha beta", "alpha gamma", "beta gamma delta", "alpha"]
        corpus = build_corpus(tokenizer, texts, 2, 3)
        expect = (corpus.doc_freq >= 2) & (corpus.doc_freq <= 3)
        assert np.array_equal(corpus.kept_mask, expect)

    def test_min_above_max_raises(self, tokenizer):
        with pytest.raises(DataError):
            build_corpus(tokenizer, ["alpha beta"], 5, 2)

    def test_empty_corpus_raises(self, tokenizer):
        with pytest.raises(DataError):
            build_corpus(tokenizer, [], 1, 1)

    def test_emptied_documents_are_dropped_and_counted(self, tokenizer):
        texts = ["alpha beta"] * 3 + ["zzz"]  # 'z' appears in only one doc
        corpus = build_corpus(tokenizer, texts, 2, len(texts))
        assert corpus.dropped_docs == 1
        assert corpus.n_docs == 3

    def test_raising_min_never_grows_vocabulary(self, tokenizer):
        texts = ["alpha beta", "alpha gamma", "alpha gamma delta", "alpha beta gamma"]
        sizes = [
            build_corpus(tokenizer, texts, m, len(texts)).kept_vocab_size
            for m in (1, 2, 3, 4)
        ]
        assert sizes == sorted(sizes, reverse=True)


class TestTokenDocMatrix:
    def test_direct_counts(self):
        class Identity:
            vocab_size = 4

            def encode(self, doc):
                return list(doc)

        corpus = build_corpus(Identity(), [[1, 1, 2], [2]], 1, 2)
        x = token_doc_matrix(corpus)
        assert x[1, 0] == 2
        assert x[2, 0] == 1
        assert x[2, 1] == 1
        assert x.shape == (4, 2)

    def test_column_sums_equal_document_lengths(self, tokenizer):
        rng = np.random.default_rng(0)
        texts = ["".join(rng.choice(list("abgdel "), size=30)) for _ in range(20)]
        corpus = build_corpus(tokenizer, texts, 1, len(texts))
        x = token_doc_matrix(corpus)
        lengths = np.asarray([len(d) for d in corpus.documents], dtype=float)
        np.testing.assert_array_equal(np.asarray(x.sum(axis=0)).ravel(), lengths)

    def test_dropped_tokens_have_zero_rows(self, tokenizer):
        texts = ["alpha beta", "alpha gamma", "alpha delta"]
        corpus = build_corpus(tokenizer, texts, 2, len(texts))
        x = token_doc_matrix(corpus).toarray()
        dropped = ~corpus.kept_mask
        assert np.all(x[dropped] == 0)


class TestLoadTexts:
    def test_one_document_per_line(self, tmp_path):
        f = tmp_path / "corpus.txt"
        f.write_text("first doc\nsecond doc\n\nthird doc\n")
        assert load_texts(f) == ["first doc", "second doc", "third doc"]

    def test_directory_of_txt_files(self, tmp_path):
        (tmp_path / "b.txt").write_text("second")
        (tmp_path / "a.txt").write_text("first")
        assert load_texts(tmp_path) == ["first", "second"]

    def test_missing_path_raises(self, tmp_path):
        with pytest.raises(DataError):
            load_texts(tmp_path / "nope.txt")
