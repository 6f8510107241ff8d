"""Byte-pair-encoding tokenizer trained from raw text.

Character-level base alphabet; merges are learned greedily by pair
frequency with ties broken lexicographically, so training is fully
deterministic for a given corpus order. A model can also be built
verbatim from an externally supplied vocabulary (e.g. one exported by a
remote language model), in which case encoding is greedy longest-match.
"""

from __future__ import annotations

import json
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from topicgen.errors import DataError

BOS = "<bos>"
EOS = "<eos>"
UNK = "<unk>"
_SPECIALS = (BOS, EOS, UNK)


@dataclass
class BpeModel:
    """Token inventory shared by the language model and the topic models.

    ``vocab[i]`` is the string for token id i; ids are dense in
    [0, vocab_size). ``merges`` apply in recorded order when encoding.
    """

    vocab: list[str]
    merges: list[tuple[str, str]]
    bos_id: int
    eos_id: int
    unk_id: int | None
    token_to_id: dict = field(repr=False, default=None)
    _merge_ranks: dict = field(repr=False, default=None)
    _longest_match: bool = field(repr=False, default=False)

    def __post_init__(self):
        if self.token_to_id is None:
            self.token_to_id = {tok: i for i, tok in enumerate(self.vocab)}
        if len(self.token_to_id) != len(self.vocab):
            raise DataError("vocabulary contains duplicate tokens")
        if self._merge_ranks is None:
            self._merge_ranks = {
                (a, b): self.token_to_id[a + b] for a, b in self.merges
            }

    @property
    def vocab_size(self) -> int:
        return len(self.vocab)

    def encode(self, text: str) -> list[int]:
        """Text to token ids; characters outside the alphabet become unk."""
        if not text:
            return []
        if self._longest_match:
            return self._encode_longest_match(text)
        ids = [self.token_to_id.get(ch, self.unk_id) for ch in text]
        while len(ids) > 1:
            best = None
            for left, right in zip(ids, ids[1:]):
                pair = (self.vocab[left], self.vocab[right])
                merged = self._merge_ranks.get(pair)
                if merged is not None and (best is None or merged < best[2]):
                    best = (pair[0], pair[1], merged)
            if best is None:
                break
            ids = _apply_merge_ids(ids, self.token_to_id[best[0]],
                                   self.token_to_id[best[1]], best[2])
        return ids

    def _encode_longest_match(self, text: str) -> list[int]:
        max_len = max(len(t) for t in self.vocab)
        ids = []
        pos = 0
        while pos < len(text):
            match = None
            for size in range(min(max_len, len(text) - pos), 0, -1):
                candidate = text[pos:pos + size]
                if candidate in self.token_to_id:
                    match = candidate
                    break
            if match is None:
                if self.unk_id is not None:
                    ids.append(self.unk_id)
                pos += 1
            else:
                ids.append(self.token_to_id[match])
                pos += len(match)
        return ids

    def decode(self, ids) -> str:
        """Concatenate token strings; inverse of encode on alphabet text."""
        out = []
        for i in ids:
            i = int(i)
            if i < 0 or i >= self.vocab_size:
                raise DataError(f"token id {i} out of range [0, {self.vocab_size})")
            out.append(self.vocab[i])
        return "".join(out)

    def save(self, path) -> None:
        payload = {
            "merges": [list(pair) for pair in self.merges],
            "vocab": self.vocab,
            "special": {"bos": self.bos_id, "eos": self.eos_id, "unk": self.unk_id},
        }
        if self._longest_match:
            payload["longest_match"] = True
        Path(path).write_text(json.dumps(payload, ensure_ascii=False), encoding="utf-8")

    @classmethod
    def load(cls, path) -> "BpeModel":
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
        unk = payload["special"]["unk"]
        model = cls(
            vocab=list(payload["vocab"]),
            merges=[tuple(pair) for pair in payload["merges"]],
            bos_id=int(payload["special"]["bos"]),
            eos_id=int(payload["special"]["eos"]),
            unk_id=None if unk is None else int(unk),
        )
        model._longest_match = not model.merges and bool(payload.get("longest_match"))
        return model

    @classmethod
    def from_vocab(cls, tokens, bos_id: int, eos_id: int, unk_id: int | None = None) -> "BpeModel":
        """Adopt an external vocabulary verbatim (no merges).

        Encoding uses greedy longest-match against the token strings, so a
        topic model trained on these ids lines up with the external model.
        Without an unk entry, unencodable characters are skipped; the
        vocabulary is never extended, because ids must stay aligned with
        the external model's logits.
        """
        tokens = list(tokens)
        if unk_id is None and UNK in tokens:
            unk_id = tokens.index(UNK)
        model = cls(vocab=tokens, merges=[], bos_id=bos_id, eos_id=eos_id, unk_id=unk_id)
        model._longest_match = True
        return model


def _apply_merge_ids(ids, left_id, right_id, new_id):
    out = []
    i = 0
    while i < len(ids):
        if i + 1 < len(ids) and ids[i] == left_id and ids[i + 1] == right_id:
            out.append(new_id)
            i += 2
        else:
            out.append(ids[i])
            i += 1
    return out


def _count_pairs(docs) -> Counter:
    counts = Counter()
    for doc in docs:
        counts.update(zip(doc, doc[1:]))
    return counts


def train_bpe(raw_texts, vocab_size: int, *, min_pair_count: int = 2, jobs: int = 1) -> BpeModel:
    """Learn a BPE vocabulary of at most vocab_size tokens.

    Most frequent adjacent pair wins each round; equal counts go to the
    lexicographically smaller (left, right) pair. Training stops at the
    vocab budget or when no pair occurs min_pair_count times. jobs > 1
    parallelizes the pair counting only; merges are identical either way.
    """
    texts = [t for t in raw_texts if t]
    if not texts:
        raise DataError("cannot train a tokenizer on an empty corpus")
    alphabet = sorted({ch for text in texts for ch in text})
    base_size = len(_SPECIALS) + len(alphabet)
    if vocab_size <= base_size:
        raise DataError(
            f"vocab_size={vocab_size} must exceed specials+alphabet size {base_size}"
        )

    vocab = list(_SPECIALS) + alphabet
    token_to_id = {tok: i for i, tok in enumerate(vocab)}
    docs = [[token_to_id[ch] for ch in text] for text in texts]
    merges: list[tuple[str, str]] = []

    while len(vocab) < vocab_size:
        if jobs > 1:
            chunk = max(1, len(docs) // jobs)
            parts = [docs[i:i + chunk] for i in range(0, len(docs), chunk)]
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                counts = Counter()
                for part in pool.map(_count_pairs, parts):
                    counts.update(part)
        else:
            counts = _count_pairs(docs)
        if not counts:
            break
        best_count = max(counts.values())
        if best_count < min_pair_count:
            break
        best = min(
            (pair for pair, c in counts.items() if c == best_count),
            key=lambda pair: (vocab[pair[0]], vocab[pair[1]]),
        )
        left, right = best
        new_token = vocab[left] + vocab[right]
        if new_token in token_to_id:  # same surface string from another split
            break
        new_id = len(vocab)
        vocab.append(new_token)
        token_to_id[new_token] = new_id
        merges.append((vocab[left], vocab[right]))
        docs = [_apply_merge_ids(doc, left, right, new_id) for doc in docs]

    return BpeModel(
        vocab=vocab,
        merges=merges,
        bos_id=vocab.index(BOS),
        eos_id=vocab.index(EOS),
        unk_id=vocab.index(UNK),
    )
