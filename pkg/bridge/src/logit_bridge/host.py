"""Model hosting: load a causal LM and answer next-token logit queries.

The model directory (or hub name) is loaded through transformers. The
exported vocabulary comes from the model's tokenizer when one is
present; a plain ``bridge_vocab.json`` file (``{"tokens": [...]}``) in
the model directory works for checkpoints that ship without one. Raw
final-layer scores cross the wire, never probabilities: all shaping
happens on the engine side.
"""

from __future__ import annotations

import json
import threading
from pathlib import Path

import torch
from transformers import AutoModelForCausalLM, AutoTokenizer


class HostModel:
    def __init__(self, model_path: str, max_context: int | None = None):
        self.name = Path(model_path).name or str(model_path)
        self.model = AutoModelForCausalLM.from_pretrained(model_path)
        self.model.eval()
        self._lock = threading.Lock()  # serialize access across connections

        self.vocab, bos, eos = self._load_vocab(model_path)
        config = self.model.config
        self.vocab_size = int(config.vocab_size)
        if len(self.vocab) != self.vocab_size:
            raise ValueError(
                f"vocabulary has {len(self.vocab)} entries, model expects "
                f"{self.vocab_size}"
            )
        self.bos_id = int(bos if bos is not None else getattr(config, "bos_token_id", 0) or 0)
        self.eos_id = int(eos if eos is not None else getattr(config, "eos_token_id", 0) or 0)

        model_limit = int(
            getattr(config, "n_positions", None)
            or getattr(config, "max_position_embeddings", 1024)
        )
        self.max_context = min(max_context or model_limit, model_limit)

    @staticmethod
    def _load_vocab(model_path: str):
        sidecar = Path(model_path) / "bridge_vocab.json"
        if sidecar.exists():
            payload = json.loads(sidecar.read_text(encoding="utf-8"))
            return (
                [str(t) for t in payload["tokens"]],
                payload.get("bos_id"),
                payload.get("eos_id"),
            )
        tokenizer = AutoTokenizer.from_pretrained(model_path)
        tokens = tokenizer.convert_ids_to_tokens(list(range(tokenizer.vocab_size)))
        strings = []
        for token in tokens:
            # normalize byte-level markers so concatenation reproduces text
            try:
                strings.append(tokenizer.convert_tokens_to_string([token]))
            except Exception:
                strings.append(str(token))
        return strings, tokenizer.bos_token_id, tokenizer.eos_token_id

    def next_logits(self, context: list[int]) -> list[float]:
        """Raw final-layer scores for the next token after ``context``."""
        ids = torch.tensor([context], dtype=torch.long)
        with self._lock, torch.no_grad():
            logits = self.model(ids).logits[0, -1, :]
        return logits.float().tolist()
