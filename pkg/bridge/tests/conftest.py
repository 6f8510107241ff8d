"""Fixtures: a tiny seeded causal LM persisted like any checkpoint.

The serving path (AutoModelForCausalLM.from_pretrained) is exactly the
one a real pretrained model takes; only the weights are locally seeded
because this environment has no access to a model hub.
"""

import json
import string

import pytest
import torch
from transformers import GPT2Config, GPT2LMHeadModel

VOCAB = ["<bos>", "<eos>"] + list(string.ascii_lowercase + " .,!?0123456789")


@pytest.fixture(scope="session")
def model_dir(tmp_path_factory):
    torch.manual_seed(1234)
    config = GPT2Config(
        vocab_size=len(VOCAB),
        n_positions=256,
        n_embd=32,
        n_layer=2,
        n_head=2,
        bos_token_id=0,
        eos_token_id=1,
    )
    model = GPT2LMHeadModel(config)
    path = tmp_path_factory.mktemp("model") / "tiny-causal-lm"
    model.save_pretrained(path)
    (path / "bridge_vocab.json").write_text(
        json.dumps({"tokens": VOCAB, "bos_id": 0, "eos_id": 1}), encoding="utf-8"
    )
    return path
