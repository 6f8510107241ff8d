"""Desk-scale causal transformer forward pass in numpy.

Pre-layer-norm blocks: normalize, multi-head causal attention plus
residual, normalize, feed-forward plus residual. Output logits tie the
token-embedding matrix; there is deliberately no final normalization
layer after the last block. Weights are loaded or randomly initialized,
never trained here.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.special import erf

from topicgen.errors import DataError
from topicgen.lm.sources import LogitVector
from topicgen.rng import stream

_LN_EPS = 1e-5


@dataclass
class LayerWeights:
    w_q: np.ndarray  # (heads, d_model, d_head)
    w_k: np.ndarray
    w_v: np.ndarray
    w_out: np.ndarray  # (d_model, d_model)
    ln1_gain: np.ndarray
    ln1_bias: np.ndarray
    ln2_gain: np.ndarray
    ln2_bias: np.ndarray
    w_ff1: np.ndarray  # (d_model, d_ff)
    b_ff1: np.ndarray
    w_ff2: np.ndarray  # (d_ff, d_model)
    b_ff2: np.ndarray


@dataclass
class TransformerWeights:
    token_embedding: np.ndarray  # (vocab, d_model)
    position_embedding: np.ndarray  # (max_len, d_model)
    layers: list = field(default_factory=list)
    n_heads: int = 1

    @property
    def vocab_size(self) -> int:
        return self.token_embedding.shape[0]

    @property
    def d_model(self) -> int:
        return self.token_embedding.shape[1]

    @property
    def max_len(self) -> int:
        return self.position_embedding.shape[0]

    def validate(self) -> None:
        """Shape-check every matrix, naming the offender on failure."""
        d = self.d_model
        if self.position_embedding.shape[1] != d:
            raise DataError(
                f"position_embedding: expected (*, {d}), got {self.position_embedding.shape}"
            )
        if d % self.n_heads != 0:
            raise DataError(f"d_model={d} not divisible by n_heads={self.n_heads}")
        d_head = d // self.n_heads
        for i, layer in enumerate(self.layers):
            for name, want in (
                ("w_q", (self.n_heads, d, d_head)),
                ("w_k", (self.n_heads, d, d_head)),
                ("w_v", (self.n_heads, d, d_head)),
                ("w_out", (d, d)),
                ("ln1_gain", (d,)), ("ln1_bias", (d,)),
                ("ln2_gain", (d,)), ("ln2_bias", (d,)),
            ):
                got = getattr(layer, name).shape
                if got != want:
                    raise DataError(f"layer {i} {name}: expected {want}, got {got}")
            d_ff = layer.w_ff1.shape[1]
            for name, want in (
                ("w_ff1", (d, d_ff)), ("b_ff1", (d_ff,)),
                ("w_ff2", (d_ff, d)), ("b_ff2", (d,)),
            ):
                got = getattr(layer, name).shape
                if got != want:
                    raise DataError(f"layer {i} {name}: expected {want}, got {got}")


def attention(q: np.ndarray, k: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Causal attention: row-normalized lower-triangular exp(QK^T / sqrt(d)).

    The literal exponential overflows for large scores, so each row
    subtracts its within-mask maximum before exponentiation; the
    normalization D^-1 A is mathematically unchanged by the shift.
    """
    q = np.asarray(q, dtype=np.float64)
    k = np.asarray(k, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if q.ndim != 2 or k.ndim != 2 or v.ndim != 2:
        raise DataError("attention inputs must be 2-D")
    if q.shape != k.shape or q.shape[0] != v.shape[0]:
        raise DataError(
            f"attention shape mismatch: Q{q.shape} K{k.shape} V{v.shape}"
        )
    if not (np.all(np.isfinite(q)) and np.all(np.isfinite(k)) and np.all(np.isfinite(v))):
        raise DataError("attention inputs must be finite")

    length = q.shape[0]
    scores = (q @ k.T) / np.sqrt(q.shape[1])
    mask = np.tril(np.ones((length, length), dtype=bool))
    shifted = np.where(mask, scores, -np.inf)
    row_max = shifted.max(axis=1, keepdims=True)
    weights = np.exp(shifted - row_max)  # exact zeros above the diagonal
    denom = weights.sum(axis=1, keepdims=True)
    if not np.all(np.isfinite(denom)):
        raise DataError("attention produced non-finite weights")
    return (weights / denom) @ v


def _layer_norm(x: np.ndarray, gain: np.ndarray, bias: np.ndarray) -> np.ndarray:
    mean = x.mean(axis=-1, keepdims=True)
    var = x.var(axis=-1, keepdims=True)
    return (x - mean) / np.sqrt(var + _LN_EPS) * gain + bias


def _gelu(x: np.ndarray) -> np.ndarray:
    return 0.5 * x * (1.0 + erf(x / np.sqrt(2.0)))


def forward_hidden(weights: TransformerWeights, tokens) -> np.ndarray:
    """Hidden states after the final block, one row per position."""
    tokens = [int(t) for t in tokens]
    if not tokens:
        raise DataError("empty token sequence")
    if len(tokens) > weights.max_len:
        raise DataError(
            f"context length {len(tokens)} exceeds maximum {weights.max_len}"
        )
    if any(t < 0 or t >= weights.vocab_size for t in tokens):
        raise DataError("token id outside the embedding table")

    hidden = weights.token_embedding[tokens] + weights.position_embedding[: len(tokens)]
    for layer in weights.layers:
        normed = _layer_norm(hidden, layer.ln1_gain, layer.ln1_bias)
        heads = [
            attention(normed @ layer.w_q[h], normed @ layer.w_k[h], normed @ layer.w_v[h])
            for h in range(weights.n_heads)
        ]
        attended = np.concatenate(heads, axis=1) @ layer.w_out + hidden
        normed2 = _layer_norm(attended, layer.ln2_gain, layer.ln2_bias)
        hidden = _gelu(normed2 @ layer.w_ff1 + layer.b_ff1) @ layer.w_ff2 + layer.b_ff2 + attended
    return hidden


def forward_all(weights: TransformerWeights, tokens) -> np.ndarray:
    """Logits at every position (length x vocab), tied output projection."""
    return forward_hidden(weights, tokens) @ weights.token_embedding.T


def transformer_forward(weights: TransformerWeights, tokens) -> LogitVector:
    """Next-token logits after the last position."""
    return LogitVector(scores=forward_all(weights, tokens)[-1], source="transformer")


def random_weights(
    vocab_size: int,
    *,
    d_model: int = 32,
    n_layers: int = 2,
    n_heads: int = 2,
    d_ff: int = 64,
    max_len: int = 256,
    seed: int = 0,
    scale: float = 0.1,
) -> TransformerWeights:
    """Seeded random weights for demos and invariant checks."""
    if d_model % n_heads != 0:
        raise DataError(f"d_model={d_model} not divisible by n_heads={n_heads}")
    rng = stream(seed)
    d_head = d_model // n_heads

    def g(*shape):
        return rng.standard_normal(shape) * scale

    layers = [
        LayerWeights(
            w_q=g(n_heads, d_model, d_head),
            w_k=g(n_heads, d_model, d_head),
            w_v=g(n_heads, d_model, d_head),
            w_out=g(d_model, d_model),
            ln1_gain=np.ones(d_model), ln1_bias=np.zeros(d_model),
            ln2_gain=np.ones(d_model), ln2_bias=np.zeros(d_model),
            w_ff1=g(d_model, d_ff), b_ff1=np.zeros(d_ff),
            w_ff2=g(d_ff, d_model), b_ff2=np.zeros(d_model),
        )
        for _ in range(n_layers)
    ]
    weights = TransformerWeights(
        token_embedding=g(vocab_size, d_model),
        position_embedding=g(max_len, d_model),
        layers=layers,
        n_heads=n_heads,
    )
    weights.validate()
    return weights


_BLOB_FIELDS = (
    "w_q", "w_k", "w_v", "w_out",
    "ln1_gain", "ln1_bias", "ln2_gain", "ln2_bias",
    "w_ff1", "b_ff1", "w_ff2", "b_ff2",
)


def save_weights(weights: TransformerWeights, path) -> None:
    """JSON header plus little-endian float32 blobs in declared order."""
    weights.validate()
    layer0 = weights.layers[0] if weights.layers else None
    header = {
        "vocab_size": weights.vocab_size,
        "d_model": weights.d_model,
        "n_layers": len(weights.layers),
        "n_heads": weights.n_heads,
        "d_ff": int(layer0.w_ff1.shape[1]) if layer0 is not None else 0,
        "max_len": weights.max_len,
    }
    with Path(path).open("wb") as fh:
        fh.write((json.dumps(header) + "\n").encode("utf-8"))
        fh.write(np.ascontiguousarray(weights.token_embedding, dtype="<f4").tobytes())
        fh.write(np.ascontiguousarray(weights.position_embedding, dtype="<f4").tobytes())
        for layer in weights.layers:
            for name in _BLOB_FIELDS:
                fh.write(np.ascontiguousarray(getattr(layer, name), dtype="<f4").tobytes())


def load_weights(path) -> TransformerWeights:
    with Path(path).open("rb") as fh:
        header = json.loads(fh.readline().decode("utf-8"))
        vocab, d = header["vocab_size"], header["d_model"]
        heads, d_ff = header["n_heads"], header["d_ff"]
        d_head = d // heads

        def read(*shape):
            count = int(np.prod(shape))
            raw = fh.read(count * 4)
            if len(raw) != count * 4:
                raise DataError(f"{path}: truncated weight blob")
            return np.frombuffer(raw, dtype="<f4").astype(np.float64).reshape(shape)

        token_embedding = read(vocab, d)
        position_embedding = read(header["max_len"], d)
        layers = []
        for _ in range(header["n_layers"]):
            layers.append(LayerWeights(
                w_q=read(heads, d, d_head), w_k=read(heads, d, d_head),
                w_v=read(heads, d, d_head), w_out=read(d, d),
                ln1_gain=read(d), ln1_bias=read(d),
                ln2_gain=read(d), ln2_bias=read(d),
                w_ff1=read(d, d_ff), b_ff1=read(d_ff),
                w_ff2=read(d_ff, d), b_ff2=read(d),
            ))
    weights = TransformerWeights(
        token_embedding=token_embedding,
        position_embedding=position_embedding,
        layers=layers,
        n_heads=heads,
    )
    weights.validate()
    return weights


class TransformerSource:
    """Logit-source adapter over a weight set."""

    def __init__(self, weights: TransformerWeights, bos_id: int, eos_id: int):
        weights.validate()
        self.weights = weights
        self.vocab_size = weights.vocab_size
        self.bos_id = bos_id
        self.eos_id = eos_id
        self.max_context = weights.max_len

    def logits(self, context) -> LogitVector:
        return transformer_forward(self.weights, context)
