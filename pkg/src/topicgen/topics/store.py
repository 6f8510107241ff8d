"""Topic-model persistence: one JSON header line, then raw float32 blobs.

The header records kind, dimensions and blob order; matrices follow as
little-endian 32-bit floats (the vocabulary mask as uint8) in the
declared order.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from topicgen.errors import DataError
from topicgen.topics.lda import LdaModel
from topicgen.topics.lsi import LsiModel

_DTYPES = {"float32": "<f4", "uint8": "u1"}


def _blob(arr: np.ndarray, dtype: str) -> bytes:
    return np.ascontiguousarray(arr).astype(_DTYPES[dtype]).tobytes()


def save_topic_model(model, path) -> None:
    path = Path(path)
    if isinstance(model, LdaModel):
        header = {
            "kind": "lda",
            "k": model.n_topics,
            "vocab_size": model.vocab_size,
            "alpha": model.alpha,
            "eta": model.eta,
            "n_iterations": model.n_iterations,
            "converged": model.converged,
            "blobs": [
                ["topic_token", [model.n_topics, model.vocab_size], "float32"],
                ["vocab_mask", [model.vocab_size], "uint8"],
            ],
        }
        blobs = [
            _blob(model.topic_token, "float32"),
            _blob(model.vocab_mask.astype(np.uint8), "uint8"),
        ]
    elif isinstance(model, LsiModel):
        header = {
            "kind": "lsi",
            "k": model.n_topics,
            "vocab_size": model.vocab_size,
            "sigma": [float(s) for s in model.sigma],
            "blobs": [
                ["u", [model.vocab_size, model.n_topics], "float32"],
                ["vocab_mask", [model.vocab_size], "uint8"],
            ],
        }
        blobs = [
            _blob(model.u, "float32"),
            _blob(model.vocab_mask.astype(np.uint8), "uint8"),
        ]
    else:
        raise DataError(f"cannot persist model of type {type(model).__name__}")

    with path.open("wb") as fh:
        fh.write((json.dumps(header) + "\n").encode("utf-8"))
        for blob in blobs:
            fh.write(blob)


def load_topic_model(path):
    path = Path(path)
    with path.open("rb") as fh:
        header = json.loads(fh.readline().decode("utf-8"))
        arrays = {}
        for name, shape, dtype in header["blobs"]:
            count = int(np.prod(shape))
            raw = fh.read(count * np.dtype(_DTYPES[dtype]).itemsize)
            if len(raw) != count * np.dtype(_DTYPES[dtype]).itemsize:
                raise DataError(f"{path}: truncated blob {name!r}")
            arrays[name] = np.frombuffer(raw, dtype=_DTYPES[dtype]).reshape(shape).copy()

    kind = header.get("kind")
    if kind == "lda":
        topic_token = arrays["topic_token"].astype(np.float64)
        # float32 round-trip breaks exact row sums; restore stochasticity
        sums = topic_token.sum(axis=1, keepdims=True)
        topic_token = np.divide(topic_token, sums, out=topic_token, where=sums > 0)
        return LdaModel(
            topic_token=topic_token,
            alpha=float(header["alpha"]),
            eta=float(header["eta"]),
            vocab_mask=arrays["vocab_mask"].astype(bool),
            n_iterations=int(header.get("n_iterations", 0)),
            converged=bool(header.get("converged", False)),
        )
    if kind == "lsi":
        return LsiModel(
            u=arrays["u"].astype(np.float64),
            sigma=np.asarray(header["sigma"], dtype=np.float64),
            vocab_mask=arrays["vocab_mask"].astype(bool),
        )
    raise DataError(f"{path}: unknown topic model kind {kind!r}")
