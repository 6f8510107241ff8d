"""Generation traces: one record per decoding step, JSONL persistence."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path

from topicgen.errors import DataError


@dataclass
class StepRecord:
    """Diagnostics for one decoding step.

    Entropies are in nats. ``surprise`` is the KL divergence of the fused
    distribution from the base one; ``topic_logprob`` is the (possibly
    neutral-zero) log prior of the chosen token. ``top_candidates`` holds
    (token_id, token, probability) for the most likely tokens of the
    distribution that was actually sampled from.
    """

    index: int
    token_id: int
    token: str
    base_entropy: float
    fused_entropy: float
    surprise: float
    topic_logprob: float
    top_candidates: list = field(default_factory=list)
    drawn_topic: int | None = None


@dataclass
class GenerationTrace:
    """Everything needed to replay and analyze one generation stream."""

    header: dict
    steps: list = field(default_factory=list)
    token_ids: list = field(default_factory=list)
    stop_reason: str = "max_tokens"
    error: str | None = None

    def save(self, path) -> None:
        """Write JSONL: the header object first, then one object per step."""
        path = Path(path)
        with path.open("w", encoding="utf-8") as fh:
            header = dict(self.header)
            header["record"] = "header"
            header["stop_reason"] = self.stop_reason
            header["token_ids"] = list(self.token_ids)
            if self.error is not None:
                header["error"] = self.error
            fh.write(json.dumps(header) + "\n")
            for step in self.steps:
                fh.write(json.dumps(asdict(step)) + "\n")

    @classmethod
    def load(cls, path) -> "GenerationTrace":
        path = Path(path)
        with path.open("r", encoding="utf-8") as fh:
            lines = [json.loads(line) for line in fh if line.strip()]
        if not lines or lines[0].get("record") != "header":
            raise DataError(f"{path}: not a trace file (missing header object)")
        header = lines[0]
        steps = [StepRecord(**obj) for obj in lines[1:]]
        trace = cls(
            header={k: v for k, v in header.items() if k not in ("record", "stop_reason", "token_ids", "error")},
            steps=steps,
            token_ids=list(header.get("token_ids", [])),
            stop_reason=header.get("stop_reason", "max_tokens"),
            error=header.get("error"),
        )
        return trace


def annotate_tokens(steps) -> str:
    """Render steps as plain text with per-token topic scores.

    Each token becomes a bracketed token|score pair where the score is the
    exponentiated topic log-prior, so on-topic tokens carry values near
    their prior mass and neutral tokens show 1.0.
    """
    parts = []
    for step in steps:
        score = math.exp(step.topic_logprob)
        parts.append(f"⟦{step.token}|{score:.3f}⟧")
    return "".join(parts)
