"""Decoding-speed benchmark: tokens per second by requested length.

Runs each configuration at each length with identical seeds so the only
difference between arms is the decoding configuration itself. Per-step
diagnostics are disabled in every arm; the measurement is the decode
loop, not the trace bookkeeping.
"""

from __future__ import annotations

import csv
import statistics
import time
from dataclasses import dataclass
from pathlib import Path


@dataclass
class BenchRow:
    length: int
    config: str
    tokens_per_sec: float
    runs: int


def bench(
    source,
    configs: dict,
    lengths,
    *,
    prompt_ids,
    repeats: int = 5,
    warmup: int = 1,
) -> list[BenchRow]:
    """Median decode speed for each (length, config) cell.

    ``configs`` maps a label to (prior_or_None, DecodeConfig); the config's
    max_tokens is overridden by each requested length. EOS stopping is
    disabled so every run decodes exactly ``length`` tokens.
    """
    from topicgen.decoding.generator import DecodeConfig, generate

    lengths = list(lengths)
    if lengths != sorted(lengths):
        raise ValueError("lengths must be ascending")
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    rows = []
    for length in lengths:
        for label, (prior, config) in configs.items():
            run_cfg = DecodeConfig(**{**config.__dict__, "max_tokens": length})
            for _ in range(warmup):
                generate(source, prior, run_cfg, prompt_ids,
                         collect_details=False, stop_at_eos=False)
            times = []
            for _ in range(repeats):
                start = time.perf_counter()
                trace = generate(source, prior, run_cfg, prompt_ids,
                                 collect_details=False, stop_at_eos=False)
                elapsed = time.perf_counter() - start
                times.append(len(trace.token_ids) / elapsed)
            rows.append(BenchRow(
                length=length,
                config=label,
                tokens_per_sec=statistics.median(times),
                runs=repeats,
            ))
    return rows


def write_bench_csv(rows, path) -> None:
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["length", "config", "tokens_per_sec"])
        for row in rows:
            writer.writerow([row.length, row.config, f"{row.tokens_per_sec:.3f}"])
