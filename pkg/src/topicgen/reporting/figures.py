"""Figure rendering for the report paths.

Every CSV/JSON report the CLI writes gets a PNG next to it: per-step
entropy and divergence curves for traces, decode-time curves for the
benchmark, score bars for evaluations and sweeps. Uses the Agg backend;
nothing here opens a window.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

_FIG_KW = {"figsize": (9.0, 4.2), "dpi": 150}
_MAX_TICK_STEPS = 60


def _token_axis(ax, steps):
    ax.set_xlabel("step")
    if 0 < len(steps) <= _MAX_TICK_STEPS:
        ax.set_xticks(range(len(steps)))
        ax.set_xticklabels(
            [s.token.strip() or repr(s.token) for s in steps],
            rotation=75, fontsize=6,
        )
        ax.set_xlabel("")


def render_trace_figures(trace, out_prefix) -> list:
    """Write <prefix>_entropy.png and <prefix>_surprise.png; return paths."""
    out_prefix = Path(out_prefix)
    steps = trace.steps
    xs = range(len(steps))
    paths = []

    fig, ax = plt.subplots(**_FIG_KW)
    ax.plot(xs, [s.base_entropy for s in steps], label="base", marker=".")
    ax.plot(xs, [s.fused_entropy for s in steps], label="fused", marker=".")
    ax.set_ylabel("entropy (nats)")
    ax.legend()
    ax.grid(alpha=0.3)
    _token_axis(ax, steps)
    fig.tight_layout()
    path = out_prefix.with_name(out_prefix.name + "_entropy.png")
    fig.savefig(path)
    plt.close(fig)
    paths.append(path)

    fig, ax = plt.subplots(**_FIG_KW)
    ax.plot(xs, [s.surprise for s in steps], color="firebrick", marker=".")
    ax.set_ylabel("divergence from base (nats)")
    ax.grid(alpha=0.3)
    _token_axis(ax, steps)
    fig.tight_layout()
    path = out_prefix.with_name(out_prefix.name + "_surprise.png")
    fig.savefig(path)
    plt.close(fig)
    paths.append(path)
    return paths


def render_bench_figure(rows, out_path) -> Path:
    """Decode time versus generated length, one line per configuration."""
    out_path = Path(out_path)
    by_config: dict[str, list] = {}
    for row in rows:
        by_config.setdefault(row.config, []).append(row)
    fig, ax = plt.subplots(**_FIG_KW)
    for label, config_rows in sorted(by_config.items()):
        config_rows.sort(key=lambda r: r.length)
        lengths = [r.length for r in config_rows]
        seconds = [r.length / r.tokens_per_sec for r in config_rows]
        ax.plot(lengths, seconds, marker="o", label=label)
    ax.set_xlabel("generated tokens")
    ax.set_ylabel("decode time (s)")
    ax.legend()
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)
    return out_path


def render_eval_figure(report: dict, out_path) -> Path:
    """Bar chart of the headline evaluation scores."""
    out_path = Path(out_path)
    fig, (left, right) = plt.subplots(1, 2, **_FIG_KW)
    left.bar(["coherence"], [report["coherence"]], color="steelblue")
    left.set_ylim(0, 1)
    left.grid(alpha=0.3, axis="y")
    labels = ["dist1", "dist2", "dist3"]
    right.bar(labels, [report[k] for k in labels], color="darkseagreen")
    right.set_ylim(0, 100)
    right.set_ylabel("%")
    right.grid(alpha=0.3, axis="y")
    fig.suptitle(f"{report.get('samples', '?')} samples")
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)
    return out_path


def render_sweep_figure(rows, out_path) -> Path:
    """Coherence per sweep cell, labeled min_doc/max_doc/K."""
    out_path = Path(out_path)
    scored = [r for r in rows if r.coherence is not None]
    fig, ax = plt.subplots(**_FIG_KW)
    labels = [f"{r.min_doc}/{r.max_doc}/K{r.n_topics}" for r in scored]
    ax.bar(range(len(scored)), [r.coherence for r in scored], color="slategray")
    ax.set_xticks(range(len(scored)))
    ax.set_xticklabels(labels, rotation=45, fontsize=7, ha="right")
    ax.set_ylabel("coherence")
    ax.grid(alpha=0.3, axis="y")
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)
    return out_path
