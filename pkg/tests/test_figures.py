"""Figure rendering smoke tests: files exist and are non-trivial PNGs."""

from topicgen.decoding import DecodeConfig, generate
from topicgen.metrics import BenchRow
from topicgen.reporting import (
    render_bench_figure,
    render_eval_figure,
    render_sweep_figure,
    render_trace_figures,
)
from topicgen.topics import topic_prior
from topicgen.topics.sweep import SweepRow


def is_png(path):
    return path.exists() and path.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


class TestTraceFigures:
    def test_entropy_and_surprise_files(self, desk_ngram, desk_lda, desk_prompt, tmp_path):
        prior = topic_prior(desk_lda, 0, bayes_inverted=True)
        trace = generate(desk_ngram, prior, DecodeConfig(gamma=5.0, seed=2, max_tokens=15),
                         desk_prompt)
        paths = render_trace_figures(trace, tmp_path / "trace")
        assert len(paths) == 2
        assert all(is_png(p) for p in paths)
        names = {p.name for p in paths}
        assert names == {"trace_entropy.png", "trace_surprise.png"}

    def test_long_trace_skips_token_ticks(self, desk_ngram, desk_prompt, tmp_path):
        trace = generate(desk_ngram, None, DecodeConfig(seed=3, max_tokens=80),
                         desk_prompt, stop_at_eos=False)
        paths = render_trace_figures(trace, tmp_path / "long")
        assert all(is_png(p) for p in paths)


class TestOtherFigures:
    def test_bench_figure(self, tmp_path):
        rows = [
            BenchRow(50, "base", 9000.0, 5), BenchRow(100, "base", 9100.0, 5),
            BenchRow(50, "topical", 8700.0, 5), BenchRow(100, "topical", 8800.0, 5),
        ]
        assert is_png(render_bench_figure(rows, tmp_path / "bench.png"))

    def test_eval_figure(self, tmp_path):
        report = {"coherence": 0.61, "dist1": 88.4, "dist2": 99.2, "dist3": 99.9,
                  "samples": 20}
        assert is_png(render_eval_figure(report, tmp_path / "eval.png"))

    def test_sweep_figure_ignores_failed_cells(self, tmp_path):
        rows = [
            SweepRow(20, 0.3, 5, coherence=0.62),
            SweepRow(20, 0.3, 500, error="boom"),
            SweepRow(50, 0.25, 10, coherence=0.64),
        ]
        assert is_png(render_sweep_figure(rows, tmp_path / "sweep.png"))
