"""End-to-end CLI runs over a small corpus in a temp directory."""

import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from topicgen.cli import main
from topicgen.data import desk_corpus


@pytest.fixture(scope="module")
def workdir(tmp_path_factory):
    """Corpus file plus trained bpe/lda/ngram/vectors artifacts."""
    root = tmp_path_factory.mktemp("cli")
    corpus = root / "corpus.txt"
    corpus.write_text("\n".join(desk_corpus(250)), encoding="utf-8")
    runner = CliRunner()

    def run(*args):
        result = runner.invoke(main, [str(a) for a in args], catch_exceptions=False)
        assert result.exit_code == 0, result.output
        return result

    run("train", "bpe", "--corpus", corpus, "--vocab", 320, "--out", root / "bpe.json")
    run("train", "lda", "--corpus", corpus, "--bpe", root / "bpe.json",
        "--topics", 5, "--min-doc", 10, "--max-doc", 0.4, "--seed", 0,
        "--out", root / "lda.bin")
    run("train", "lsi", "--corpus", corpus, "--bpe", root / "bpe.json",
        "--topics", 5, "--min-doc", 10, "--max-doc", 0.4, "--seed", 0,
        "--out", root / "lsi.bin")
    run("train", "ngram", "--corpus", corpus, "--bpe", root / "bpe.json",
        "--out", root / "ngram.json")
    run("train", "vectors", "--corpus", corpus, "--bpe", root / "bpe.json",
        "--min-doc", 10, "--max-doc", 0.4, "--seed", 0, "--out", root / "vectors.bin")
    return root, corpus


def invoke(*args):
    return CliRunner(mix_stderr=False).invoke(main, [str(a) for a in args]) \
        if hasattr(CliRunner, "mix_stderr") else \
        CliRunner().invoke(main, [str(a) for a in args])


class TestTrain:
    def test_topic_training_prints_top_tokens(self, workdir):
        root, corpus = workdir
        result = invoke("train", "lda", "--corpus", corpus, "--bpe", root / "bpe.json",
                        "--topics", 4, "--min-doc", 10, "--max-doc", 0.4,
                        "--seed", 1, "--out", root / "lda2.bin")
        assert result.exit_code == 0
        assert result.output.count("topic ") >= 4

    def test_missing_corpus_is_data_error(self, workdir):
        root, _ = workdir
        result = invoke("train", "bpe", "--corpus", "/nonexistent/corpus.txt",
                        "--out", root / "x.json")
        assert result.exit_code == 3

    def test_usage_error_is_exit_two(self):
        result = invoke("train", "bpe")  # missing required flags
        assert result.exit_code == 2

    def test_remote_failure_is_exit_four(self, workdir):
        root, _ = workdir
        result = invoke("generate", "--lm", "remote",
                        "--remote-addr", "127.0.0.1:1", "--seed", 0)
        assert result.exit_code == 4


class TestGenerate:
    def test_topical_generation_writes_trace_and_figures(self, workdir):
        root, _ = workdir
        trace_path = root / "trace.jsonl"
        result = invoke(
            "generate", "--lm", "ngram", "--model", root / "ngram.json",
            "--bpe", root / "bpe.json", "--topic-model", root / "lda.bin",
            "--topic", "0", "--gamma", 5, "--invert-prior",
            "--seed", 3, "--max-tokens", 25, "--trace-out", trace_path,
        )
        assert result.exit_code == 0, result.output
        assert trace_path.exists()
        lines = trace_path.read_text().strip().splitlines()
        header = json.loads(lines[0])
        assert header["record"] == "header"
        assert header["run"]["model_digests"]
        assert (root / "trace_entropy.png").exists()
        assert (root / "trace_surprise.png").exists()

    def test_seed_reproducibility(self, workdir):
        root, _ = workdir
        args = ["generate", "--lm", "ngram", "--model", root / "ngram.json",
                "--bpe", root / "bpe.json", "--seed", 9, "--max-tokens", 20]
        a, b = invoke(*args), invoke(*args)
        assert a.output == b.output

    def test_generated_seed_is_printed(self, workdir):
        root, _ = workdir
        result = invoke("generate", "--lm", "ngram", "--model", root / "ngram.json",
                        "--bpe", root / "bpe.json", "--max-tokens", 5)
        assert result.exit_code == 0
        assert "seed:" in result.output

    def test_annotate_wraps_tokens(self, workdir):
        root, _ = workdir
        result = invoke("generate", "--lm", "ngram", "--model", root / "ngram.json",
                        "--bpe", root / "bpe.json", "--topic-model", root / "lda.bin",
                        "--topic", "1", "--seed", 2, "--max-tokens", 10, "--annotate",
                        "--no-figures")
        assert result.exit_code == 0
        assert "⟦" in result.output and "|" in result.output

    def test_unknown_topic_lists_available(self, workdir):
        root, _ = workdir
        result = invoke("generate", "--lm", "ngram", "--model", root / "ngram.json",
                        "--bpe", root / "bpe.json", "--topic-model", root / "lda.bin",
                        "--topic", "zebrasaurus", "--seed", 1)
        assert result.exit_code == 3
        assert "available topics" in result.output

    def test_lsi_prior_generation(self, workdir):
        root, _ = workdir
        result = invoke("generate", "--lm", "ngram", "--model", root / "ngram.json",
                        "--bpe", root / "bpe.json", "--topic-model", root / "lsi.bin",
                        "--topic", "1", "--gamma", 2, "--seed", 5, "--max-tokens", 15,
                        "--no-figures")
        assert result.exit_code == 0, result.output

    def test_gamma_zero_matches_no_topic(self, workdir):
        root, _ = workdir
        base = invoke("generate", "--lm", "ngram", "--model", root / "ngram.json",
                      "--bpe", root / "bpe.json", "--seed", 11, "--max-tokens", 20)
        fused = invoke("generate", "--lm", "ngram", "--model", root / "ngram.json",
                       "--bpe", root / "bpe.json", "--topic-model", root / "lda.bin",
                       "--topic", "0", "--gamma", 0, "--seed", 11, "--max-tokens", 20)
        base_text = base.output.strip().splitlines()[-1]
        fused_text = fused.output.strip().splitlines()[-1]
        assert base_text == fused_text


class TestSimulate:
    def test_simulate_runs_and_reports_theta(self, workdir, tmp_path):
        root, corpus = workdir
        doc = tmp_path / "doc.txt"
        doc.write_text(desk_corpus(30, seed=77)[0], encoding="utf-8")
        result = invoke("simulate", "--lm", "ngram", "--model", root / "ngram.json",
                        "--bpe", root / "bpe.json", "--topic-model", root / "lda.bin",
                        "--doc", doc, "--gamma", 5, "--invert-prior",
                        "--seed", 6, "--vectors", root / "vectors.bin", "--no-figures")
        assert result.exit_code == 0, result.output
        assert "theta:" in result.output


class TestReports:
    def test_eval_writes_json_csv_png(self, workdir):
        root, _ = workdir
        result = invoke("eval", "--lm", "ngram", "--model", root / "ngram.json",
                        "--bpe", root / "bpe.json", "--topic-model", root / "lda.bin",
                        "--topic", "2", "--gamma", 5, "--invert-prior",
                        "--samples", 4, "--max-tokens", 20, "--seed", 0,
                        "--vectors", root / "vectors.bin", "--out", root / "eval")
        assert result.exit_code == 0, result.output
        report = json.loads((root / "eval.json").read_text())
        assert set(report) >= {"coherence", "dist1", "dist2", "dist3",
                               "tokens_per_second", "samples"}
        assert 0 <= report["dist1"] <= 100
        assert (root / "eval.csv").exists()
        assert (root / "eval.png").exists()

    def test_sweep_csv_shape(self, workdir):
        root, corpus = workdir
        result = invoke("sweep", "--corpus", corpus, "--bpe", root / "bpe.json",
                        "--kind", "lda", "--min-doc", 10, "--max-doc", 0.4,
                        "--topics", 4, "--topics", 6, "--seed", 0,
                        "--out", root / "sweep.csv", "--no-figures")
        assert result.exit_code == 0, result.output
        lines = (root / "sweep.csv").read_text().strip().splitlines()
        assert lines[0] == "min_doc,max_doc,K,coherence"
        assert len(lines) == 3

    def test_sweep_partial_failure_still_succeeds(self, workdir):
        root, corpus = workdir
        result = invoke("sweep", "--corpus", corpus, "--bpe", root / "bpe.json",
                        "--kind", "lda", "--min-doc", 10, "--max-doc", 0.4,
                        "--topics", 4, "--topics", 5000, "--seed", 0,
                        "--out", root / "sweep2.csv", "--no-figures")
        assert result.exit_code == 0, result.output
        assert "failed" in result.output

    def test_bench_csv_and_figure(self, workdir):
        root, _ = workdir
        result = invoke("bench", "--lm", "ngram", "--model", root / "ngram.json",
                        "--bpe", root / "bpe.json", "--topic-model", root / "lda.bin",
                        "--topic", "0", "--lengths", "10,20", "--repeats", 2,
                        "--seed", 0, "--out", root / "bench.csv")
        assert result.exit_code == 0, result.output
        lines = (root / "bench.csv").read_text().strip().splitlines()
        assert lines[0] == "length,config,tokens_per_sec"
        assert len(lines) == 5  # base+steered at two lengths
        assert (root / "bench.png").exists()


class TestHelp:
    @pytest.mark.parametrize("args", [
        ["generate"], ["simulate"], ["eval"], ["sweep"], ["bench"],
        ["train", "bpe"], ["train", "lda"], ["train", "lsi"],
        ["train", "vectors"], ["train", "ngram"],
    ])
    def test_help_documents_flags_with_defaults(self, args):
        result = invoke(*args, "--help")
        assert result.exit_code == 0
        assert "--help" in result.output

    def test_generate_help_shows_defaults(self):
        result = invoke("generate", "--help")
        assert "default" in result.output.lower()
        for flag in ("--gamma", "--temperature", "--top-p", "--seed",
                     "--repetition-penalty", "--max-tokens", "--trace-out"):
            assert flag in result.output


class TestConfigFile:
    def test_config_file_supplies_defaults(self, workdir, tmp_path):
        root, _ = workdir
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({
            "generate": {
                "lm": "ngram",
                "model": str(root / "ngram.json"),
                "bpe_path": str(root / "bpe.json"),
                "seed": 4,
                "max_tokens": 8,
            }
        }))
        result = invoke("--config", cfg, "generate")
        assert result.exit_code == 0, result.output
