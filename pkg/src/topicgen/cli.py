"""Command-line interface: training, generation, simulation, evaluation.

Exit codes: 0 success, 2 usage error, 3 data error, 4 remote-provider
error. Every randomized command takes --seed or generates one and prints
it; every run emits a reproducibility header (seed, config digest, model
digests) on stderr so outputs can be regenerated bit-for-bit.
"""

from __future__ import annotations

import functools
import hashlib
import json
import secrets
import sys
import time
from dataclasses import asdict
from itertools import product
from pathlib import Path

import click
import numpy as np

import topicgen
from topicgen.bpe import BpeModel, train_bpe
from topicgen.corpus import build_corpus, load_texts, token_doc_matrix
from topicgen.data import desk_corpus
from topicgen.decoding import DecodeConfig, annotate_tokens, generate, simulate_document
from topicgen.errors import DataError, RemoteError, TopicgenError
from topicgen.lm import NgramModel, RemoteSource, TransformerSource, load_weights, train_ngram
from topicgen.metrics import (
    bench,
    coherence,
    dist_n,
    doc_similarity,
    load_word_vectors,
    save_word_vectors,
    train_word_vectors,
    write_bench_csv,
)
from topicgen.reporting import (
    render_bench_figure,
    render_eval_figure,
    render_sweep_figure,
    render_trace_figures,
)
from topicgen.topics import (
    infer_doc_topics,
    load_topic_model,
    save_topic_model,
    sweep,
    topic_prior,
    train_lda,
    train_lsi,
    write_sweep_csv,
)

EXIT_DATA_ERROR = 3
EXIT_REMOTE_ERROR = 4


def guarded(fn):
    """Map package exceptions onto the documented exit codes."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except RemoteError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_REMOTE_ERROR)
        except TopicgenError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_DATA_ERROR)

    return wrapper


def ensure_seed(seed: int | None) -> int:
    if seed is None:
        seed = secrets.randbits(32)
        click.echo(f"seed: {seed} (generated; pass --seed to reproduce)", err=True)
    return seed


def file_digest(path) -> str:
    h = hashlib.sha256()
    h.update(Path(path).read_bytes())
    return h.hexdigest()[:16]


def config_digest(payload) -> str:
    canon = json.dumps(payload, sort_keys=True, default=str)
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()[:16]


def emit_run_header(seed, config_payload, model_paths) -> dict:
    header = {
        "seed": seed,
        "config_digest": config_digest(config_payload),
        "model_digests": {
            name: file_digest(path) for name, path in model_paths.items() if path
        },
        "version": topicgen.__version__,
    }
    click.echo("run-header: " + json.dumps(header, sort_keys=True), err=True)
    return header


def read_corpus(spec: str) -> list[str]:
    """A path to a corpus file/directory, or the literal 'desk'."""
    if spec == "desk":
        return desk_corpus()
    return load_texts(spec)


def resolve_topic(selector: str, model, tokenizer) -> int:
    """Topic index, or a token string matched against each topic's top tokens."""
    try:
        index = int(selector)
    except ValueError:
        index = None
    if index is not None:
        if 0 <= index < model.n_topics:
            return index
    else:
        needle = selector.strip().lower()
        for topic in range(model.n_topics):
            tops = [tokenizer.vocab[i].strip().lower() for i in model.top_tokens(topic, 10)]
            if needle in tops:
                return topic
    listing = "; ".join(
        f"{k}: " + " ".join(tokenizer.vocab[i].strip() for i in model.top_tokens(k, 5))
        for k in range(model.n_topics)
    )
    raise DataError(f"unknown topic {selector!r}; available topics: {listing}")


def open_source(lm: str, model_path, tokenizer, remote_cmd, remote_addr):
    """Build the logit source; remote mode returns its own tokenizer."""
    if lm == "ngram":
        if not model_path:
            raise DataError("--model is required for the ngram source")
        return NgramModel.load(model_path), tokenizer
    if lm == "transformer":
        if not model_path:
            raise DataError("--model is required for the transformer source")
        if tokenizer is None:
            raise DataError("--bpe is required for the transformer source")
        weights = load_weights(model_path)
        return TransformerSource(weights, tokenizer.bos_id, tokenizer.eos_id), tokenizer
    if lm == "remote":
        if remote_cmd:
            source = RemoteSource.from_command(remote_cmd)
        elif remote_addr:
            host, _, port = remote_addr.rpartition(":")
            source = RemoteSource.from_address(host or "127.0.0.1", int(port))
        else:
            raise DataError(
                "remote source needs --remote-cmd or --remote-addr "
                "(or the TOPICGEN_REMOTE_ADDR environment variable)"
            )
        # the remote vocabulary is authoritative for ids and strings
        remote_tokenizer = BpeModel.from_vocab(
            source.vocab(), source.bos_id, source.eos_id
        )
        return source, remote_tokenizer
    raise DataError(f"unknown source kind {lm!r}")


def decode_options(fn):
    for option in reversed([
        click.option("--gamma", type=float, default=1.0, show_default=True,
                     help="Topic steering strength."),
        click.option("--threshold", type=float, default=None,
                     help="Logit gate: only scores above it receive the prior "
                          "(default: no gate)."),
        click.option("--alpha", type=float, default=1.0, show_default=True,
                     help="Output mapping: 1 softmax, 2 sparsemax, between entmax."),
        click.option("--temperature", type=float, default=1.0, show_default=True),
        click.option("--repetition-penalty", type=float, default=1.2, show_default=True),
        click.option("--top-p", type=float, default=0.9, show_default=True),
        click.option("--top-k", type=int, default=None, help="Keep only the k best tokens."),
        click.option("--max-tokens", type=int, default=50, show_default=True),
        click.option("--seed", type=int, default=None, help="RNG seed (generated if omitted)."),
        click.option("--invert-prior", is_flag=True,
                     help="Normalize the prior across topics per token."),
    ]):
        fn = option(fn)
    return fn


def build_config(gamma, threshold, alpha, temperature, repetition_penalty,
                 top_p, top_k, max_tokens, seed) -> DecodeConfig:
    return DecodeConfig(
        gamma=gamma,
        threshold=float("-inf") if threshold is None else threshold,
        alpha=alpha,
        temperature=temperature,
        repetition_penalty=repetition_penalty,
        top_p=top_p,
        top_k=top_k,
        max_tokens=max_tokens,
        seed=seed,
    )


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
              default=None, help="JSON file of default flag values per subcommand.")
@click.pass_context
def main(ctx, config_path):
    """Topic-steered text generation toolkit."""
    if config_path:
        ctx.default_map = json.loads(Path(config_path).read_text(encoding="utf-8"))


@main.group()
def train():
    """Train tokenizer, topic models, word vectors, or the n-gram LM."""


@train.command("bpe")
@click.option("--corpus", required=True, help="Corpus path, or 'desk' for the bundled corpus.")
@click.option("--vocab", type=int, default=2000, show_default=True)
@click.option("--jobs", type=int, default=1, show_default=True)
@click.option("--out", required=True, type=click.Path(writable=True))
@guarded
def train_bpe_cmd(corpus, vocab, jobs, out):
    """Learn a byte-pair vocabulary from raw text."""
    texts = read_corpus(corpus)
    model = train_bpe(texts, vocab_size=vocab, jobs=jobs)
    model.save(out)
    click.echo(f"vocabulary {model.vocab_size} tokens ({len(model.merges)} merges) -> {out}")


def _load_tokenizer(bpe_path, remote_cmd, remote_addr):
    if remote_cmd or remote_addr:
        source, tokenizer = open_source("remote", None, None, remote_cmd, remote_addr)
        source.close()
        return tokenizer
    if not bpe_path:
        raise DataError("need --bpe (or a remote vocabulary via --remote-cmd/--remote-addr)")
    return BpeModel.load(bpe_path)


def _topic_training_options(fn):
    for option in reversed([
        click.option("--corpus", required=True),
        click.option("--bpe", "bpe_path", type=click.Path(exists=True), default=None),
        click.option("--remote-cmd", default=None,
                     help="Adopt the vocabulary of this logit server command."),
        click.option("--remote-addr", envvar="TOPICGEN_REMOTE_ADDR", default=None),
        click.option("--min-doc", type=int, default=20, show_default=True,
                     help="Keep tokens in at least this many documents."),
        click.option("--max-doc", type=float, default=0.3, show_default=True,
                     help="Keep tokens in at most this many documents "
                          "(fraction if <= 1, else absolute)."),
        click.option("--seed", type=int, default=None),
        click.option("--out", required=True, type=click.Path(writable=True)),
    ]):
        fn = option(fn)
    return fn


def _resolve_max_doc_flag(max_doc: float):
    return max_doc if max_doc <= 1.0 else int(max_doc)


def _print_topics(model, tokenizer):
    for topic in range(model.n_topics):
        tokens = " ".join(
            tokenizer.vocab[i].strip() or repr(tokenizer.vocab[i])
            for i in model.top_tokens(topic, 10)
        )
        click.echo(f"topic {topic}: {tokens}")


@train.command("lda")
@_topic_training_options
@click.option("--topics", "n_topics", type=int, default=10, show_default=True)
@click.option("--alpha", type=float, default=0.1, show_default=True,
              help="Symmetric document-topic prior.")
@click.option("--batch", type=int, default=200, show_default=True)
@click.option("--iters", type=int, default=600, show_default=True)
@guarded
def train_lda_cmd(corpus, bpe_path, remote_cmd, remote_addr, min_doc, max_doc,
                  seed, out, n_topics, alpha, batch, iters):
    """Fit topics with online variational Bayes."""
    seed = ensure_seed(seed)
    tokenizer = _load_tokenizer(bpe_path, remote_cmd, remote_addr)
    texts = read_corpus(corpus)
    filtered = build_corpus(tokenizer, texts, min_doc, _resolve_max_doc_flag(max_doc))
    click.echo(f"kept vocabulary: {filtered.kept_vocab_size} tokens, "
               f"{filtered.n_docs} documents ({filtered.dropped_docs} dropped)", err=True)
    model = train_lda(filtered, n_topics, alpha=alpha, batch_size=batch,
                      max_iterations=iters, seed=seed)
    save_topic_model(model, out)
    _print_topics(model, tokenizer)
    emit_run_header(seed, {"cmd": "train-lda", "topics": n_topics, "alpha": alpha,
                           "min_doc": min_doc, "max_doc": max_doc}, {"model": out})


@train.command("lsi")
@_topic_training_options
@click.option("--topics", "n_topics", type=int, default=15, show_default=True)
@guarded
def train_lsi_cmd(corpus, bpe_path, remote_cmd, remote_addr, min_doc, max_doc,
                  seed, out, n_topics):
    """Factorize the token-document matrix with a seeded truncated SVD."""
    seed = ensure_seed(seed)
    tokenizer = _load_tokenizer(bpe_path, remote_cmd, remote_addr)
    texts = read_corpus(corpus)
    filtered = build_corpus(tokenizer, texts, min_doc, _resolve_max_doc_flag(max_doc))
    model = train_lsi(token_doc_matrix(filtered), n_topics,
                      vocab_mask=filtered.kept_mask, seed=seed)
    save_topic_model(model, out)
    _print_topics(model, tokenizer)
    emit_run_header(seed, {"cmd": "train-lsi", "topics": n_topics,
                           "min_doc": min_doc, "max_doc": max_doc}, {"model": out})


@train.command("vectors")
@_topic_training_options
@click.option("--dim", type=int, default=32, show_default=True)
@click.option("--window", type=int, default=5, show_default=True)
@guarded
def train_vectors_cmd(corpus, bpe_path, remote_cmd, remote_addr, min_doc, max_doc,
                      seed, out, dim, window):
    """Train PPMI-SVD word vectors for coherence and similarity scoring."""
    seed = ensure_seed(seed)
    tokenizer = _load_tokenizer(bpe_path, remote_cmd, remote_addr)
    texts = read_corpus(corpus)
    filtered = build_corpus(tokenizer, texts, min_doc, _resolve_max_doc_flag(max_doc))
    vectors = train_word_vectors(filtered.documents, tokenizer.vocab_size,
                                 dim=dim, window=window, seed=seed)
    save_word_vectors(vectors, out)
    click.echo(f"word vectors {vectors.vectors.shape} -> {out}")
    emit_run_header(seed, {"cmd": "train-vectors", "dim": dim, "window": window},
                    {"vectors": out})


@train.command("ngram")
@click.option("--corpus", required=True)
@click.option("--bpe", "bpe_path", type=click.Path(exists=True), required=True)
@click.option("--order", type=int, default=3, show_default=True)
@click.option("--discount", type=float, default=0.75, show_default=True)
@click.option("--out", required=True, type=click.Path(writable=True))
@guarded
def train_ngram_cmd(corpus, bpe_path, order, discount, out):
    """Train the Kneser-Ney n-gram language model."""
    tokenizer = BpeModel.load(bpe_path)
    texts = read_corpus(corpus)
    docs = [tokenizer.encode(t) for t in texts]
    model = train_ngram(docs, tokenizer.vocab_size, tokenizer.bos_id,
                        tokenizer.eos_id, order=order, discount=discount)
    model.save(out)
    click.echo(f"order-{order} model, {len(model.tables)} contexts -> {out}")


def _generation_setup(lm, model, bpe_path, remote_cmd, remote_addr,
                      topic_model_path, topic, epsilon, invert_prior):
    tokenizer = BpeModel.load(bpe_path) if bpe_path else None
    source, tokenizer = open_source(lm, model, tokenizer, remote_cmd, remote_addr)
    prior = None
    topic_model = None
    if topic_model_path:
        topic_model = load_topic_model(topic_model_path)
        if topic_model.vocab_size != source.vocab_size:
            raise DataError(
                f"topic model covers {topic_model.vocab_size} tokens but the "
                f"source vocabulary has {source.vocab_size}; retrain the topic "
                f"model on this vocabulary"
            )
        if topic is not None:
            index = resolve_topic(topic, topic_model, tokenizer)
            prior = topic_prior(topic_model, index, epsilon=epsilon,
                                bayes_inverted=invert_prior)
    return source, tokenizer, topic_model, prior


def _source_options(fn):
    for option in reversed([
        click.option("--lm", type=click.Choice(["ngram", "transformer", "remote"]),
                     default="ngram", show_default=True),
        click.option("--model", type=click.Path(exists=True), default=None,
                     help="LM model file (ngram/transformer sources)."),
        click.option("--bpe", "bpe_path", type=click.Path(exists=True), default=None),
        click.option("--remote-cmd", default=None),
        click.option("--remote-addr", envvar="TOPICGEN_REMOTE_ADDR", default=None),
    ]):
        fn = option(fn)
    return fn


@main.command("generate")
@_source_options
@click.option("--topic-model", "topic_model_path", type=click.Path(exists=True), default=None)
@click.option("--topic", default=None, help="Topic index or a top-token match.")
@click.option("--epsilon", type=float, default=1e-10, show_default=True)
@decode_options
@click.option("--prompt", default="the issue is", show_default=True)
@click.option("--trace-out", type=click.Path(writable=True), default=None)
@click.option("--annotate", is_flag=True, help="Wrap tokens with their topic scores.")
@click.option("--ignore-eos", is_flag=True,
              help="Keep decoding through end-of-sequence tokens.")
@click.option("--figures/--no-figures", default=True, show_default=True,
              help="Render trace figures next to --trace-out.")
@guarded
def cmd_generate(lm, model, bpe_path, remote_cmd, remote_addr, topic_model_path,
                 topic, epsilon, gamma, threshold, alpha, temperature,
                 repetition_penalty, top_p, top_k, max_tokens, seed, invert_prior,
                 prompt, trace_out, annotate, ignore_eos, figures):
    """Generate a continuation, optionally steered toward a topic."""
    seed = ensure_seed(seed)
    source, tokenizer, _, prior = _generation_setup(
        lm, model, bpe_path, remote_cmd, remote_addr,
        topic_model_path, topic, epsilon, invert_prior,
    )
    config = build_config(gamma, threshold, alpha, temperature,
                          repetition_penalty, top_p, top_k, max_tokens, seed)
    header = emit_run_header(seed, asdict(config), {
        "lm": model, "topic_model": topic_model_path, "bpe": bpe_path,
    })
    trace = generate(
        source, prior, config, tokenizer.encode(prompt),
        token_strings=tokenizer.vocab,
        meta={"prompt": prompt, "run": header},
        stop_at_eos=not ignore_eos,
    )
    if trace.error:
        click.echo(f"generation aborted: {trace.error}", err=True)
    click.echo(annotate_tokens(trace.steps) if annotate else tokenizer.decode(trace.token_ids))
    if trace_out:
        trace.save(trace_out)
        click.echo(f"trace -> {trace_out}", err=True)
        if figures:
            for path in render_trace_figures(trace, Path(trace_out).with_suffix("")):
                click.echo(f"figure -> {path}", err=True)
    if hasattr(source, "close"):
        source.close()


@main.command("simulate")
@_source_options
@click.option("--topic-model", "topic_model_path", type=click.Path(exists=True), required=True)
@click.option("--doc", "doc_path", type=click.Path(exists=True), required=True,
              help="Document whose topic mixture the output should follow.")
@click.option("--epsilon", type=float, default=1e-10, show_default=True)
@decode_options
@click.option("--prompt", default="the issue is", show_default=True)
@click.option("--trace-out", type=click.Path(writable=True), default=None)
@click.option("--ignore-eos", is_flag=True,
              help="Keep decoding through end-of-sequence tokens.")
@click.option("--figures/--no-figures", default=True, show_default=True)
@click.option("--vectors", "vectors_path", type=click.Path(exists=True), default=None,
              help="Word vectors for the similarity report.")
@guarded
def cmd_simulate(lm, model, bpe_path, remote_cmd, remote_addr, topic_model_path,
                 doc_path, epsilon, gamma, threshold, alpha, temperature,
                 repetition_penalty, top_p, top_k, max_tokens, seed, invert_prior,
                 prompt, trace_out, ignore_eos, figures, vectors_path):
    """Generate text following a document's inferred topic mixture."""
    seed = ensure_seed(seed)
    source, tokenizer, topic_model, _ = _generation_setup(
        lm, model, bpe_path, remote_cmd, remote_addr,
        topic_model_path, None, epsilon, invert_prior,
    )
    doc_text = Path(doc_path).read_text(encoding="utf-8")
    doc_ids = tokenizer.encode(doc_text)
    theta = infer_doc_topics(topic_model, doc_ids)
    click.echo("theta: " + " ".join(f"{v:.3f}" for v in theta), err=True)
    n_steps = max_tokens if max_tokens != 50 else len(doc_ids)
    config = build_config(gamma, threshold, alpha, temperature,
                          repetition_penalty, top_p, top_k, n_steps, seed)
    header = emit_run_header(seed, asdict(config), {
        "lm": model, "topic_model": topic_model_path, "doc": doc_path,
    })
    trace = simulate_document(
        source, topic_model, theta, config, tokenizer.encode(prompt),
        n_steps=n_steps, epsilon=epsilon, bayes_inverted=invert_prior,
        token_strings=tokenizer.vocab, meta={"prompt": prompt, "run": header},
        stop_at_eos=not ignore_eos,
    )
    click.echo(tokenizer.decode(trace.token_ids))
    if vectors_path:
        vectors = load_word_vectors(vectors_path)
        try:
            similarity = doc_similarity(trace.token_ids, doc_ids, vectors)
            click.echo(f"similarity to source document: {similarity:.4f}", err=True)
        except DataError as exc:
            click.echo(f"similarity unavailable: {exc}", err=True)
    if trace_out:
        trace.save(trace_out)
        click.echo(f"trace -> {trace_out}", err=True)
        if figures:
            for path in render_trace_figures(trace, Path(trace_out).with_suffix("")):
                click.echo(f"figure -> {path}", err=True)
    if hasattr(source, "close"):
        source.close()


@main.command("eval")
@_source_options
@click.option("--topic-model", "topic_model_path", type=click.Path(exists=True), default=None)
@click.option("--topic", default=None)
@click.option("--epsilon", type=float, default=1e-10, show_default=True)
@decode_options
@click.option("--prompt", default="the issue is", show_default=True)
@click.option("--samples", type=int, default=20, show_default=True)
@click.option("--vectors", "vectors_path", type=click.Path(exists=True), required=True)
@click.option("--out", "out_prefix", required=True,
              help="Output prefix; writes <prefix>.json, <prefix>.csv, <prefix>.png.")
@guarded
def cmd_eval(lm, model, bpe_path, remote_cmd, remote_addr, topic_model_path, topic,
             epsilon, gamma, threshold, alpha, temperature, repetition_penalty,
             top_p, top_k, max_tokens, seed, invert_prior, prompt, samples,
             vectors_path, out_prefix):
    """Sample repeatedly and report coherence, Dist-1/2/3 and speed."""
    seed = ensure_seed(seed)
    source, tokenizer, _, prior = _generation_setup(
        lm, model, bpe_path, remote_cmd, remote_addr,
        topic_model_path, topic, epsilon, invert_prior,
    )
    vectors = load_word_vectors(vectors_path)
    prompt_ids = tokenizer.encode(prompt)
    runs = []
    started = time.perf_counter()
    total_tokens = 0
    for i in range(samples):
        config = build_config(gamma, threshold, alpha, temperature,
                              repetition_penalty, top_p, top_k, max_tokens, seed + i)
        trace = generate(source, prior, config, prompt_ids,
                         collect_details=False, stop_at_eos=False)
        runs.append(trace.token_ids)
        total_tokens += len(trace.token_ids)
    elapsed = time.perf_counter() - started

    scores = []
    for ids in runs:
        try:
            scores.append(coherence(ids, vectors))
        except DataError:
            pass
    report = {
        "coherence": float(np.mean(scores)) if scores else float("nan"),
        "dist1": dist_n(runs, 1),
        "dist2": dist_n(runs, 2),
        "dist3": dist_n(runs, 3),
        "tokens_per_second": total_tokens / elapsed,
        "samples": samples,
        "scored_samples": len(scores),
    }
    emit_run_header(seed, report | {"gamma": gamma}, {
        "lm": model, "topic_model": topic_model_path, "vectors": vectors_path,
    })
    json_path = Path(f"{out_prefix}.json")
    json_path.write_text(json.dumps(report, indent=2), encoding="utf-8")
    csv_path = Path(f"{out_prefix}.csv")
    keys = ["coherence", "dist1", "dist2", "dist3", "tokens_per_second", "samples"]
    csv_path.write_text(
        ",".join(keys) + "\n" + ",".join(str(report[k]) for k in keys) + "\n",
        encoding="utf-8",
    )
    figure = render_eval_figure(report, Path(f"{out_prefix}.png"))
    click.echo(json.dumps(report, indent=2))
    click.echo(f"report -> {json_path}, {csv_path}, {figure}", err=True)
    if hasattr(source, "close"):
        source.close()


@main.command("sweep")
@click.option("--corpus", required=True)
@click.option("--bpe", "bpe_path", type=click.Path(exists=True), required=True)
@click.option("--kind", type=click.Choice(["lda", "lsi"]), default="lda", show_default=True)
@click.option("--min-doc", "min_docs", type=int, multiple=True, required=True)
@click.option("--max-doc", "max_docs", type=float, multiple=True, required=True)
@click.option("--topics", "topic_counts", type=int, multiple=True, required=True)
@click.option("--dim", type=int, default=32, show_default=True,
              help="Word-vector dimension for coherence scoring.")
@click.option("--seed", type=int, default=None)
@click.option("--jobs", type=int, default=1, show_default=True)
@click.option("--out", required=True, type=click.Path(writable=True))
@click.option("--figures/--no-figures", default=True, show_default=True)
@guarded
def cmd_sweep(corpus, bpe_path, kind, min_docs, max_docs, topic_counts, dim,
              seed, jobs, out, figures):
    """Grid-search corpus filters and topic counts by coherence."""
    seed = ensure_seed(seed)
    tokenizer = BpeModel.load(bpe_path)
    texts = read_corpus(corpus)
    documents = [tokenizer.encode(t) for t in texts]
    vectors = train_word_vectors(documents, tokenizer.vocab_size, dim=dim, seed=seed)
    grid = [
        (m, _resolve_max_doc_flag(x), k)
        for m, x, k in product(min_docs, max_docs, topic_counts)
    ]
    rows = sweep(documents, tokenizer.vocab_size, grid, kind, vectors,
                 seed=seed, jobs=jobs)
    write_sweep_csv(rows, out)
    failures = [r for r in rows if r.error is not None]
    for row in rows:
        if row.error is None:
            click.echo(f"min_doc={row.min_doc} max_doc={row.max_doc} "
                       f"K={row.n_topics} coherence={row.coherence:.5f}")
    for row in failures:
        click.echo(f"cell (min_doc={row.min_doc}, max_doc={row.max_doc}, "
                   f"K={row.n_topics}) failed: {row.error}", err=True)
    if figures:
        click.echo(f"figure -> {render_sweep_figure(rows, Path(out).with_suffix('.png'))}",
                   err=True)
    emit_run_header(seed, {"cmd": "sweep", "kind": kind, "grid": grid}, {"bpe": bpe_path})
    if len(failures) == len(rows):
        raise DataError("every sweep cell failed")


@main.command("bench")
@_source_options
@click.option("--topic-model", "topic_model_path", type=click.Path(exists=True), default=None)
@click.option("--topic", default="0", show_default=True)
@click.option("--gamma", type=float, default=5.0, show_default=True)
@click.option("--invert-prior", is_flag=True)
@click.option("--lengths", default="50,100,200,400", show_default=True)
@click.option("--repeats", type=int, default=5, show_default=True)
@click.option("--seed", type=int, default=None)
@click.option("--prompt", default="the issue is", show_default=True)
@click.option("--out", required=True, type=click.Path(writable=True))
@click.option("--figures/--no-figures", default=True, show_default=True)
@guarded
def cmd_bench(lm, model, bpe_path, remote_cmd, remote_addr, topic_model_path,
              topic, gamma, invert_prior, lengths, repeats, seed, prompt, out, figures):
    """Measure decode speed with and without topic fusion."""
    seed = ensure_seed(seed)
    source, tokenizer, _, prior = _generation_setup(
        lm, model, bpe_path, remote_cmd, remote_addr,
        topic_model_path, topic if topic_model_path else None, 1e-10, invert_prior,
    )
    length_list = sorted(int(x) for x in lengths.split(","))
    configs = {"base": (None, DecodeConfig(gamma=0.0, seed=seed))}
    if prior is not None:
        configs["topical"] = (prior, DecodeConfig(gamma=gamma, seed=seed))
    rows = bench(source, configs, length_list,
                 prompt_ids=tokenizer.encode(prompt), repeats=repeats)
    write_bench_csv(rows, out)
    for row in rows:
        click.echo(f"{row.length:6d} {row.config:>6}: {row.tokens_per_sec:10.1f} tokens/s")
    if figures:
        click.echo(f"figure -> {render_bench_figure(rows, Path(out).with_suffix('.png'))}",
                   err=True)
    emit_run_header(seed, {"cmd": "bench", "lengths": length_list, "gamma": gamma},
                    {"lm": model, "topic_model": topic_model_path})
    if hasattr(source, "close"):
        source.close()


if __name__ == "__main__":
    main()
