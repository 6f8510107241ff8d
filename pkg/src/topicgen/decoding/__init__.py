from topicgen.decoding.generator import DecodeConfig, generate, simulate_document
from topicgen.decoding.mappings import entmax, softmax, sparsemax
from topicgen.decoding.pipeline import (
    apply_temperature_repetition,
    fuse_topic,
    nucleus_filter,
    top_k_filter,
)
from topicgen.decoding.trace import GenerationTrace, StepRecord, annotate_tokens

__all__ = [
    "DecodeConfig",
    "GenerationTrace",
    "StepRecord",
    "annotate_tokens",
    "apply_temperature_repetition",
    "entmax",
    "fuse_topic",
    "generate",
    "nucleus_filter",
    "simulate_document",
    "softmax",
    "sparsemax",
    "top_k_filter",
]
