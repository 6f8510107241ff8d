from topicgen.lm.ngram import NgramModel, train_ngram
from topicgen.lm.remote import RemoteSource
from topicgen.lm.sources import LogitVector, next_logits
from topicgen.lm.transformer import (
    TransformerSource,
    TransformerWeights,
    attention,
    load_weights,
    random_weights,
    save_weights,
    transformer_forward,
)

__all__ = [
    "LogitVector",
    "NgramModel",
    "RemoteSource",
    "TransformerSource",
    "TransformerWeights",
    "attention",
    "load_weights",
    "next_logits",
    "random_weights",
    "save_weights",
    "train_ngram",
    "transformer_forward",
]
