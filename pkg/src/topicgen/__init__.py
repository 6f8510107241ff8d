"""Topic-steered text generation.

Fuses per-token topic priors (from LDA or LSI topic models) with causal
language-model logits at every decoding step, so that generation can be
pushed toward a chosen topic without retraining the language model.
"""

__version__ = "0.1.0"

from topicgen.errors import (
    DataError,
    RemoteError,
    RemoteProtocolError,
    RemoteTransportError,
    TopicgenError,
)

__all__ = [
    "DataError",
    "RemoteError",
    "RemoteProtocolError",
    "RemoteTransportError",
    "TopicgenError",
    "__version__",
]
