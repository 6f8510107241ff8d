"""Wire-protocol server exposing a pretrained causal LM's logits."""

from logit_bridge.host import HostModel
from logit_bridge.server import serve_stdio, serve_tcp

__version__ = "0.1.0"

__all__ = ["HostModel", "serve_stdio", "serve_tcp", "__version__"]
