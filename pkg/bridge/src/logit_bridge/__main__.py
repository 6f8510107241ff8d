"""Entry point: logit-bridge --model PATH [--transport stdio|tcp]."""

import argparse
import logging
import sys

from logit_bridge.host import HostModel
from logit_bridge.server import serve_stdio, serve_tcp


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="logit-bridge",
        description="Serve a causal LM's raw next-token logits over "
                    "newline-delimited JSON.",
    )
    parser.add_argument("--model", required=True,
                        help="Model directory or hub name loadable by transformers.")
    parser.add_argument("--transport", choices=["stdio", "tcp"], default="stdio")
    parser.add_argument("--host", default="127.0.0.1", help="TCP bind address.")
    parser.add_argument("--port", type=int, default=7521, help="TCP port (0 = ephemeral).")
    parser.add_argument("--max-context", type=int, default=None,
                        help="Cap on accepted context length (default: model limit).")
    args = parser.parse_args(argv)

    logging.basicConfig(stream=sys.stderr, level=logging.INFO,
                        format="logit-bridge: %(message)s")
    host = HostModel(args.model, max_context=args.max_context)
    if args.transport == "stdio":
        serve_stdio(host)
    else:
        serve_tcp(host, args.host, args.port)


if __name__ == "__main__":
    main()
