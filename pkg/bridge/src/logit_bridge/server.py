"""Protocol loop: newline-delimited JSON over stdio or TCP.

One request is in flight per connection; multiple TCP connections are
served by threads and share the (internally locked) model. Malformed
input gets ``{"error": "bad_request"}`` and the connection stays alive;
an oversized context gets ``{"error": "context_too_long"}``.
"""

from __future__ import annotations

import json
import logging
import socket
import sys
import threading

log = logging.getLogger(__name__)


def _handle_request(host, request) -> dict:
    if not isinstance(request, dict):
        return {"error": "bad_request"}
    cmd = request.get("cmd")
    if cmd == "hello":
        return {
            "name": host.name,
            "vocab_size": host.vocab_size,
            "bos_id": host.bos_id,
            "eos_id": host.eos_id,
        }
    if cmd == "vocab":
        return {"tokens": host.vocab}
    if cmd == "logits":
        context = request.get("context")
        if not isinstance(context, list) or not context:
            return {"error": "bad_request"}
        if not all(isinstance(t, int) and 0 <= t < host.vocab_size for t in context):
            return {"error": "invalid_token_id"}
        if len(context) > host.max_context:
            return {"error": "context_too_long"}
        return {"logits": host.next_logits(context)}
    return {"error": "bad_request"}


def serve_stream(host, rfile, wfile) -> None:
    """Answer requests line by line until the peer hangs up."""
    for line in rfile:
        line = line.strip()
        if not line:
            continue
        try:
            request = json.loads(line)
        except json.JSONDecodeError:
            reply = {"error": "bad_request"}
        else:
            reply = _handle_request(host, request)
        wfile.write(json.dumps(reply) + "\n")
        wfile.flush()


def serve_stdio(host) -> None:
    """Serve a spawning parent over stdin/stdout; logs go to stderr."""
    serve_stream(host, sys.stdin, sys.stdout)


def serve_tcp(host, bind: str, port: int) -> None:
    """Serve TCP clients forever, one thread per connection."""
    sock = socket.create_server((bind, port))
    actual_port = sock.getsockname()[1]
    log.info("listening on %s:%d", bind, actual_port)
    print(f"listening on {bind}:{actual_port}", file=sys.stderr, flush=True)

    def handle(conn):
        with conn:
            rfile = conn.makefile("r", encoding="utf-8")
            wfile = conn.makefile("w", encoding="utf-8")
            try:
                serve_stream(host, rfile, wfile)
            except (OSError, ValueError) as exc:
                log.info("connection dropped: %s", exc)

    while True:
        conn, peer = sock.accept()
        log.info("connection from %s", peer)
        threading.Thread(target=handle, args=(conn,), daemon=True).start()
