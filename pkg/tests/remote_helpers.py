"""Minimal protocol-conformant logit server used by the client tests.

Wraps any in-process logit source behind the newline-delimited JSON
protocol, over TCP (threaded) or a pair of file objects (stdio-style).
"""

import json
import socket
import threading


def handle_stream(source, rfile, wfile, max_context=512):
    """Answer hello/vocab/logits requests until EOF; stay alive on bad input."""
    vocab = getattr(source, "token_strings", None)
    if vocab is None:
        vocab = [str(i) for i in range(source.vocab_size)]
    for line in rfile:
        line = line.strip()
        if not line:
            continue
        try:
            request = json.loads(line)
            cmd = request["cmd"]
        except (json.JSONDecodeError, TypeError, KeyError):
            reply = {"error": "bad_request"}
        else:
            if cmd == "hello":
                reply = {
                    "name": "test-server",
                    "vocab_size": source.vocab_size,
                    "bos_id": source.bos_id,
                    "eos_id": source.eos_id,
                }
            elif cmd == "vocab":
                reply = {"tokens": vocab}
            elif cmd == "logits":
                context = request.get("context")
                if not isinstance(context, list) or not all(
                    isinstance(t, int) and 0 <= t < source.vocab_size for t in context
                ):
                    reply = {"error": "bad_request"}
                elif len(context) > max_context:
                    reply = {"error": "context_too_long"}
                else:
                    scores = source.logits(context).scores
                    reply = {"logits": [float(v) for v in scores]}
            else:
                reply = {"error": "bad_request"}
        wfile.write(json.dumps(reply) + "\n")
        wfile.flush()


class TcpProtocolServer:
    """Background TCP server for one or more client connections."""

    def __init__(self, source, max_context=512):
        self.source = source
        self.max_context = max_context
        self._sock = socket.create_server(("127.0.0.1", 0))
        self.port = self._sock.getsockname()[1]
        self._stop = threading.Event()
        self._thread = threading.Thread(target=self._serve, daemon=True)
        self._thread.start()

    def _serve(self):
        self._sock.settimeout(0.2)
        while not self._stop.is_set():
            try:
                conn, _ = self._sock.accept()
            except socket.timeout:
                continue
            threading.Thread(
                target=self._handle_conn, args=(conn,), daemon=True
            ).start()

    def _handle_conn(self, conn):
        with conn:
            rfile = conn.makefile("r", encoding="utf-8")
            wfile = conn.makefile("w", encoding="utf-8")
            try:
                handle_stream(self.source, rfile, wfile, self.max_context)
            except (OSError, ValueError):
                pass

    def close(self):
        self._stop.set()
        self._thread.join(timeout=2)
        self._sock.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()
