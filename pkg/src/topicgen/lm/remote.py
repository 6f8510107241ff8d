"""Client for a remote logit provider speaking newline-delimited JSON.

Requests are {"cmd": "hello" | "vocab" | "logits", "context": [...]} and
replies are single-line JSON objects. Transport problems (dead process,
closed socket) raise RemoteTransportError; well-formed replies that
violate the contract (error field, wrong vector length, bad JSON) raise
RemoteProtocolError. One request is in flight per connection.
"""

from __future__ import annotations

import json
import shlex
import socket
import subprocess
import threading

import numpy as np

from topicgen.errors import RemoteProtocolError, RemoteTransportError
from topicgen.lm.sources import LogitVector


class RemoteSource:
    def __init__(self, reader, writer, *, describe: str, closer=None):
        self._reader = reader
        self._writer = writer
        self._describe = describe
        self._closer = closer
        self._lock = threading.Lock()
        hello = self.request({"cmd": "hello"})
        for key in ("name", "vocab_size", "bos_id", "eos_id"):
            if key not in hello:
                raise RemoteProtocolError(f"hello reply missing {key!r}: {hello}")
        self.name = str(hello["name"])
        self.vocab_size = int(hello["vocab_size"])
        self.bos_id = int(hello["bos_id"])
        self.eos_id = int(hello["eos_id"])
        self.max_context = None
        self._vocab = None

    @classmethod
    def from_command(cls, command) -> "RemoteSource":
        """Spawn a child process and talk to it over stdio."""
        argv = shlex.split(command) if isinstance(command, str) else list(command)
        try:
            proc = subprocess.Popen(
                argv, stdin=subprocess.PIPE, stdout=subprocess.PIPE, text=True
            )
        except OSError as exc:
            raise RemoteTransportError(f"cannot spawn {argv[0]!r}: {exc}") from exc

        def closer():
            proc.terminate()
            proc.wait(timeout=5)

        return cls(proc.stdout, proc.stdin, describe=f"command {argv[0]!r}", closer=closer)

    @classmethod
    def from_address(cls, host: str, port: int) -> "RemoteSource":
        """Connect over TCP."""
        try:
            sock = socket.create_connection((host, port), timeout=30)
        except OSError as exc:
            raise RemoteTransportError(f"cannot connect to {host}:{port}: {exc}") from exc
        reader = sock.makefile("r", encoding="utf-8")
        writer = sock.makefile("w", encoding="utf-8")

        def closer():
            reader.close()
            writer.close()
            sock.close()

        return cls(reader, writer, describe=f"tcp {host}:{port}", closer=closer)

    def request(self, message: dict) -> dict:
        with self._lock:
            try:
                self._writer.write(json.dumps(message) + "\n")
                self._writer.flush()
                line = self._reader.readline()
            except (OSError, ValueError) as exc:
                raise RemoteTransportError(f"{self._describe}: {exc}") from exc
        if not line:
            raise RemoteTransportError(f"{self._describe}: connection closed")
        try:
            reply = json.loads(line)
        except json.JSONDecodeError as exc:
            raise RemoteProtocolError(f"{self._describe}: reply is not JSON: {line!r}") from exc
        if not isinstance(reply, dict):
            raise RemoteProtocolError(f"{self._describe}: reply is not an object")
        if "error" in reply:
            raise RemoteProtocolError(f"{self._describe}: remote error: {reply['error']}")
        return reply

    def vocab(self) -> list[str]:
        if self._vocab is None:
            reply = self.request({"cmd": "vocab"})
            tokens = reply.get("tokens")
            if not isinstance(tokens, list) or len(tokens) != self.vocab_size:
                raise RemoteProtocolError(
                    f"vocab reply has {len(tokens) if isinstance(tokens, list) else 'no'} "
                    f"tokens, handshake promised {self.vocab_size}"
                )
            self._vocab = [str(t) for t in tokens]
        return self._vocab

    def logits(self, context) -> LogitVector:
        reply = self.request({"cmd": "logits", "context": [int(t) for t in context]})
        values = reply.get("logits")
        if not isinstance(values, list) or len(values) != self.vocab_size:
            raise RemoteProtocolError(
                f"logits reply has {len(values) if isinstance(values, list) else 'no'} "
                f"entries, vocabulary has {self.vocab_size}"
            )
        return LogitVector(scores=np.asarray(values, dtype=np.float64), source=self.name)

    def close(self) -> None:
        if self._closer is not None:
            self._closer()
            self._closer = None

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()
