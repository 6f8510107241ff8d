"""Exception types shared across the package."""


class TopicgenError(Exception):
    """Base class for all package errors."""


class DataError(TopicgenError):
    """Invalid or inconsistent input data: corpora, vocabularies, shapes."""


class RemoteError(TopicgenError):
    """Base class for remote logit-provider failures."""


class RemoteTransportError(RemoteError):
    """The connection or child process feeding logits went away."""


class RemoteProtocolError(RemoteError):
    """The remote peer answered, but violated the wire contract."""
