"""Exception types shared across the pipeline."""


class PubPointsError(Exception):
    """Base class for data errors raised by the pipeline."""


class RegistryError(PubPointsError):
    pass


class CorpusParseError(PubPointsError):
    """Malformed DBLP input; ``offset`` is the byte position of the fault."""

    def __init__(self, message: str, offset: int | None = None):
        self.offset = offset
        if offset is not None:
            message = f"{message} (at byte {offset})"
        super().__init__(message)


class SnapshotError(PubPointsError):
    def __init__(self, message: str, line: int):
        self.line = line
        super().__init__(f"line {line}: {message}")


class RosterError(PubPointsError):
    pass


class PointsError(PubPointsError):
    """Reference area unusable, or a publication's area has no defined points."""
