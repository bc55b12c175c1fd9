"""Exception types shared across the toolkit."""


class BusnetError(Exception):
    """Base class for every error raised by this package."""


class MissingFile(BusnetError):
    """A required input file or directory entry is absent."""


class MalformedRow(BusnetError):
    """A CSV row (or header) could not be interpreted.

    Carries the offending file and line number so batch ingestion
    failures are actionable.
    """

    def __init__(self, filename: str, line: int, message: str):
        super().__init__(f"{filename}:{line}: {message}")
        self.filename = filename
        self.line = line


class SchemaViolation(BusnetError):
    """A canonical snapshot document is structurally invalid or unusable."""


class IntegrityViolation(BusnetError):
    """A snapshot references an entity that does not exist."""


class InvalidThreshold(BusnetError):
    """A shared-stop threshold below 1 was requested."""


class MalformedNet(BusnetError):
    """A Pajek NET file violates the expected layout."""


class EmptyGraph(BusnetError):
    """A metric was requested on a graph with no nodes."""


class UnknownStop(BusnetError):
    """An exported value refers to a stop id absent from the feed."""


class UnknownRoute(BusnetError):
    """A selected route id is absent from the feed."""
