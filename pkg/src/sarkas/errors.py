"""Exception types shared across the toolkit."""


class SarkasError(Exception):
    """Base class for all toolkit errors."""


class DataFormatError(SarkasError):
    """A resource or corpus file failed to parse or validate.

    Carries enough context (file, line number, reason) to locate the
    offending row.
    """

    def __init__(self, reason, path=None, line=None):
        self.path = path
        self.line = line
        self.reason = reason
        loc = ""
        if path is not None:
            loc = f"{path}: "
        if line is not None:
            loc += f"line {line}: "
        super().__init__(loc + reason)


class TrainingError(SarkasError):
    """Training preconditions violated (empty data, single class, ...)."""


class ModelFormatError(SarkasError):
    """A persisted model or bundle is corrupt or has the wrong version."""
