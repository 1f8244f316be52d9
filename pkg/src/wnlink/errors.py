"""Exception types shared across the package."""


class FormatError(ValueError):
    """A resource file does not follow its declared format."""

    def __init__(self, message, path=None, lineno=None):
        self.path = None if path is None else str(path)
        self.lineno = lineno
        where = ""
        if self.path is not None:
            where = self.path if lineno is None else f"{self.path}:{lineno}"
            where += ": "
        super().__init__(where + message)


class InvariantError(RuntimeError):
    """An internal consistency check failed."""
