"""
Exception hierarchy shared by the engine services and the CLI.
"""


class GroupInputError(ValueError):
    """Malformed group, matrix group or construction input."""

    def __init__(self, message: str, field: str = None):
        self.field = field
        if field:
            message = f"{field}: {message}"
        super().__init__(message)


class CoprimalityError(GroupInputError):
    """The characteristic divides the order of a matrix group."""


class ResourceCapError(RuntimeError):
    """A configured enumeration cap would be exceeded."""


class TableConsistencyError(RuntimeError):
    """A character table failed an internal consistency check."""


class VerificationFailure(AssertionError):
    """A proved statement failed on a concrete input."""
