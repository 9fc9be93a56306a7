class GermenError(Exception):
    """Base class for package errors."""


class InputError(GermenError):
    """Bad user input: malformed corpus, unknown node, incompatible state."""


class InvariantError(GermenError):
    """An internal invariant was violated (a bug, never user error)."""


class UnknownNodeError(InputError, KeyError):
    def __str__(self) -> str:
        return f"unknown node {self.args[0]!r}"


class DuplicateNodeError(InputError):
    def __str__(self) -> str:
        return f"node {self.args[0]!r} already present"
