"""Exception hierarchy shared by every module."""

from __future__ import annotations


class QCDesignError(ValueError):
    """Base class for all library errors."""


class InvalidDimensionError(QCDesignError):
    pass


class InvalidSelectionError(QCDesignError):
    pass


class InfeasibleError(QCDesignError):
    pass


class InvalidGeneratorError(QCDesignError):
    pass


class NotHalvableError(QCDesignError):
    pass


class NotGroupInvariantError(QCDesignError):
    pass


class OutOfRegimeError(QCDesignError):
    pass


class SearchSpaceTooLargeError(QCDesignError):
    pass


class ConsistencyError(RuntimeError):
    """An internal identity that must hold did not (e.g. design halves differ)."""


class DesignParseError(QCDesignError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)
