"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class EnumRegError(Exception):
    """Base class for all errors raised by enumreg."""


class ContractViolation(EnumRegError):
    """A caller broke a documented precondition (e.g. stepping a finished machine)."""


class CapabilityError(EnumRegError):
    """The machine lacks an optional capability such as snapshot."""


class LoadError(EnumRegError):
    """A MiniRAM program is malformed."""

    def __init__(self, message: str, index: int | None = None):
        self.index = index
        if index is not None:
            message = f"instruction {index}: {message}"
        super().__init__(message)


class SpecError(EnumRegError):
    """Invalid fixture specification or configuration value."""


class BoundViolation(EnumRegError):
    """A delay / solution-count bound supplied by the caller turned out false."""

    def __init__(self, message: str, step: int | None = None, bound: str | None = None):
        self.step = step
        self.bound = bound
        super().__init__(message)


class IncrementalDelayViolation(BoundViolation):
    """Queue was empty at a scheduled pull: the machine is slower than p."""


class CoverageError(BoundViolation):
    """A solution fell outside every geometric zone, so it would be lost."""


class InvariantViolation(EnumRegError):
    """An internal invariant check failed (indicates a bug, not bad input)."""


class SoundnessError(EnumRegError):
    """The extension oracle answered yes on a subtree holding no solution."""


class ParseError(EnumRegError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class StateError(EnumRegError):
    """Operation not allowed in the object's current state."""
