# core/errors.py
"""
Exception hierarchy for gkatcheck.

Everything the engine raises on purpose derives from GkatError, so the CLI
can map a whole family onto one exit status.
"""

from typing import Optional


class GkatError(Exception):
    """Base class for all gkatcheck errors"""


class GkatSyntaxError(GkatError):
    """Program text does not match the grammar."""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.message = message
        self.line = line
        self.column = column
        if line is not None:
            message = f"{line}:{column}: {message}"
        super().__init__(message)


class ScopeError(GkatSyntaxError):
    """Undeclared symbol, or a symbol declared twice / as both test and action."""


class UniverseMismatch(GkatError):
    """Two objects that must share a universe do not."""


class AtomBlowup(GkatError):
    """Too many primitive tests for explicit atom enumeration."""

    def __init__(self, n_tests: int, cap: int):
        self.n_tests = n_tests
        self.cap = cap
        super().__init__(
            f"{n_tests} primitive tests exceed the atom cap of {cap} "
            f"(2^{n_tests} atoms)"
        )


class ResourceLimitExceeded(GkatError):
    """A configured ceiling (strings, states) was hit."""

    def __init__(self, what: str, limit: int):
        self.what = what
        self.limit = limit
        super().__init__(f"{what} exceeded the configured limit of {limit:,}")


class FunctionalityViolation(GkatError):
    """A GKAT program produced a non-functional relation under a functional interpretation."""


class InterpretationError(GkatError):
    """Interpretation is malformed or does not cover the program's symbols."""


class LawBindingError(GkatError):
    """Law instantiation with missing or wrongly kinded bindings."""


class AutomatonFormatError(GkatError):
    """Automaton JSON does not describe a valid automaton."""


class VerdictError(GkatError):
    """Operation not meaningful for the given verdict."""


class UsageError(GkatError):
    """Command-line misuse: unknown file kind, mismatched program kinds."""


class ConfigError(GkatError, ValueError):
    """A configuration value is out of range."""
