"""Exception types shared across the package."""

from __future__ import annotations


class DigitSeriesError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(DigitSeriesError, ValueError):
    """Malformed expression text; ``position`` is a 0-based character offset."""

    def __init__(self, message: str, position: int, text: str = ""):
        self.message = message
        self.position = position
        self.text = text
        super().__init__(f"{message} at position {position}")

    def pointer(self) -> str:
        """The offending text with a caret under the error position."""
        return f"{self.text}\n{' ' * self.position}^"


class PoleError(DigitSeriesError, ZeroDivisionError):
    """A rational function was evaluated at a zero of its denominator."""

    def __init__(self, n):
        self.n = n
        super().__init__(f"pole at n = {n} with no override")


class OverrideConflict(DigitSeriesError, ValueError):
    """Two rational functions carry incompatible value overrides."""


class InadmissibleJob(DigitSeriesError, ValueError):
    """A series job violates the convergence preconditions."""


class SignError(InadmissibleJob):
    """The argument of a log term is not positive on the summation range."""


class NoConvergence(DigitSeriesError, ArithmeticError):
    """Extrapolants did not settle within the level cap or term budget."""

    def __init__(self, message: str, diagnostics=None):
        self.diagnostics = diagnostics or {}
        super().__init__(message)


class VerificationFailure(DigitSeriesError, AssertionError):
    """An identity's left- and right-hand sides disagree."""

    def __init__(self, report: dict):
        self.report = report
        super().__init__(
            f"identity {report.get('id')!r} failed: |LHS - RHS| = {report.get('difference')}"
        )
