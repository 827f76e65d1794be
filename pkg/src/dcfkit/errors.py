"""Exception hierarchy shared by every module.

The CLI maps these onto its exit-status contract, so new error types should
subclass one of the four families below rather than ``Exception`` directly.
"""

from __future__ import annotations


class ValuationError(Exception):
    """Base class for all errors raised by dcfkit."""


class InputValidationError(ValuationError, ValueError):
    """An input violates a documented invariant (bad rate, negative sales...)."""


class DegenerateInputError(InputValidationError):
    """Input is well-formed but numerically degenerate (zero shares, zero debt)."""


class EmptyAggregateError(DegenerateInputError):
    """No present cells to aggregate over."""


class DivergentPerpetuityError(ValuationError, ArithmeticError):
    """Perpetual growth rate is not below the discount rate."""


class UnknownRatingError(ValuationError, LookupError):
    """Rating symbol not on the agency's scale."""


class DocumentParseError(ValuationError):
    """An input document is syntactically broken or has a missing/mistyped field."""

    def __init__(self, message: str, field: str | None = None, line: int | None = None):
        self.field = field
        self.line = line
        where = []
        if field:
            where.append(f"field '{field}'")
        if line:
            where.append(f"line {line}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)


class GrowthRateWarning(UserWarning):
    """Perpetual growth rate outside the usual 0%-5% plausibility band."""
