from __future__ import annotations

from typing import Any, List, Optional


class MlcifError(Exception):
    """Base class for every error raised by the mlcif package."""


class InputError(MlcifError, ValueError):
    """An argument violates an operation's precondition."""


class ParseError(InputError):
    """A set literal, family file or catalog could not be read."""


class WrongCaseError(InputError):
    """A counting formula was asked for an X outside its case."""


class ContractViolation(MlcifError, RuntimeError):
    """An operation was handed an object that does not satisfy its contract."""

    def __init__(self, message: str, diagnostic: Optional[Any] = None) -> None:
        super().__init__(message)
        self.diagnostic = diagnostic


class InvalidPgsError(MlcifError, ValueError):
    def __init__(self, violations: List[Any]) -> None:
        self.violations = list(violations)
        lines = "; ".join(str(v) for v in self.violations)
        super().__init__(f"invalid principal generating set: {lines}")


class BudgetExceeded(MlcifError, RuntimeError):
    """An enumeration would exceed the configured k, n or time budget."""


__all__ = [
    "MlcifError",
    "InputError",
    "ParseError",
    "WrongCaseError",
    "ContractViolation",
    "InvalidPgsError",
    "BudgetExceeded",
]
