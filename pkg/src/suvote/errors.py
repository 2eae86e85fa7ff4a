"""Exception types and validation diagnostics shared across the package."""

from __future__ import annotations

from dataclasses import dataclass, field


class SuvoteError(Exception):
    """Base class for all library errors."""


class DimensionMismatch(SuvoteError):
    """An act, belief, or event was used against the wrong space."""


class GenericityViolation(SuvoteError):
    """A comparison the mechanism relies on came out exactly tied.

    Non-generic inputs are rejected rather than tie-broken; the message
    names the offending comparison so callers can resample or report.
    """

    def __init__(self, message: str, voter: int | None = None, detail: object = None):
        super().__init__(message)
        self.voter = voter
        self.detail = detail


class ResourceBudgetError(SuvoteError):
    """An exact check would exceed its configured resource bound."""


class RealizationError(SuvoteError):
    """A report signature could not be realized by a concrete preference."""


class ConfigError(SuvoteError):
    """Missing or inconsistent configuration (budgets and seeds are mandatory)."""


@dataclass(frozen=True)
class Diagnostic:
    """One structural-validation finding. Diagnostics are data, not errors."""

    code: str
    message: str
    context: tuple = field(default_factory=tuple)

    def __str__(self) -> str:
        return f"[{self.code}] {self.message}"


class ValidationError(SuvoteError):
    """Raised when an operation requires a valid object but got diagnostics."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(str(d) for d in self.diagnostics) or "invalid")
