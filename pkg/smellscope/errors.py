"""Exception hierarchy shared by every pipeline stage.

Fatal input problems map to exit code 1, broken internal invariants to 2.
"""

from __future__ import annotations


class SmellscopeError(Exception):
    """Base class for all smellscope failures."""

    exit_code = 1


# ----------------------------------------------------------------
#  Fatal input errors (exit code 1)
# ----------------------------------------------------------------

class InputError(SmellscopeError):
    exit_code = 1


class ConfigurationError(InputError):
    """Missing files, nonexistent roots, malformed config entries."""


class ModelError(InputError):
    """The corpus cannot be turned into a valid facts model."""


class SchemaError(InputError):
    """A facts, labels or smells file does not follow its documented layout."""

    def __init__(self, record: str, field: str, message: str):
        super().__init__(f"{record}: field '{field}': {message}")
        self.record = record
        self.field = field


# ----------------------------------------------------------------
#  Internal invariant violations (exit code 2)
# ----------------------------------------------------------------

class InvariantViolation(SmellscopeError):
    exit_code = 2


class ConsistencyError(InvariantViolation):
    """Two stages disagree about which entities exist."""


class ZeroMarginError(ValueError):
    """A 2x2 table has an empty row or column, so chi-square is undefined."""

    def __init__(self, margin: str):
        super().__init__(f"chi-square undefined: margin '{margin}' is zero")
        self.margin = margin
