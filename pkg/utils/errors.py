"""Errors - Exception hierarchy shared by every package."""

from typing import Any, Optional


class SBPError(Exception):
    """Base class for all toolkit errors.

    Args:
        message: Human readable description.
        module: Package-level module name where the failure happened.
        operation: Operation name inside the module.
        index: First offending index, if the failure is tied to one.
    """

    def __init__(
        self,
        message: str,
        module: str = "",
        operation: str = "",
        index: Optional[Any] = None
    ):
        super().__init__(message)
        self.message = message
        self.module = module
        self.operation = operation
        self.index = index

    def __str__(self) -> str:
        where = ".".join(part for part in (self.module, self.operation) if part)
        text = f"{where}: {self.message}" if where else self.message
        if self.index is not None:
            text += f" (first offending index {self.index})"
        return text


class ValidationError(SBPError, ValueError):
    """Invalid argument, configuration value or precondition."""


class StencilOverlapError(ValidationError):
    """Grid too small for the boundary blocks of an operator family."""


class TopologyError(ValidationError):
    """Panel topology or interface pairing is inconsistent."""


class BasisMismatchError(ValidationError, TypeError):
    """Vector field passed with the wrong component basis."""


class NumericalFailure(SBPError, ArithmeticError):
    """Non-finite values, solver breakdown or a violated runtime invariant."""
