"""Exception types shared across the library.

Every domain error carries a stable ``code`` used in machine-readable CLI
output, plus optional structured ``details``.
"""

from __future__ import annotations


class ContextualityError(Exception):
    """Base class for all domain errors raised by this package."""

    code = "Error"

    def __init__(self, message: str, **details):
        super().__init__(message)
        self.details = details

    def to_json(self) -> dict:
        out: dict = {"type": self.code, "message": str(self)}
        for key in sorted(self.details):
            out[key] = self.details[key]
        return out


class IsolatedVertexError(ContextualityError):
    code = "IsolatedVertex"


class UnknownVertexError(ContextualityError):
    code = "UnknownVertexInEdge"


class EmptyEdgeError(ContextualityError):
    code = "EmptyEdge"


class DuplicateLabelError(ContextualityError):
    code = "DuplicateLabel"


class EmptySubsetError(ContextualityError):
    code = "EmptySubset"


class ZeroCountError(ContextualityError):
    code = "ZeroCount"


class DomainMismatchError(ContextualityError):
    code = "DomainMismatch"


class NotAModelError(ContextualityError):
    code = "NotAModel"


class NoDeterministicModelsError(ContextualityError):
    code = "NoDeterministicModels"


class EmptyModelSetError(ContextualityError):
    code = "EmptyModelSet"


class BudgetExceededError(ContextualityError):
    code = "BudgetExceeded"


class SizeBudgetExceededError(BudgetExceededError):
    code = "SizeBudgetExceeded"


class RuleDomainMismatchError(ContextualityError):
    code = "RuleDomainMismatch"


class WinningSetNotSubsetError(ContextualityError):
    code = "WinningSetNotSubset"


class NonBinaryEdgeError(ContextualityError):
    code = "NonBinaryEdge"


class DisconnectedError(ContextualityError):
    code = "Disconnected"


class FixtureMismatchError(ContextualityError):
    code = "FixtureMismatch"
