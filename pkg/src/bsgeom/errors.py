"""
BSGeom Errors

This module defines the exception hierarchy shared by all bsgeom modules.
Input problems derive from ValueError, resource limits from RuntimeError, so
callers that only know the builtin types still catch them.
"""

from typing import Any, Optional


class BSGeomError(Exception):
    """Base class for every error raised by bsgeom."""


class BaseMismatchError(BSGeomError, ValueError):
    """Two operands live over different bases n."""

    def __init__(self, left: int, right: int):
        super().__init__(f"base mismatch: {left} != {right}")
        self.left = left
        self.right = right


class EqualPointsError(BSGeomError, ValueError):
    """An operation needs two distinct points but got equal ones."""


class FiberConditionError(BSGeomError, ValueError):
    """A point of X_n whose plane height and tree height disagree."""


class ParseError(BSGeomError, ValueError):
    """An input document that does not follow its schema."""


class PresentationConstraintError(BSGeomError, ValueError):
    """Parameters outside the range allowed for a quotient-group case."""


class SingularMatrixError(BSGeomError, ValueError):
    """An endomorphism matrix with zero determinant."""


class MalformedCoverError(BSGeomError, ValueError):
    """A rubber-band cover that does not tile the real line."""


class WrongClassificationError(BSGeomError, ValueError):
    """A conjugacy was requested for a map of the wrong dynamical type."""


class QuasiHomAxiomError(BSGeomError, ValueError):
    """A stretch profile violates the uniform quasihomomorphism axioms."""

    def __init__(self, message: str, violations: Optional[list] = None):
        super().__init__(message)
        self.violations = violations or []


class BudgetExceededError(BSGeomError, RuntimeError):
    """An enumeration exceeded its configured element budget."""

    def __init__(self, budget: int, reached: int):
        super().__init__(f"element budget {budget} exceeded (reached {reached})")
        self.budget = budget
        self.reached = reached


class BreakpointBudgetError(BSGeomError, RuntimeError):
    """A piecewise-linear computation exceeded its breakpoint cap."""

    def __init__(self, cap: int, reached: int):
        super().__init__(f"breakpoint cap {cap} exceeded (reached {reached})")
        self.cap = cap
        self.reached = reached


class OptimizerConvergenceError(BSGeomError, RuntimeError):
    """Numerical minimisation did not reach the requested tolerance."""

    def __init__(self, message: str, best_value: float, bracket: Any):
        super().__init__(f"{message} (best={best_value!r}, bracket={bracket!r})")
        self.best_value = best_value
        self.bracket = bracket
