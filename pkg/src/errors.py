#!/usr/bin/env python3
"""Exception hierarchy for the qci toolkit.

Every error raised by the library derives from QCIError. The CLI maps the four
branches onto exit codes (config 2, budget 3, everything else 1).
"""

from typing import Any, Optional


class QCIError(Exception):
    """Base class for all library errors."""


# --- configuration -----------------------------------------------------------

class ConfigError(QCIError):
    pass


class NotPrime(ConfigError):
    def __init__(self, p: int):
        super().__init__(f"modulus {p} is not prime")
        self.p = p


class NoSuchRoot(ConfigError):
    def __init__(self, p: int, b: int):
        super().__init__(f"no primitive {b}th root of unity in F_{p} ({b} does not divide {p - 1})")
        self.p = p
        self.b = b


class BadCommutationMatrix(ConfigError):
    def __init__(self, i: int, j: int, detail: str):
        super().__init__(f"bad commutation matrix at ({i},{j}): {detail}")
        self.i = i
        self.j = j


class NotHomogeneous(ConfigError):
    pass


class BadModuleJSON(ConfigError):
    pass


# --- module level ------------------------------------------------------------

class ModuleError(QCIError):
    pass


class AlgebraMismatch(ModuleError):
    pass


class RelationViolated(ModuleError):
    """x_i^{a_i} does not act as zero; `witness` is a vector it does not kill."""

    def __init__(self, i: int, witness: Any):
        super().__init__(f"relation x{i + 1}^a{i + 1} = 0 violated")
        self.i = i
        self.witness = witness


class CommutationViolated(ModuleError):
    def __init__(self, i: int, j: int, witness: Any):
        super().__init__(f"commutation relation for (x{i + 1}, x{j + 1}) violated")
        self.i = i
        self.j = j
        self.witness = witness


class NotInvariant(ModuleError):
    pass


class ZeroPoint(ModuleError):
    def __init__(self):
        super().__init__("rank point lambda must be nonzero")


class BlockOutOfRange(ModuleError):
    pass


class NotDivisible(ModuleError):
    pass


# --- internal consistency ----------------------------------------------------

class InternalError(QCIError):
    """Signals a bug: the mathematics guarantees these never fire."""


class DegenerateForm(InternalError):
    pass


class NotDiagonal(InternalError):
    pass


class NotAutomorphism(InternalError):
    pass


class StructureMismatch(InternalError):
    """Product table and the generator-by-generator oracle disagree."""


class HullConstructionFailed(InternalError):
    pass


class RadicalUncertain(InternalError):
    pass


class SocleSearchFailed(InternalError):
    pass


# --- budgets -----------------------------------------------------------------

class BudgetError(QCIError):
    """Raised when a search budget runs out; `partial` holds what was computed."""

    def __init__(self, message: str, partial: Optional[Any] = None):
        super().__init__(message)
        self.partial = partial


class SplitBudgetExceeded(BudgetError):
    pass


class BudgetExceeded(BudgetError):
    pass


# --- Auslander-Reiten layer --------------------------------------------------

class ARError(QCIError):
    pass


class ProjectiveInput(ARError):
    def __init__(self):
        super().__init__("module is projective; tau is undefined on projectives")


class NotIndecomposable(ARError):
    pass


class MissingSequence(ARError):
    pass


class HypothesisViolated(ARError):
    def __init__(self, offending):
        super().__init__(f"summands of W lie in the component or its syzygy shift: {offending}")
        self.offending = offending
