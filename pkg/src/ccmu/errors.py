"""Exception hierarchy shared across the package."""


class CcmuError(Exception):
    """Base class for all errors raised by this package."""


class FormulaSyntaxError(CcmuError):
    """Malformed formula text; carries the byte offset of the failure."""

    def __init__(self, message, offset):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class PositivityError(CcmuError):
    """A fixpoint-bound variable occurs under an odd number of negations."""

    def __init__(self, var):
        super().__init__(f"bound variable {var!r} occurs negatively in its body")
        self.var = var


class UnknownAction(CcmuError):
    pass


class UnknownState(CcmuError):
    pass


class UnknownAtom(CcmuError):
    pass


class UnboundVariable(CcmuError):
    pass


class StateClash(CcmuError):
    pass


class AlphabetMismatch(CcmuError):
    pass


class NotTreeLike(CcmuError):
    pass


class NotDisjoint(CcmuError):
    pass


class CyclicWithoutBound(CcmuError):
    pass


class QuantifierPresent(CcmuError):
    pass


class FixpointPresent(CcmuError):
    pass


class NotDisjunctive(CcmuError):
    """Formula is outside the disjunctive fragment the rewrite rules cover."""

    def __init__(self, message, subformula=None):
        super().__init__(message)
        self.subformula = subformula


class SideConditionUnknown(CcmuError):
    """A bounded satisfiability side condition returned no verdict."""

    def __init__(self, message, subformula=None):
        super().__init__(message)
        self.subformula = subformula


class EmptySignature(CcmuError):
    """Elimination requires both the covariant and contravariant set non-empty."""
