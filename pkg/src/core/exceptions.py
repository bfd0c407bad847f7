"""
DefCoh - Error Hierarchy

Every public operation raises one of these. All derive from ValueError so
callers that only care about "bad input" can catch that.
"""


class DefCohError(ValueError):
    """Base class for workbench errors."""


# Scalars
class DivisionByZero(DefCohError):
    pass


class IncompatibleFields(DefCohError):
    pass


class PoleAtSpecialization(DefCohError):
    pass


class NoEmbedding(DefCohError):
    pass


class DivisibilityError(DefCohError):
    """A series expected to be divisible by h was not."""


# Algebras and cochains
class AlgebraMismatch(DefCohError):
    pass


class NotACocycle(DefCohError):
    pass


class NonCommutingDerivations(DefCohError):
    pass


class InhomogeneousCochain(DefCohError):
    """A window or bidegree was requested for a cochain with mixed bidegrees."""


# Complexes
class NotAComplex(DefCohError):
    pass


class NotADeformation(DefCohError):
    pass


class OutOfRange(DefCohError):
    pass


# Runner
class InvalidParameters(DefCohError):
    pass


class IOFailure(DefCohError):
    pass
