"""Exception types shared across the package."""


class AutjetError(Exception):
    """Base class for all package errors."""


class DimensionMismatch(AutjetError):
    pass


class AnchorMismatch(AutjetError):
    pass


class OrderMismatch(AutjetError):
    pass


class DegenerateJet(AutjetError):
    """Linear part of a jet is singular within tolerance."""


class InvalidShearData(AutjetError):
    """Shear/overshear linear-form constraints violated (lambda(v) != 0 etc.)."""


class DuplicateNodes(AutjetError):
    pass


class NodeInsideDisk(AutjetError):
    pass


class DegreeExceeded(AutjetError):
    """Damping search exhausted the degree budget without certifying the bound."""


class DictionaryDeficient(AutjetError):
    """Least-squares residual of a dictionary solve exceeded tolerance."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class SmallnessUnachievable(AutjetError):
    """Could not certify the requested sup bound on the compact set."""


class NotUnimodular(AutjetError):
    pass


class Singular(AutjetError):
    pass


class MarkerCollision(AutjetError):
    pass


class HullGrowthFailure(AutjetError):
    pass


class SlotCollision(AutjetError):
    pass


class VChoiceFailed(AutjetError):
    """No direction in the deterministic schedule produced usable data."""


class EtaExhausted(AutjetError):
    """Approximation-tolerance halving failed; carries the best achieved sup."""

    def __init__(self, message, best_sup=None):
        super().__init__(message)
        self.best_sup = best_sup


class RealizationError(AutjetError):
    """A constructed word failed its own verification report."""


class ParseError(AutjetError):
    """Problem or word document failed validation; carries a JSON pointer."""

    def __init__(self, message, pointer=""):
        super().__init__(f"{pointer or '/'}: {message}")
        self.pointer = pointer or "/"


class WordFormatError(AutjetError):
    pass
