"""Exception types shared across the package."""


class KnotEnergyError(Exception):
    """Base class for all package errors."""


class DomainError(KnotEnergyError, ValueError):
    """Argument outside the mathematically supported range."""


class DegenerateCurve(KnotEnergyError):
    """Curve is numerically self-intersecting or has vanishing speed."""


class NotArcLength(KnotEnergyError):
    """Operation requires a constant-speed parametrization."""


class NotUnit(KnotEnergyError):
    """Field expected to consist of unit vectors deviates from |t| = 1."""


class CalibrationUnstable(KnotEnergyError):
    """Pairing-constant calibration spread exceeded its tolerance."""


class InsufficientSamples(KnotEnergyError):
    """Too few data points for the requested fit."""


class HypothesisViolated(KnotEnergyError):
    """Input sequence fails the iteration-lemma hypothesis."""

    def __init__(self, k, message=None):
        self.k = k
        super().__init__(message or f"iteration hypothesis fails at k={k}")


class SelfIntersectionImminent(KnotEnergyError):
    """Flow halted: injectivity margin dropped below its floor."""
