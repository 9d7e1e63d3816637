"""Exception and warning types used across the package."""


class GeophaseError(Exception):
    """Base class for domain errors raised by this package."""


class DegenerateOverlap(GeophaseError):
    """State overlap too small for a well-defined phase."""


class DegenerateTriangle(GeophaseError):
    """Spherical triangle with (anti)parallel vertices has no unique geodesic edges."""


class InvalidAngle(GeophaseError, ValueError):
    """Angle outside the domain of the requested quantity."""


class InvalidRate(GeophaseError, ValueError):
    """Photon rates must be non-negative."""


class EmptyWindow(GeophaseError):
    """Both counting windows are empty; the ratio estimator is undefined."""


class FitDiverged(GeophaseError):
    """Fringe fit is rank deficient or failed to converge."""


class SmallAngleViolation(UserWarning):
    """Analyzer angle is outside the linear-response regime of the estimator."""
