"""Exception types shared across the package."""


class SchottkyZetaError(Exception):
    """Base class for all package errors."""


class NotHyperbolic(SchottkyZetaError):
    """Operation requires a hyperbolic isometry."""


class PointOnBoundary(SchottkyZetaError):
    """Poisson kernel evaluated too close to the unit circle."""


class SchottkyValidationError(SchottkyZetaError):
    """Base class for Schottky group invariant violations."""


class DiskOverlap(SchottkyValidationError):
    pass


class NonHyperbolicGenerator(SchottkyValidationError):
    pass


class PairingMismatch(SchottkyValidationError):
    pass


class BudgetExceeded(SchottkyZetaError):
    """Word enumeration crossed the configured cap."""


class MonotonicityError(SchottkyZetaError):
    """Minimal geodesic length per word-length shell failed to be nondecreasing."""


class SpectrumEmpty(SchottkyZetaError):
    pass


class NumericalError(SchottkyZetaError):
    """Base class for numerical failures that abort a computation."""


class ZeroOnContour(NumericalError):
    pass


class RefinementExhausted(NumericalError):
    pass


class WindingError(NumericalError):
    """Accumulated phase is not an integer multiple of 2*pi."""


class BranchCutCrossing(NumericalError):
    """Phase continuity of a complex power broke down along a quadrature circle."""


class NoBracketing(NumericalError):
    """Leading transfer-operator eigenvalue does not cross 1 inside the search interval."""


class QuadratureStall(NumericalError):
    """Adaptive trapezoid quadrature failed to converge within the node budget."""


class AtPole(SchottkyZetaError):
    """Scattering multiplier requested at a pole (nonpositive integer point)."""


class AmbiguousDisk(NumericalError):
    """A foreign zero intrudes into a certification disk even at minimal radius."""


class LoweringMismatch(SchottkyZetaError):
    """Ladder recursion produced a rung violating the lowering identity."""


class RepresentationOverflow(SchottkyZetaError):
    """Symbolic tensor-section degrees exceeded the configured cap."""


class BadInput(SchottkyZetaError):
    pass


class ConfigError(SchottkyZetaError):
    """Invalid or contradictory run configuration; message names the offending field."""
