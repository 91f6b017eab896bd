"""
Shared domain exceptions.

Every error raised by the numerical modules derives from DomainException so
that the application layer and the management commands can report it with
its ``details`` payload.
"""
from typing import Any


class DomainException(Exception):
    """Base domain exception."""

    def __init__(self, message: str, details: dict[str, Any] | None = None) -> None:
        super().__init__(message)
        self.message = message
        self.details = details or {}


# =============================================================================
# Weierstrass representation
# =============================================================================


class WeierstrassError(DomainException):
    """Base class for Weierstrass-data errors."""

    pass


class PoleAtPoint(WeierstrassError):
    """Raised when a form is evaluated on or too close to a pole or puncture."""

    pass


class QuadratureFailure(WeierstrassError):
    """Raised when adaptive quadrature misses its tolerance at max depth."""

    pass


class OpenPath(WeierstrassError):
    """Raised when a loop integral is requested over a path that is not closed."""

    pass


class ConstantGauss(WeierstrassError):
    """Raised when the Gauss map is constant."""

    pass


class InvalidWeierstrassData(WeierstrassError):
    """Raised when Weierstrass data violate their construction invariants."""

    pass


# =============================================================================
# Contours
# =============================================================================


class ContourError(DomainException):
    """Base class for contour construction errors."""

    pass


class InvalidParams(ContourError):
    """Raised when family parameters are outside their admissible range."""

    pass


class WeightNotReduced(InvalidParams):
    """Raised when an AW weight has not been reduced to w > 1."""

    pass


class UnsupportedPlatonoid(ContourError):
    """Raised for Platonic contours other than the tetroid."""

    pass


# =============================================================================
# Plateau solver
# =============================================================================


class PlateauError(DomainException):
    """Base class for discrete Plateau and graph solver errors."""

    pass


class NotJordan(PlateauError):
    """Raised when a contour is not a closed Jordan polygon."""

    pass


class NoConvergence(PlateauError):
    """
    Raised when an iterative solve stops before meeting its tolerances.

    ``details`` holds the best iterate under ``"best"`` and the report under
    ``"report"`` so callers can still inspect the partial result.
    """

    pass


class DegenerateTriangle(PlateauError):
    """Raised when a triangle collapses and edge flips cannot repair it."""

    pass


class NonConvexDomain(PlateauError):
    """Raised when a graph solve is requested over a non-convex polygon."""

    pass


class EmptyLimit(PlateauError):
    """Raised when a truncated solve misses the witness ball."""

    pass


class UnknownArc(PlateauError):
    """Raised when a boundary arc label is not present on the mesh."""

    pass


class InvalidMesh(PlateauError):
    """Raised when a mesh violates its structural invariants."""

    pass


class AreaIncrease(PlateauError):
    """Raised when a solver step increases area beyond rounding slack."""

    pass


# =============================================================================
# Conjugation and periods
# =============================================================================


class ConjugateError(DomainException):
    """Base class for conjugation and period errors."""

    pass


class NotMinimal(ConjugateError):
    """Raised when a mesh is too far from minimal to be conjugated."""

    pass


class NonIntegrable(ConjugateError):
    """Raised when the rotated edge field cannot be integrated consistently."""

    pass


class ArcTooShort(ConjugateError):
    """Raised when a boundary arc has fewer than three vertices."""

    pass


class NonParallelPlanes(ConjugateError):
    """Raised when the planes of two boundary geodesics are not parallel."""

    pass


class NoSignChange(ConjugateError):
    """Raised when a residual scan finds no sign change to bisect."""

    pass


# =============================================================================
# Symmetry and classification
# =============================================================================


class SymmetryError(DomainException):
    """Base class for symmetry-group and classification errors."""

    pass


class InvalidN(SymmetryError):
    """Raised when the dihedral order is smaller than two."""

    pass


class InvalidEnd(SymmetryError):
    """Raised when an end descriptor violates its invariants."""

    pass


class AmbiguousCase(SymmetryError):
    """Raised when an orbit membership test falls inside the tolerance band."""

    pass


class FreeOrbit(SymmetryError):
    """Raised when an end has trivial stabilizer, so its orbit has 4n ends."""

    pass


class TooManyEnds(SymmetryError):
    """Raised when a configuration has more than 2n + 1 ends."""

    pass


class Unbalanced(SymmetryError):
    """Raised when end weights do not sum to zero."""

    pass


class ClaimViolation(SymmetryError):
    """Raised when an end configuration contradicts the orbit claims."""

    pass


class ArcNotOnMirror(SymmetryError):
    """Raised when a boundary arc does not lie on a mirror plane."""

    pass


class WeldFailure(SymmetryError):
    """Raised when reflected copies cannot be welded into a manifold."""

    pass


class NotAGraphEnd(SymmetryError):
    """Raised when an end region is not a graph over its axis plane."""

    pass


# =============================================================================
# Runs, configuration and files
# =============================================================================


class RunError(DomainException):
    """Base class for run orchestration errors."""

    pass


class ConfigError(RunError):
    """Raised when a run configuration is invalid or cannot be parsed."""

    pass


class FormatError(RunError):
    """Raised when a data file cannot be parsed; details carry the line number."""

    pass


class StageFailed(RunError):
    """Raised when a pipeline stage fails; details carry the stage tag."""

    pass
