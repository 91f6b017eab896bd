"""
Feasibility of the n-oid with two vertical ends.

The auxiliary piece is the minimal graph over the square [-R, 0] x [0, R]
with heights 0 on the sides x1 = -R and x2 = 0 and 1/4 on the sides x2 = R
and x1 = 0; the corners (-R, R) and (0, 0) carry the jumps. Its half-turn
about the x3-axis meets the plane x1 = w/2n in the curve alpha, and the
construction works when the segment from p8 = (w/2n, 0, 0) with slope
tan(pi/n) stays above alpha.
"""
import logging
from collections.abc import Iterable

import numpy as np

from src.domain.conjugate.entities import FeasibilityReport
from src.domain.plateau.graph_mse import BoundaryData, HeightField, solve_graph_mse
from src.domain.shared.exceptions import InvalidParams

logger = logging.getLogger(__name__)

JUMP_HEIGHT = 0.25
DEFAULT_CELLS = 32


def auxiliary_boundary(R: float) -> BoundaryData:
    """Boundary data of the auxiliary graph over [-R, 0] x [0, R]."""
    edge = 1e-12 * max(R, 1.0)

    def values(points: np.ndarray) -> np.ndarray:
        high = (points[:, 0] >= -edge) | (points[:, 1] >= R - edge)
        return np.where(high, JUMP_HEIGHT, 0.0)

    return BoundaryData(values=values, jumps=((-R, R), (0.0, 0.0)))


def solve_auxiliary_graph(R: float, h: float, tol: float = 1e-8, damping: float = 1.0) -> HeightField:
    square = np.array([[-R, 0.0], [0.0, 0.0], [0.0, R], [-R, R]])
    return solve_graph_mse(square, auxiliary_boundary(R), h, tol=tol, damping=damping)


def alpha_heights(field: HeightField, a: float, offsets: np.ndarray) -> np.ndarray:
    """
    Heights of alpha above the points (a, -y) of the plane x1 = a.

    The half-turn maps (x1, x2, x3) to (-x1, -x2, x3), so alpha at (a, -y)
    is the graph height at (-a, y).
    """
    points = np.column_stack([np.full(len(offsets), -a), offsets])
    return field.evaluate(points)


def jmv_feasibility(
    n: int,
    w: float,
    R: float,
    h: float | None = None,
    field: HeightField | None = None,
    tol: float = 1e-8,
) -> FeasibilityReport:
    """
    Check that the segment p8-p17 lies above alpha in the x3 direction.

    Clearance is the smallest height of the segment above alpha over the
    grid offsets in (0, R]. For n = 2 the segment is vertical, so it lies
    above alpha and the clearance is infinite.

    Args:
        n: Number of horizontal ends
        w: Weight of the vertical ends
        R: Truncation radius
        h: Grid spacing, R/32 by default
        field: A previously solved auxiliary graph for the same R

    Raises:
        InvalidParams: If n < 2 or w, R are not positive, or if w/2n
            leaves the square
    """
    if n < 2 or w <= 0 or R <= 0:
        raise InvalidParams("jmv feasibility needs n >= 2, w > 0 and R > 0", {"n": n, "w": w, "R": R})
    a = w / (2 * n)
    if a >= R:
        raise InvalidParams("The plane x1 = w/2n misses the auxiliary square", {"w": w, "R": R})
    if n == 2:
        return FeasibilityReport(n=n, w=w, R=R, feasible=True, clearance=float("inf"))
    h = h or R / DEFAULT_CELLS
    field = field or solve_auxiliary_graph(R, h, tol)
    offsets = np.arange(h, R + 0.5 * h, h)
    alpha = alpha_heights(field, a, offsets)
    segment = offsets * np.tan(np.pi / n)
    clearance = float(np.min(segment - alpha))
    report = FeasibilityReport(n=n, w=w, R=R, feasible=clearance > 0, clearance=clearance)
    logger.info("JMV feasibility n=%d w=%g R=%g: clearance %.4e", n, w, R, clearance)
    return report


def estimate_jmv_threshold(
    n: int, weights: Iterable[float], R: float, h: float | None = None
) -> tuple[float | None, list[FeasibilityReport]]:
    """
    Smallest feasible weight on a scan, with every report.

    The auxiliary graph does not depend on w, so it is solved once.
    """
    ordered = sorted(float(w) for w in weights)
    h = h or R / DEFAULT_CELLS
    field = solve_auxiliary_graph(R, h) if n > 2 else None
    reports = [jmv_feasibility(n, w, R, h, field) for w in ordered if w / (2 * n) < R]
    feasible = [r.w for r in reports if r.feasible]
    threshold = min(feasible) if feasible else None
    logger.info("Estimated c(%d) on %d weights: %s", n, len(reports), threshold)
    return threshold, reports
