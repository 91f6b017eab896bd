"""
Period residuals of the prismoid families and the searches that kill them.

The Plateau solution on a prismoid contour is conjugated; the straight
contour edges parallel to the x1-axis become planar geodesics in planes
orthogonal to x1. The periods vanish when those planes coincide.
"""
import logging
from collections.abc import Callable, Sequence

import numpy as np
from scipy.optimize import brentq

from src.domain.conjugate.entities import (
    ConjugateTolerances,
    HelicoidEndReport,
    PeriodResidual,
    PlaneFit,
    ResidualTable,
)
from src.domain.conjugate.transform import (
    conjugate_mesh,
    fit_plane,
    plane_angle_degrees,
    signed_plane_distance,
)
from src.domain.contours.builders import contour_P0, contour_Pg
from src.domain.contours.entities import P0, Pg, PolyContour
from src.domain.plateau.entities import SolverConfig, TriMesh
from src.domain.plateau.solver import solve_plateau
from src.domain.plateau.triangulation import triangulate_disk
from src.domain.shared.exceptions import InvalidParams, NonParallelPlanes, NoSignChange
from src.domain.shared.types import VectorLike, unit

logger = logging.getLogger(__name__)

E1 = np.array([1.0, 0.0, 0.0])
DEFAULT_SCAN_POINTS = 9
RADIUS_MARGIN = 1.0

ResidualFunction = Callable[[dict[str, float]], PeriodResidual]


def residual_radius(box: tuple[float, float], R: float) -> float:
    """
    Truncation radius for residual solves over ``box``.

    The prismoid contours need R > max(s, t, u) + 1, so ``R`` is raised to
    clear the top of the box by ``RADIUS_MARGIN``.
    """
    return max(float(R), float(box[1]) + 1.0 + RADIUS_MARGIN)


def _near_arc_plane(conjugate: TriMesh, original: TriMesh, label: str, radius: float) -> PlaneFit:
    # Only the part of the arc near the origin; the far end feels the truncation.
    chain = np.array(conjugate.arc(label))
    near = chain[np.linalg.norm(original.vertices[chain], axis=1) <= radius]
    if len(near) < 3:
        near = chain
    return fit_plane(conjugate.vertices[near], label).oriented(E1)


def _parallel(first: PlaneFit, second: PlaneFit, tolerances: ConjugateTolerances) -> None:
    angle = plane_angle_degrees(first, second)
    if angle > tolerances.parallel_degrees:
        raise NonParallelPlanes(
            f"Planes of {first.label} and {second.label} differ by {angle:.2f} degrees",
            {"angle": angle, "limit": tolerances.parallel_degrees},
        )


def _solve_and_conjugate(
    contour: PolyContour, cfg: SolverConfig, tolerances: ConjugateTolerances
) -> tuple[TriMesh, TriMesh]:
    mesh, _ = solve_plateau(triangulate_disk(contour, cfg.edge_length), cfg)
    return mesh, conjugate_mesh(mesh, tolerances)


def period_residual_P0(
    n: int,
    theta: float,
    s: float,
    t: float,
    R: float,
    cfg: SolverConfig | None = None,
    tolerances: ConjugateTolerances | None = None,
) -> PeriodResidual:
    """
    Signed distance between the planes of the two unbounded planar geodesics.

    The arcs are the conjugates of the ray edges p2-p3 and p6-p7; both normals
    are oriented along +x1 and the residual is positive when the second plane
    lies on the side of the first normal.

    Raises:
        NonParallelPlanes: If the fitted planes differ by more than the angle limit
    """
    cfg = cfg or SolverConfig()
    tolerances = tolerances or ConjugateTolerances()
    contour = contour_P0(n, theta, s, t, R)
    mesh, conjugate = _solve_and_conjugate(contour, cfg, tolerances)
    first = _near_arc_plane(conjugate, mesh, "p2:p3", R / 2)
    second = _near_arc_plane(conjugate, mesh, "p6:p7", R / 2)
    _parallel(first, second, tolerances)
    value = signed_plane_distance(first, second)
    logger.info("P0 residual n=%d theta=%.6f s=%.6f t=%.6f: %.6e", n, theta, s, t, value)
    return PeriodResidual(
        components=(value,),
        parameters={"s": s, "t": t},
        diameter=contour.diameter(),
    )


def period_residual_Pg(
    n: int,
    theta: float,
    s: float,
    t: float,
    u: float,
    R: float,
    cfg: SolverConfig | None = None,
    tolerances: ConjugateTolerances | None = None,
) -> PeriodResidual:
    """
    Two residuals of the higher-genus prismoid.

    Component 0 is the signed distance between the planes of the two
    unbounded geodesics (conjugates of p7-p8 and p3-p4). Component 1 is the
    distance from the plane of the bounded geodesic (conjugate of p1-p2) to
    the plane midway between them.
    """
    cfg = cfg or SolverConfig()
    tolerances = tolerances or ConjugateTolerances()
    contour = contour_Pg(n, theta, s, t, u, R)
    mesh, conjugate = _solve_and_conjugate(contour, cfg, tolerances)
    first = _near_arc_plane(conjugate, mesh, "p7:p8", R / 2)
    second = _near_arc_plane(conjugate, mesh, "p3:p4", R / 2)
    middle = _near_arc_plane(conjugate, mesh, "p1:p2", R / 2)
    _parallel(first, second, tolerances)
    _parallel(first, middle, tolerances)
    between = signed_plane_distance(first, second)
    common = 0.5 * (first.centroid + second.centroid)
    offset = float(first.normal @ (middle.centroid - common))
    logger.info(
        "Pg residual n=%d theta=%.6f s=%.6f t=%.6f u=%.6f: (%.6e, %.6e)",
        n, theta, s, t, u, between, offset,
    )
    return PeriodResidual(
        components=(between, offset),
        parameters={"s": s, "t": t, "u": u},
        diameter=contour.diameter(),
    )


def scan_residuals(
    residual: ResidualFunction, points: Sequence[dict[str, float]]
) -> ResidualTable:
    """Evaluate ``residual`` at every parameter point, in order."""
    rows = tuple(residual(dict(point)) for point in points)
    names = tuple(sorted({name for point in points for name in point}))
    return ResidualTable(names=names, rows=rows)


def _path(start: dict[str, float], end: dict[str, float], fraction: float) -> dict[str, float]:
    return {name: start[name] + fraction * (end[name] - start[name]) for name in start}


def bisect_path(
    residual: ResidualFunction,
    start: dict[str, float],
    end: dict[str, float],
    component: int = 0,
    samples: int = DEFAULT_SCAN_POINTS,
    tolerance: float = 1e-3,
) -> tuple[dict[str, float], PeriodResidual, ResidualTable]:
    """
    Find a zero of one residual component on the segment from ``start`` to ``end``.

    The segment is scanned at ``samples`` points; the first sign change is
    refined with Brent's method.

    Raises:
        NoSignChange: If the scan finds no sign change; ``details["table"]``
            holds the scanned residuals
    """
    fractions = np.linspace(0.0, 1.0, samples)
    points = [_path(start, end, f) for f in fractions]
    table = scan_residuals(residual, points)
    values = [row.components[component] for row in table.rows]
    for fraction, point, row in zip(fractions, points, table.rows):
        if abs(row.components[component]) < tolerance * row.diameter:
            return point, row, table
    cache: dict[float, PeriodResidual] = {}

    def evaluate(fraction: float) -> float:
        if fraction not in cache:
            cache[fraction] = residual(_path(start, end, fraction))
        return cache[fraction].components[component]

    for k in range(samples - 1):
        if np.sign(values[k]) != np.sign(values[k + 1]):
            root = brentq(evaluate, fractions[k], fractions[k + 1], xtol=1e-6)
            point = _path(start, end, root)
            found = cache.get(root) or residual(point)
            logger.info("Period killed at %s: %s", point, found.components)
            return point, found, table
    raise NoSignChange(
        "Residual does not change sign along the scanned segment",
        {"table": table.as_records(), "component": component},
    )


def kill_periods(
    family: P0 | Pg,
    box: tuple[float, float],
    R: float,
    cfg: SolverConfig | None = None,
    tolerances: ConjugateTolerances | None = None,
    samples: int = DEFAULT_SCAN_POINTS,
    residual: ResidualFunction | None = None,
) -> tuple[dict[str, float], PeriodResidual]:
    """
    Choose the free parameters so that the period residuals vanish.

    For P0 the segment from (s, t) = (lo, hi) to (hi, lo) is scanned and
    bisected. For Pg the unbounded-geodesic residual is killed first along
    (u, t) from (lo, hi) to (hi, lo) at s = lo, then the bounded-geodesic
    residual along s in [lo, hi].

    Args:
        family: P0 or Pg parameters; their s, t, u are ignored
        box: Parameter range (lo, hi) shared by all free parameters
        R: Smallest truncation radius of the residual solves; raised by
            :func:`residual_radius` when the box needs a larger one
        residual: Replaces the solver-backed residual, mainly for tests

    Raises:
        NoSignChange: If a scan finds no sign change
    """
    lo, hi = box
    if not 0 < lo < hi:
        raise InvalidParams("Search box must satisfy 0 < lo < hi", {"box": box})
    R = residual_radius(box, R)
    tolerances = tolerances or ConjugateTolerances()
    tol = tolerances.period_tolerance
    if isinstance(family, P0):
        def p0(point: dict[str, float]) -> PeriodResidual:
            return period_residual_P0(
                family.n, family.theta, point["s"], point["t"], R, cfg, tolerances
            )

        evaluate = residual or p0
        point, found, _ = bisect_path(
            evaluate, {"s": lo, "t": hi}, {"s": hi, "t": lo}, 0, samples, tol
        )
        return point, found
    if isinstance(family, Pg):
        def pg(point: dict[str, float]) -> PeriodResidual:
            return period_residual_Pg(
                family.n, family.theta, point["s"], point["t"], point["u"], R, cfg, tolerances
            )

        evaluate = residual or pg
        outer, _, _ = bisect_path(
            evaluate, {"s": lo, "t": hi, "u": lo}, {"s": lo, "t": lo, "u": hi}, 0, samples, tol
        )
        inner, found, _ = bisect_path(
            evaluate, {**outer, "s": lo}, {**outer, "s": hi}, 1, samples, tol
        )
        return inner, found
    raise InvalidParams(f"Periods are only killed for P0 and Pg, not {family!r}")


# =============================================================================
# Helicoid ends
# =============================================================================


def _vertical_plane_defect(points: np.ndarray, vertical: np.ndarray) -> float:
    flat = points - np.outer(points @ vertical, vertical)
    centered = flat - flat.mean(axis=0)
    singular = np.linalg.svd(centered, compute_uv=False)
    # A vertical plane projects to a line: the second singular value measures the spread.
    return float(singular[1] / np.sqrt(len(points)))


def helicoid_end_check(
    mesh: TriMesh,
    ray_arcs: tuple[str, str],
    conjugate: TriMesh | None = None,
    vertical: VectorLike = (0.0, 0.0, 1.0),
    tolerance: float = 1e-3,
    tolerances: ConjugateTolerances | None = None,
) -> HelicoidEndReport:
    """
    Compare the two coplanarity conditions at a helicoidal end.

    The straight rays of the helicoid side lie in a common vertical plane
    exactly when the planes of their conjugate planar geodesics coincide.

    Args:
        mesh: Mesh whose arcs ``ray_arcs`` are the straight boundary rays
        conjugate: Its conjugate; computed when omitted
        vertical: Axis of the end
        tolerance: Defect threshold relative to the mesh diameter
    """
    axis = unit(vertical)
    conjugate = conjugate if conjugate is not None else conjugate_mesh(mesh, tolerances)
    rays = np.vstack([mesh.arc_points(label) for label in ray_arcs])
    ray_defect = _vertical_plane_defect(rays, axis)
    first, second = (fit_plane(conjugate.arc_points(label), label) for label in ray_arcs)
    second = second.oriented(first.normal)
    plane_defect = abs(signed_plane_distance(first, second)) + np.linalg.norm(
        first.normal - second.normal
    ) * conjugate.diameter()
    scale = tolerance * max(mesh.diameter(), 1.0)
    return HelicoidEndReport(
        ray_defect=ray_defect,
        plane_defect=float(plane_defect),
        ray_coplanar=ray_defect < scale,
        planes_coplanar=plane_defect < scale,
    )
