"""
Checks on polygonal contours: Jordan test, angles, slab and agreement radius.
"""
import logging

import numpy as np

from src.domain.contours.entities import ContourReport, PolyContour
from src.domain.shared.types import Points, Vec3R

logger = logging.getLogger(__name__)

JORDAN_TOLERANCE = 1e-12
ANGLE_TOLERANCE = 1e-9
ON_LIMIT_TOLERANCE = 1e-9
SAMPLES_PER_SEGMENT = 129
_EPS = 1e-300


def segment_distance(p1: Vec3R, q1: Vec3R, p2: Vec3R, q2: Vec3R) -> float:
    """Distance between the closed segments p1q1 and p2q2."""
    d1, d2, r = q1 - p1, q2 - p2, p1 - p2
    a, e, f = float(d1 @ d1), float(d2 @ d2), float(d2 @ r)
    if a <= _EPS and e <= _EPS:
        return float(np.linalg.norm(r))
    if a <= _EPS:
        s, t = 0.0, float(np.clip(f / e, 0.0, 1.0))
    else:
        c = float(d1 @ r)
        if e <= _EPS:
            s, t = float(np.clip(-c / a, 0.0, 1.0)), 0.0
        else:
            b = float(d1 @ d2)
            denom = a * e - b * b
            s = float(np.clip((b * f - c * e) / denom, 0.0, 1.0)) if denom > _EPS else 0.0
            t = (b * s + f) / e
            if t < 0.0:
                s, t = float(np.clip(-c / a, 0.0, 1.0)), 0.0
            elif t > 1.0:
                s, t = float(np.clip((b - c) / a, 0.0, 1.0)), 1.0
    return float(np.linalg.norm((p1 + s * d1) - (p2 + t * d2)))


def _backtracks(a: Vec3R, b: Vec3R, c: Vec3R, tol: float) -> bool:
    # Adjacent segments ab and bc overlap when c lies back along ba.
    u, v = a - b, c - b
    cross = float(np.linalg.norm(np.cross(u, v)))
    return cross <= tol * max(float(np.linalg.norm(u)), float(np.linalg.norm(v))) and float(
        u @ v
    ) > 0


def is_jordan(vertices: Points, closed: bool = True, tol: float = JORDAN_TOLERANCE) -> bool:
    """
    Pairwise segment test for a simple polygon or polygonal chain.

    Non-adjacent segments must stay more than ``tol * max(1, diameter)`` apart,
    adjacent ones must not fold back onto each other.
    """
    v = np.asarray(vertices, dtype=np.float64).reshape(-1, 3)
    k = len(v)
    if (closed and k < 3) or k < 2:
        return False
    scale = tol * max(1.0, float(np.linalg.norm(v.max(axis=0) - v.min(axis=0))))
    count = k if closed else k - 1
    segments = [(v[i], v[(i + 1) % k]) for i in range(count)]
    if any(np.linalg.norm(b - a) <= scale for a, b in segments):
        return False
    for i in range(count):
        for j in range(i + 1, count):
            adjacent = j == i + 1 or (closed and i == 0 and j == count - 1)
            if adjacent:
                if j == i + 1:
                    a, b, c = segments[i][0], segments[i][1], segments[j][1]
                else:
                    a, b, c = segments[j][0], segments[j][1], segments[i][1]
                if _backtracks(a, b, c, tol):
                    return False
                continue
            if segment_distance(*segments[i], *segments[j]) <= scale:
                return False
    return True


def _angle(u: Vec3R, v: Vec3R) -> float:
    return float(np.degrees(np.arctan2(np.linalg.norm(np.cross(u, v)), u @ v)))


def vertex_angles(contour: PolyContour) -> dict[str, float]:
    """
    Angle in degrees at every vertex between its two incident boundary pieces.

    For limit contours, rays based at a chain end count as incident pieces;
    a vertex with more than two incident pieces reports the angle between
    the first two.
    """
    v, labels = contour.vertices, contour.labels
    k = len(v)
    angles: dict[str, float] = {}
    for i in range(k):
        directions: list[Vec3R] = []
        if contour.closed or i > 0:
            directions.append(v[(i - 1) % k] - v[i])
        if contour.closed or i < k - 1:
            directions.append(v[(i + 1) % k] - v[i])
        directions.extend(ray.direction for ray in contour.rays if np.allclose(ray.base, v[i]))
        if len(directions) >= 2:
            angles[labels[i]] = _angle(directions[0], directions[1])
    return angles


def slab(contour: PolyContour) -> tuple[tuple[float, float], ...]:
    v = contour.vertices
    return tuple((float(lo), float(hi)) for lo, hi in zip(v.min(axis=0), v.max(axis=0)))


def orientation(contour: PolyContour) -> str:
    """Orientation as seen from +x3, from the x1x2 component of the vector area."""
    if not contour.closed:
        return "open"
    v = contour.vertices
    area = 0.5 * float(np.sum(v[:, 0] * np.roll(v[:, 1], -1) - np.roll(v[:, 0], -1) * v[:, 1]))
    scale = max(1.0, contour.diameter()) ** 2 * JORDAN_TOLERANCE
    if area > scale:
        return "ccw"
    if area < -scale:
        return "cw"
    return "degenerate"


def _point_segment(points: Points, a: Vec3R, b: Vec3R, unbounded: tuple[bool, bool]) -> np.ndarray:
    d = b - a
    s = (points - a) @ d / float(d @ d)
    lo = -np.inf if unbounded[0] else 0.0
    hi = np.inf if unbounded[1] else 1.0
    s = np.clip(s, lo, hi)
    return np.linalg.norm(points - (a + s[:, None] * d), axis=1)


def distance_to_limit(points: Points, limit: PolyContour) -> np.ndarray:
    """Distance from each point to the union of segments, rays and lines."""
    points = np.asarray(points, dtype=np.float64).reshape(-1, 3)
    best = np.full(len(points), np.inf)
    for a, b in limit.segments():
        best = np.minimum(best, _point_segment(points, a, b, (False, False)))
    if len(limit.vertices) == 1:
        best = np.minimum(best, np.linalg.norm(points - limit.vertices[0], axis=1))
    for ray in limit.rays:
        best = np.minimum(best, _point_segment(points, ray.base, ray.base + ray.direction, (False, True)))
    for line in limit.lines:
        best = np.minimum(best, _point_segment(points, line.base, line.base + line.direction, (True, True)))
    return best


def _sample_contour(contour: PolyContour, reach: float) -> Points:
    t = np.linspace(0.0, 1.0, SAMPLES_PER_SEGMENT)[:, None]
    chunks = [a + t * (b - a) for a, b in contour.segments()]
    chunks.append(contour.vertices)
    for ray in contour.rays:
        chunks.append(ray.base + reach * t * ray.direction)
    for line in contour.lines:
        chunks.append(line.base + reach * (2 * t - 1) * line.direction)
    return np.vstack(chunks)


def agreement_radius(contour: PolyContour, limit: PolyContour) -> float:
    """
    Largest radius r, up to sampling, such that the contour and the limit
    contour coincide inside the ball of radius r about the origin.
    """
    reach = 2.0 * max(contour.diameter(), limit.diameter(), 1.0)
    tol = ON_LIMIT_TOLERANCE * max(1.0, contour.diameter())
    ours = _sample_contour(contour, reach)
    off = ours[distance_to_limit(ours, limit) > tol]
    theirs = _sample_contour(limit, reach)
    back = distance_to_limit(theirs, contour)
    off_back = theirs[back > tol]
    norms = [np.linalg.norm(off, axis=1), np.linalg.norm(off_back, axis=1)]
    candidates = [float(n.min()) for n in norms if len(n)]
    return min(candidates) if candidates else float("inf")


def validate_contour(
    contour: PolyContour,
    expected_angles: dict[str, float] | None = None,
    limit: PolyContour | None = None,
) -> ContourReport:
    """
    Report Jordan status, angles, slab and agreement with a limit contour.

    Args:
        contour: Contour to check
        expected_angles: Vertex label to angle in degrees
        limit: Limit contour to measure the agreement radius against

    Returns:
        ContourReport; failed checks are listed in ``failures``
    """
    failures: list[str] = []
    jordan = is_jordan(contour.vertices, contour.closed)
    if not jordan:
        failures.append("contour is not a Jordan polygon")
    angles = vertex_angles(contour)
    for label, expected in (expected_angles or {}).items():
        actual = angles.get(label)
        if actual is None:
            failures.append(f"no angle at {label}")
        elif abs(actual - expected) > ANGLE_TOLERANCE:
            failures.append(f"angle at {label} is {actual:.12g}, expected {expected:.12g}")
    radius = None
    if limit is not None:
        radius = agreement_radius(contour, limit)
        if contour.truncation is not None and radius < contour.truncation / 2:
            failures.append(
                f"agreement radius {radius:.6g} is below R/2 = {contour.truncation / 2:.6g}"
            )
    if failures:
        logger.info("Contour %s failed validation: %s", contour.family or "?", failures)
    return ContourReport(
        jordan=jordan,
        angles=angles,
        slab=slab(contour),
        orientation=orientation(contour),
        agreement_radius=radius,
        failures=tuple(failures),
    )
