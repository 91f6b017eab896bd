"""
Explicit truncated and limit contours of every family.

Vertex names follow the construction of each family: ``p1``, ``p2``, ...
The truncation radius ``R`` plays the role of the integer box size of the
original constructions.
"""
import logging

import numpy as np

from src.domain.contours.entities import (
    AA,
    AW,
    JM,
    JMV,
    P0,
    FamilySpec,
    Pg,
    PolyContour,
    Ray,
    Tetroid,
)
from src.domain.shared.exceptions import InvalidParams, UnsupportedPlatonoid, WeightNotReduced

logger = logging.getLogger(__name__)

E1 = np.array([1.0, 0.0, 0.0])
E2 = np.array([0.0, 1.0, 0.0])

PLATONOIDS = ("tetroid", "cuboid", "octoid", "dodecoid", "icosoid")


def _labels(*indices: int) -> tuple[str, ...]:
    return tuple(f"p{i}" for i in indices)


def _require_truncation(R: float, minimum: float, family: str) -> None:
    if not R > minimum:
        raise InvalidParams(
            f"{family} contour needs R > {minimum:g}", {"R": R, "minimum": minimum}
        )


def _cot(x: float) -> float:
    return float(np.cos(x) / np.sin(x))


# =============================================================================
# Jorge-Meeks and tetroid
# =============================================================================


def _jm_points(n: int, R: float) -> dict[str, np.ndarray]:
    c, s = np.cos(np.pi / n), np.sin(np.pi / n)
    return {
        "p1": np.array([0.0, 0.0, 0.0]),
        "p2": np.array([0.0, c, s]),
        "p3": np.array([R, c, s]),
        "p4": np.array([R, R, s]),
        "p5": np.array([R, R, 0.0]),
        "p6": np.array([0.0, R, 0.0]),
    }


def contour_JM(n: int, R: float) -> PolyContour:
    """
    Truncated Jorge-Meeks hexagon.

    Args:
        n: Number of ends, at least 2
        R: Truncation radius, greater than 1

    Returns:
        Closed contour p1..p6 in the slab 0 <= x3 <= sin(pi/n)

    Raises:
        InvalidParams: If n < 2 or R <= 1
    """
    JM(n).validate()
    _require_truncation(R, 1.0, "JM")
    points = _jm_points(n, R)
    return PolyContour(
        vertices=np.array(list(points.values())),
        closed=True,
        truncation=float(R),
        labels=tuple(points),
        family="JM",
    )


def contour_limit_JM(n: int) -> PolyContour:
    """Segment p1-p2 with a ray along +x1 at p2 and a ray along +x2 at p1."""
    JM(n).validate()
    points = _jm_points(n, 2.0)
    return PolyContour(
        vertices=np.array([points["p1"], points["p2"]]),
        closed=False,
        rays=(Ray.of(points["p2"], E1), Ray.of(points["p1"], E2)),
        labels=_labels(1, 2),
        family="JM",
    )


def _tetroid_points(R: float) -> dict[str, np.ndarray]:
    p2 = np.array([-np.sqrt(1 / 8), np.sqrt(3 / 8), 1.0])
    return {
        "p1": np.zeros(3),
        "p2": p2,
        "p3": p2 + np.array([R, R / np.sqrt(3), 0.0]),
        "p4": np.array([R, R, 1.0]),
        "p5": np.array([R, R, 0.0]),
        "p6": np.array([0.0, R, 0.0]),
    }


def contour_platonoid(kind: str, R: float) -> PolyContour:
    """
    Truncated Platonic contour; only the tetroid is built.

    Raises:
        UnsupportedPlatonoid: For any kind other than the tetroid
        InvalidParams: If R <= 1
    """
    if str(kind).lower() != "tetroid":
        raise UnsupportedPlatonoid(
            f"Platonic contour {kind!r} is not supported", {"supported": ["tetroid"]}
        )
    _require_truncation(R, 1.0, "Tetroid")
    points = _tetroid_points(R)
    return PolyContour(
        vertices=np.array(list(points.values())),
        closed=True,
        truncation=float(R),
        labels=tuple(points),
        family="Tetroid",
    )


def contour_limit_tetroid() -> PolyContour:
    points = _tetroid_points(2.0)
    return PolyContour(
        vertices=np.array([points["p1"], points["p2"]]),
        closed=False,
        rays=(
            Ray.of(points["p2"], [1.0, 1 / np.sqrt(3), 0.0]),
            Ray.of(points["p1"], E2),
        ),
        labels=_labels(1, 2),
        family="Tetroid",
    )


# =============================================================================
# Prismoids with tilted ends
# =============================================================================


def _p0_points(family: P0, R: float) -> dict[str, np.ndarray]:
    n, theta, s, t = family.n, family.theta, family.s, family.t
    c, sn, ct = np.cos(np.pi / n), np.sin(np.pi / n), _cot(theta)
    return {
        "p1": np.zeros(3),
        "p2": np.array([-t * c, -t * sn, 0.0]),
        "p3": np.array([R, -t * sn, 0.0]),
        "p4": np.array([R, -R, t * sn * ct - R * ct]),
        "p5": np.array([-R, -R, -R * ct - s]),
        "p6": np.array([-R, 0.0, -s]),
        "p7": np.array([0.0, 0.0, -s]),
    }


def contour_P0(n: int, theta: float, s: float, t: float, R: float | None) -> PolyContour:
    """
    Prismoid heptagon p1..p7; ``R=None`` returns the limit contour.

    Raises:
        InvalidParams: If the parameters are out of range or R <= max(s, t) + 1
    """
    family = P0(n, theta, s, t)
    family.validate()
    if R is None:
        points = _p0_points(family, 2 * (max(s, t) + 1))
        return PolyContour(
            vertices=np.array([points["p2"], points["p1"], points["p7"]]),
            closed=False,
            rays=(Ray.of(points["p2"], E1), Ray.of(points["p7"], -E1)),
            labels=_labels(2, 1, 7),
            family="P0",
        )
    _require_truncation(R, max(s, t) + 1, "P0")
    points = _p0_points(family, R)
    return PolyContour(
        vertices=np.array(list(points.values())),
        closed=True,
        truncation=float(R),
        labels=tuple(points),
        family="P0",
    )


def _pg_points(family: Pg, R: float) -> dict[str, np.ndarray]:
    n, theta, s, t, u = family.n, family.theta, family.s, family.t, family.u
    c, sn, ct = np.cos(np.pi / n), np.sin(np.pi / n), _cot(theta)
    return {
        "p1": np.array([-s, 0.0, 0.0]),
        "p2": np.zeros(3),
        "p3": np.array([0.0, 0.0, -t]),
        "p4": np.array([R, 0.0, -t]),
        "p5": np.array([R, -R, -t - R * ct]),
        "p6": np.array([-R, -R, -R * ct + u * sn * ct]),
        "p7": np.array([-R, -u * sn, 0.0]),
        "p8": np.array([u * c - s, -u * sn, 0.0]),
    }


def contour_Pg(
    n: int, theta: float, s: float, t: float, u: float, R: float | None
) -> PolyContour:
    """
    Higher-genus prismoid octagon p1..p8; ``R=None`` returns the limit contour.

    Raises:
        InvalidParams: If the parameters are out of range or R <= max(s, t, u) + 1
    """
    family = Pg(n, theta, s, t, u)
    family.validate()
    if R is None:
        points = _pg_points(family, 2 * (max(s, t, u) + 1))
        return PolyContour(
            vertices=np.array([points["p8"], points["p1"], points["p2"], points["p3"]]),
            closed=False,
            rays=(Ray.of(points["p8"], -E1), Ray.of(points["p3"], E1)),
            labels=_labels(8, 1, 2, 3),
            family="Pg",
        )
    _require_truncation(R, max(s, t, u) + 1, "Pg")
    points = _pg_points(family, R)
    return PolyContour(
        vertices=np.array(list(points.values())),
        closed=True,
        truncation=float(R),
        labels=tuple(points),
        family="Pg",
    )


def _aa_points(family: AA, R: float) -> dict[str, np.ndarray]:
    n, theta, s, t = family.n, family.theta, family.s, family.t
    c, sn, half = np.cos(np.pi / n), np.sin(np.pi / n), np.tan(family.theta / 2)
    return {
        "p1": np.zeros(3),
        "p2": np.array([0.0, -t * c, -t * sn]),
        "p3": np.array([R, -t * c, -t * sn]),
        "p4": np.array([R, -R, (t * c - R) * half - t * sn]),
        "p5": np.array([-R, -R, (s - R) * half]),
        "p6": np.array([-R, -s, 0.0]),
        "p7": np.array([0.0, -s, 0.0]),
    }


def contour_AA(n: int, theta: float, s: float, t: float, R: float | None) -> PolyContour:
    """
    Alternating-angle heptagon p1..p7; ``R=None`` returns the limit contour.

    Raises:
        InvalidParams: If theta is outside (0, pi/n) or R <= max(s, t) + 1
    """
    family = AA(n, theta, s, t)
    family.validate()
    if R is None:
        points = _aa_points(family, 2 * (max(s, t) + 1))
        return PolyContour(
            vertices=np.array([points["p2"], points["p1"], points["p7"]]),
            closed=False,
            rays=(Ray.of(points["p2"], E1), Ray.of(points["p7"], -E1)),
            labels=_labels(2, 1, 7),
            family="AA",
        )
    _require_truncation(R, max(s, t) + 1, "AA")
    points = _aa_points(family, R)
    return PolyContour(
        vertices=np.array(list(points.values())),
        closed=True,
        truncation=float(R),
        labels=tuple(points),
        family="AA",
    )


# =============================================================================
# Added vertical ends and alternating weights
# =============================================================================

# Caps the p8-p17 segment for n = 2, where its slope tan(pi/n) is infinite.
JMV_MIN_COSINE = 0.5


def _jmv_points(n: int, w: float, R: float) -> dict[str, np.ndarray]:
    # p1..p7 are reconstructed: the connection list runs p6 -> p1 -> p7 -> p8
    # along the x1-axis and p13 -> p2 -> p3 along the line {x1 = 0, x3 = 1/4},
    # which makes p9 the image of a point of p3p4 under the half-turn about
    # the line p1p2.
    a = w / (2 * n)
    direction = np.array([0.0, -np.cos(np.pi / n), np.sin(np.pi / n)])
    length = R / max(np.cos(np.pi / n), JMV_MIN_COSINE)
    p8 = np.array([a, 0.0, 0.0])
    p17 = p8 + length * direction
    return {
        "p1": np.zeros(3),
        "p2": np.array([0.0, 0.0, 0.25]),
        "p3": np.array([0.0, R, 0.25]),
        "p4": np.array([-R, R, 0.25]),
        "p5": np.array([-R, R, 0.0]),
        "p6": np.array([-R, 0.0, 0.0]),
        "p7": np.array([0.25, 0.0, 0.0]),
        "p8": p8,
        "p13": np.array([0.0, -R, 0.25]),
        "p16": np.array([0.0, p17[1], p17[2]]),
        "p17": p17,
    }


def contour_JMV(n: int, w: float, R: float | None) -> PolyContour:
    """
    Contour for the n-oid with two vertical ends.

    The vertex order is p3, p4, p5, p6, p1, p7, p8, p17, p16, p13, p2.
    Whether the construction is feasible for this w is decided later by
    the feasibility check of the conjugate module.

    Raises:
        InvalidParams: If w/2n <= 1/4 or R <= 1
    """
    JMV(n, w).validate()
    if not w / (2 * n) > 0.25:
        raise InvalidParams(
            "JMV contour needs w/2n > 1/4 so that p7 precedes p8", {"n": n, "w": w}
        )
    if R is None:
        points = _jmv_points(n, w, 2.0)
        direction = np.array([0.0, -np.cos(np.pi / n), np.sin(np.pi / n)])
        return PolyContour(
            vertices=np.array([points["p8"]]),
            closed=False,
            rays=(Ray.of(points["p8"], -E1), Ray.of(points["p8"], direction)),
            lines=(Ray.of(points["p2"], E2),),
            labels=_labels(8),
            family="JMV",
        )
    _require_truncation(R, 1.0, "JMV")
    points = _jmv_points(n, w, R)
    order = ("p3", "p4", "p5", "p6", "p1", "p7", "p8", "p17", "p16", "p13", "p2")
    return PolyContour(
        vertices=np.array([points[k] for k in order]),
        closed=True,
        truncation=float(R),
        labels=order,
        family="JMV",
    )


def _aw_points(n: int, w: float, R: float) -> dict[str, np.ndarray]:
    half = np.pi / (2 * n)
    d = np.array([0.0, np.cos(np.pi / n), -np.sin(np.pi / n)])
    p9 = np.array([0.0, -_cot(half) / 4, 0.25])
    p16 = np.array([R, 0.0, 0.0])
    p13 = p9 + (R + _cot(half) / 4) * d
    points = {
        "p1": p9 + d / (4 * np.sin(half) * np.cos(half)),
        "p2": np.zeros(3),
        "p3": np.array([-R, 0.0, 0.0]),
        "p4": np.array([-R, R, 0.0]),
        "p5": np.array([-R, R, 0.25]),
        "p6": np.array([-R, R, w / 4]),
        "p7": np.array([0.0, R, w / 4]),
        "p8": p9 + (1 - w) / (4 * np.sin(np.pi / n)) * d,
        "p9": p9,
        "p13": p13,
        "p14": p13 + np.array([R, 0.0, 0.0]),
        "p15": p16 + R * d,
        "p16": p16,
    }
    return points


def contour_AW(n: int, w: float, R: float | None) -> PolyContour:
    """
    Contour for two alternating orbits of ends with weight ratio ``w``.

    Raises:
        WeightNotReduced: If w <= 1; rescale by 1/w first
        InvalidParams: If n < 2 or R is too small for p13 to pass p1
    """
    AW(n, w).validate()
    if w <= 1:
        raise WeightNotReduced(
            "AW contours need w > 1; apply the homothety by 1/w first", {"w": w}
        )
    offset = 1 / (2 * np.sin(np.pi / n))
    if R is None:
        points = _aw_points(n, w, 2 * offset + 2)
        d = np.array([0.0, np.cos(np.pi / n), -np.sin(np.pi / n)])
        return PolyContour(
            vertices=np.array([points["p8"], points["p9"], points["p1"]]),
            closed=False,
            rays=(Ray.of(points["p8"], E2), Ray.of(points["p1"], d)),
            lines=(Ray.of(points["p2"], E1),),
            labels=_labels(8, 9, 1),
            family="AW",
        )
    _require_truncation(R, offset + 1, "AW")
    points = _aw_points(n, w, R)
    order = ("p3", "p4", "p5", "p6", "p7", "p8", "p9", "p1", "p13", "p14", "p15", "p16", "p2")
    return PolyContour(
        vertices=np.array([points[k] for k in order]),
        closed=True,
        truncation=float(R),
        labels=order,
        family="AW",
    )


# =============================================================================
# Dispatch
# =============================================================================


def build_contour(family: FamilySpec, R: float) -> PolyContour:
    """Truncated contour of any family at radius ``R``."""
    match family:
        case JM(n=n):
            return contour_JM(n, R)
        case Tetroid():
            return contour_platonoid("tetroid", R)
        case P0(n=n, theta=theta, s=s, t=t):
            return contour_P0(n, theta, s, t, R)
        case Pg(n=n, theta=theta, s=s, t=t, u=u):
            return contour_Pg(n, theta, s, t, u, R)
        case JMV(n=n, w=w):
            return contour_JMV(n, w, R)
        case AW(n=n, w=w):
            return contour_AW(n, w, R)
        case AA(n=n, theta=theta, s=s, t=t):
            return contour_AA(n, theta, s, t, R)
    raise InvalidParams(f"Unknown family {family!r}")


def limit_contour(family: FamilySpec) -> PolyContour:
    """Limit contour of any family."""
    match family:
        case JM(n=n):
            return contour_limit_JM(n)
        case Tetroid():
            return contour_limit_tetroid()
        case P0(n=n, theta=theta, s=s, t=t):
            return contour_P0(n, theta, s, t, None)
        case Pg(n=n, theta=theta, s=s, t=t, u=u):
            return contour_Pg(n, theta, s, t, u, None)
        case JMV(n=n, w=w):
            return contour_JMV(n, w, None)
        case AW(n=n, w=w):
            return contour_AW(n, w, None)
        case AA(n=n, theta=theta, s=s, t=t):
            return contour_AA(n, theta, s, t, None)
    raise InvalidParams(f"Unknown family {family!r}")


def limit_arcs(contour: PolyContour, limit: PolyContour, tol: float = 1e-9) -> list[str]:
    """
    Labels of truncated-contour segments that lie on the limit contour.

    These are the straight boundary pieces that survive as R grows; the rest
    belong to the truncation box.
    """
    from src.domain.contours.validation import distance_to_limit

    labels = []
    for label, (a, b) in zip(contour.segment_labels(), contour.segments()):
        samples = np.array([a, 0.5 * (a + b), b])
        if float(distance_to_limit(samples, limit).max()) <= tol * max(1.0, contour.diameter()):
            labels.append(label)
    return labels
