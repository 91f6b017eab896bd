"""
Balancing and the classification of end configurations with symmetry D_n x Z_2.
"""
import logging
from collections.abc import Sequence

import numpy as np

from src.domain.shared.exceptions import ClaimViolation, TooManyEnds, Unbalanced
from src.domain.shared.types import VectorLike
from src.domain.symmetry.entities import (
    Classification,
    ClassificationResult,
    EndDescriptor,
    Orbit,
)
from src.domain.symmetry.group import CASE_ANGLE_DEGREES, dihedral_group, orbits

logger = logging.getLogger(__name__)

BALANCE_TOLERANCE = 1e-6


def balanced(weights: Sequence[VectorLike], tol: float = BALANCE_TOLERANCE) -> bool:
    """True when the weights sum to less than ``tol`` times the largest weight."""
    if not len(weights):
        return True
    vectors = np.asarray(weights, dtype=np.float64).reshape(-1, 3)
    largest = float(np.linalg.norm(vectors, axis=1).max())
    if largest == 0.0:
        return True
    return float(np.linalg.norm(vectors.sum(axis=0))) < tol * largest


def _check_claim_one(ends: Sequence[EndDescriptor], tol: float) -> None:
    for i, first in enumerate(ends):
        for j in range(i + 1, len(ends)):
            if first.same_end(ends[j], tol):
                raise ClaimViolation(
                    "Two ends share their normal and central axis",
                    {"claim": 1, "ends": [i, j]},
                )


def _tilt_degrees(orbit: Orbit) -> float:
    v = orbit.ends[0].normal
    return float(np.degrees(np.arcsin(np.clip(abs(v[2]), 0.0, 1.0))))


def _alternating_angle(orbit: Orbit) -> float:
    """Smallest angular gap, in radians, between azimuths of the normals."""
    azimuths = np.sort(np.mod([np.arctan2(e.normal[1], e.normal[0]) for e in orbit.ends], 2 * np.pi))
    gaps = np.diff(np.concatenate([azimuths, [azimuths[0] + 2 * np.pi]]))
    return float(gaps.min())


def _weight(orbit: Orbit) -> float:
    return float(np.linalg.norm(orbit.ends[0].weight))


def classify(
    ends: Sequence[EndDescriptor],
    n: int,
    tol_degrees: float = CASE_ANGLE_DEGREES,
    balance_tol: float = BALANCE_TOLERANCE,
) -> ClassificationResult:
    """
    Identify the family of a configuration of catenoid ends.

    The ends are first closed under D_n x Z_2. A single orbit of n ends is
    JM; two such orbits are AW with ``w`` the ratio of the larger weight to
    the smaller; an orbit of the two vertical ends on the x3-axis with an
    orbit of n ends is JMV with ``w`` the ratio of the vertical weight to the
    horizontal one; a single orbit of 2n ends is P0 when the normals tilt out
    of the horizontal plane (``theta`` is the tilt) and AA when they are
    horizontal (``theta`` is the smaller azimuth gap).

    Raises:
        ClaimViolation: If two ends share normal and axis, or two orbits of
            vertical ends on the x3-axis occur
        TooManyEnds: If the closed set has more than 2n + 1 ends
        Unbalanced: If the weights of the closed set do not sum to zero
        FreeOrbit, AmbiguousCase: From the orbit computation
    """
    group = dihedral_group(n)
    tol = np.radians(tol_degrees)
    _check_claim_one(ends, tol)
    found, added = orbits(list(ends), group, tol_degrees)
    closed = [end for orbit in found for end in orbit.ends]
    if len(closed) > 2 * n + 1:
        raise TooManyEnds(
            f"{len(closed)} ends exceed the bound 2n + 1 = {2 * n + 1}",
            {"ends": len(closed), "added": added},
        )
    if not balanced([end.weight for end in closed], balance_tol):
        raise Unbalanced(
            "End weights do not sum to zero",
            {"sum": np.sum([end.weight for end in closed], axis=0).tolist()},
        )
    if added:
        logger.info("Closed the end set under D_%d x Z_2: %d ends added", n, added)
    axial = [orbit for orbit in found if orbit.case == 6]
    if len(axial) > 1:
        raise ClaimViolation("More than one orbit of two vertical ends", {"claim": 2})
    cases = sorted(orbit.case for orbit in found)

    def result(kind: Classification, reason: str | None = None, **parameters: float) -> ClassificationResult:
        return ClassificationResult(
            kind=kind,
            orbits=tuple(found),
            parameters={"n": float(n), **parameters} if kind is not Classification.CATENOID else {},
            added_ends=added,
            reason=reason,
        )

    if cases == [6]:
        return result(
            Classification.CATENOID, "only two ends; the symmetry group of a catenoid is larger"
        )
    if cases == [4]:
        return result(Classification.JM)
    if cases == [4, 4]:
        weights = sorted(_weight(orbit) for orbit in found)
        return result(Classification.AW, w=weights[1] / weights[0])
    if cases == [4, 6]:
        horizontal = next(orbit for orbit in found if orbit.case == 4)
        return result(Classification.JMV, w=_weight(axial[0]) / _weight(horizontal))
    if len(found) == 1 and found[0].size == 2 * n:
        orbit = found[0]
        if orbit.case == 1:
            return result(Classification.P0, theta=np.radians(_tilt_degrees(orbit)))
        if orbit.case in (2, 3):
            return result(Classification.AA, theta=_alternating_angle(orbit))
    reason = f"orbit cases {cases} match no family"
    logger.warning("Unclassifiable end configuration: %s", reason)
    return result(Classification.UNCLASSIFIABLE, reason)
