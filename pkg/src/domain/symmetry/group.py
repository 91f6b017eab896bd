"""
The group D_n x Z_2 and the orbits of ends under it.

Mirror planes are P_0 = {x3 = 0}, P_i = {x1 = cot(i pi/n) x2} for
0 < i < n, and P_n = {x2 = 0}; the x3-axis is the rotation axis.
"""
import logging

import numpy as np

from src.domain.shared.exceptions import AmbiguousCase, FreeOrbit, InvalidN
from src.domain.shared.types import Matrix3, Vec3R
from src.domain.symmetry.entities import EndDescriptor, Orbit, SymGroup

logger = logging.getLogger(__name__)

CASE_ANGLE_DEGREES = 0.5
AMBIGUITY_FACTOR = 4.0
E3 = np.array([0.0, 0.0, 1.0])


def rotation_z(angle: float) -> Matrix3:
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def reflection(normal: Vec3R) -> Matrix3:
    normal = np.asarray(normal, dtype=np.float64)
    normal = normal / np.linalg.norm(normal)
    return np.eye(3) - 2.0 * np.outer(normal, normal)


def plane_normal(i: int, n: int) -> Vec3R:
    """Unit normal of P_i."""
    if i == 0:
        return E3.copy()
    angle = i * np.pi / n
    return np.array([np.sin(angle), -np.cos(angle), 0.0])


def dihedral_group(n: int) -> SymGroup:
    """
    The 4n elements R^k, R^k S_n, and their products with S_0.

    R is the rotation by 2 pi/n about x3, S_n the reflection across P_n and
    S_0 the reflection across P_0.

    Raises:
        InvalidN: If n < 2
    """
    if not isinstance(n, int) or n < 2:
        raise InvalidN("Dihedral order must be an integer >= 2", {"n": n})
    s_n = reflection(plane_normal(n, n))
    s_0 = reflection(E3)
    elements = []
    for flip in (np.eye(3), s_0):
        for mirror in (np.eye(3), s_n):
            for k in range(n):
                element = flip @ rotation_z(2 * np.pi * k / n) @ mirror
                element[np.abs(element) < 1e-15] = 0.0
                elements.append(element)
    return SymGroup(
        n=n,
        elements=tuple(elements),
        planes=tuple(plane_normal(i, n) for i in range(n + 1)),
    )


def orbit(end: EndDescriptor, group: SymGroup, tol: float = 1e-6) -> list[EndDescriptor]:
    """Images of ``end`` under the group, deduplicated by normal and axis."""
    images: list[EndDescriptor] = []
    for g in group.elements:
        image = end.transformed(g)
        if not any(image.same_end(other, tol) for other in images):
            images.append(image)
    return images


def _membership(value: float, tol_degrees: float, what: str) -> bool:
    """Classify an angle in degrees as inside, outside or ambiguous."""
    if value < tol_degrees:
        return True
    if value < AMBIGUITY_FACTOR * tol_degrees:
        raise AmbiguousCase(
            f"{what} is within the ambiguity band",
            {"angle_degrees": value, "tolerance_degrees": tol_degrees},
        )
    return False


def _off_plane_degrees(vector: Vec3R, normal: Vec3R) -> float:
    return float(np.degrees(np.arcsin(np.clip(abs(float(vector @ normal)), 0.0, 1.0))))


def _axis_in_plane(end: EndDescriptor, normal: Vec3R, tol_degrees: float) -> bool:
    point, direction = end.canonical_axis()
    angle = _off_plane_degrees(direction, normal)
    # Offsets of the axis point count as angles seen from unit distance.
    offset = float(np.degrees(np.arctan(abs(float(point @ normal)))))
    return _membership(max(angle, offset), tol_degrees, "Axis membership in a mirror plane")


def case_of_end(end: EndDescriptor, group: SymGroup, tol_degrees: float = CASE_ANGLE_DEGREES) -> int:
    """
    Case 1..6 of an end by its normal and axis.

    1: normal neither vertical nor horizontal. 2: horizontal, in no P_i with
    i >= 1. 3: horizontal and in some P_i with its axis outside it. 4:
    horizontal and in some P_i together with its axis. 5: vertical with an
    axis other than the x3-axis. 6: vertical on the x3-axis.
    """
    v = end.normal
    vertical = _membership(
        float(np.degrees(np.arccos(np.clip(abs(float(v @ E3)), 0.0, 1.0)))),
        tol_degrees,
        "Vertical normal",
    )
    if vertical:
        point, direction = end.canonical_axis()
        on_axis = _membership(
            max(
                float(np.degrees(np.arccos(np.clip(abs(float(direction @ E3)), 0.0, 1.0)))),
                float(np.degrees(np.arctan(np.linalg.norm(point)))),
            ),
            tol_degrees,
            "Axis on the x3-axis",
        )
        return 6 if on_axis else 5
    horizontal = _membership(_off_plane_degrees(v, E3), tol_degrees, "Horizontal normal")
    if not horizontal:
        return 1
    containing = [
        i
        for i in range(1, group.n + 1)
        if _membership(_off_plane_degrees(v, group.planes[i]), tol_degrees, "Normal in a mirror plane")
    ]
    if not containing:
        return 2
    if any(_axis_in_plane(end, group.planes[i], tol_degrees) for i in containing):
        return 4
    return 3


EXPECTED_SIZE = {1: "2n", 2: "2n", 3: "2n", 4: "n", 5: "2n", 6: "2"}


def orbit_of_end(
    end: EndDescriptor, group: SymGroup, tol_degrees: float = CASE_ANGLE_DEGREES
) -> tuple[int, int]:
    """
    Orbit size and case id of an end.

    Raises:
        FreeOrbit: If no group element other than the identity fixes the end
        AmbiguousCase: If a membership test falls inside the tolerance band
    """
    images = orbit(end, group, tol=np.radians(tol_degrees))
    if len(images) == group.order:
        raise FreeOrbit(
            "End has a trivial stabilizer; its orbit would hold 4n ends",
            {"orbit": len(images)},
        )
    case = case_of_end(end, group, tol_degrees)
    expected = {"2n": 2 * group.n, "n": group.n, "2": 2}[EXPECTED_SIZE[case]]
    if len(images) != expected:
        logger.warning(
            "End in case %d has orbit %d, expected %d", case, len(images), expected
        )
    return len(images), case


def orbits(
    ends: list[EndDescriptor], group: SymGroup, tol_degrees: float = CASE_ANGLE_DEGREES
) -> tuple[list[Orbit], int]:
    """
    Close a set of ends under the group and split it into orbits.

    Returns:
        The orbits and the number of ends added by the closure
    """
    tol = np.radians(tol_degrees)
    result: list[Orbit] = []
    seen: list[EndDescriptor] = []
    for end in ends:
        if any(end.same_end(other, tol) for other in seen):
            continue
        _, case = orbit_of_end(end, group, tol_degrees)
        members = orbit(end, group, tol)
        seen.extend(members)
        result.append(Orbit(case=case, ends=tuple(members)))
    added = len(seen) - len(ends)
    return result, max(added, 0)
