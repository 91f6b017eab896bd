"""
Symmetry entities: the group D_n x Z_2, end descriptors and classifier results.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import StrEnum

import numpy as np

from src.domain.shared.exceptions import InvalidEnd
from src.domain.shared.types import Matrix3, Vec3R, VectorLike, as_vec3

ORTHOGONALITY_TOLERANCE = 1e-14
WEIGHT_PARALLEL_DEGREES = 1.0


@dataclass(frozen=True, eq=False)
class SymGroup:
    """
    Finite subgroup of O(3) with its distinguished mirror planes.

    Args:
        n: Order of the rotation about the x3-axis
        elements: The 4n group elements
        planes: Unit normals of the mirror planes P_0 .. P_n
    """

    n: int
    elements: tuple[Matrix3, ...]
    planes: tuple[Vec3R, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    def index_of(self, matrix: Matrix3, tol: float = 1e-9) -> int | None:
        for index, element in enumerate(self.elements):
            if np.allclose(element, matrix, atol=tol):
                return index
        return None

    def is_closed(self, tol: float = 1e-9) -> bool:
        return all(
            self.index_of(a @ b, tol) is not None for a in self.elements for b in self.elements
        )

    def is_orthogonal(self, tol: float = ORTHOGONALITY_TOLERANCE) -> bool:
        identity = np.eye(3)
        return all(np.abs(g @ g.T - identity).max() <= tol for g in self.elements)

    def mirror_normals(self) -> list[Vec3R]:
        """Normals of every reflection in the group, one per plane."""
        normals: list[Vec3R] = []
        for g in self.elements:
            if np.linalg.det(g) > 0 or not np.isclose(np.trace(g), 1.0):
                continue
            values, vectors = np.linalg.eigh(0.5 * (g + g.T))
            normal = vectors[:, int(np.argmin(values))]
            if not any(abs(float(normal @ m)) > 1 - 1e-9 for m in normals):
                normals.append(normal)
        return normals


@dataclass(frozen=True, eq=False)
class EndDescriptor:
    """
    Catenoid end: limiting normal, central axis line and flux vector.

    Raises:
        InvalidEnd: If a vector is zero or not finite, or the weight is not
            parallel to the normal within one degree
    """

    normal: Vec3R
    axis_point: Vec3R
    axis_direction: Vec3R
    weight: Vec3R

    def __post_init__(self) -> None:
        try:
            normal = as_vec3(self.normal)
            point = as_vec3(self.axis_point)
            direction = as_vec3(self.axis_direction)
            weight = as_vec3(self.weight)
        except ValueError as exc:
            raise InvalidEnd(str(exc))
        for name, vec in (("normal", normal), ("axis direction", direction)):
            if np.linalg.norm(vec) == 0:
                raise InvalidEnd(f"End {name} must be nonzero")
        if np.linalg.norm(weight) == 0:
            raise InvalidEnd("A catenoid end has a nonzero weight")
        normal = normal / np.linalg.norm(normal)
        direction = direction / np.linalg.norm(direction)
        cosine = abs(float(normal @ weight)) / float(np.linalg.norm(weight))
        if np.degrees(np.arccos(np.clip(cosine, 0.0, 1.0))) > WEIGHT_PARALLEL_DEGREES:
            raise InvalidEnd(
                "End weight must be parallel to its normal",
                {"normal": normal.tolist(), "weight": weight.tolist()},
            )
        object.__setattr__(self, "normal", normal)
        object.__setattr__(self, "axis_point", point)
        object.__setattr__(self, "axis_direction", direction)
        object.__setattr__(self, "weight", weight)

    @classmethod
    def radial(cls, normal: VectorLike, weight: float) -> EndDescriptor:
        """End whose axis passes through the origin along its normal."""
        unit_normal = as_vec3(normal) / np.linalg.norm(as_vec3(normal))
        return cls(unit_normal, np.zeros(3), unit_normal, weight * unit_normal)

    def transformed(self, g: Matrix3) -> EndDescriptor:
        return EndDescriptor(
            normal=g @ self.normal,
            axis_point=g @ self.axis_point,
            axis_direction=g @ self.axis_direction,
            weight=g @ self.weight,
        )

    def canonical_axis(self) -> tuple[Vec3R, Vec3R]:
        """Axis as (closest point to the origin, direction with a positive leading component)."""
        d = self.axis_direction
        leading = d[np.argmax(np.abs(d) > 1e-12)]
        d = d if leading > 0 else -d
        p = self.axis_point - (self.axis_point @ d) * d
        return p, d

    def same_end(self, other: EndDescriptor, tol: float) -> bool:
        """Same normal and same axis line within ``tol``."""
        p, d = self.canonical_axis()
        q, e = other.canonical_axis()
        scale = max(1.0, float(np.linalg.norm(p)), float(np.linalg.norm(q)))
        return (
            np.linalg.norm(self.normal - other.normal) < tol
            and np.linalg.norm(d - e) < tol
            and np.linalg.norm(p - q) < tol * scale
        )


@dataclass(frozen=True)
class Orbit:
    case: int
    ends: tuple[EndDescriptor, ...]

    @property
    def size(self) -> int:
        return len(self.ends)


class Classification(StrEnum):
    JM = "JM"
    P0 = "P0"
    JMV = "JMV"
    AW = "AW"
    AA = "AA"
    CATENOID = "Catenoid"
    UNCLASSIFIABLE = "Unclassifiable"


@dataclass(frozen=True)
class ClassificationResult:
    """
    Classifier verdict.

    ``parameters`` holds the family parameters read off the ends: ``n``,
    ``theta`` for P0 and AA, ``w`` for AW and JMV.
    """

    kind: Classification
    orbits: tuple[Orbit, ...] = ()
    parameters: dict[str, float] = field(default_factory=dict)
    added_ends: int = 0
    reason: str | None = None

    def record(self) -> str:
        """Single-line tagged record, e.g. ``VERDICT JM n=3``."""
        fields = " ".join(f"{k}={v:.12g}" for k, v in sorted(self.parameters.items()))
        parts = ["VERDICT", self.kind.value]
        if fields:
            parts.append(fields)
        if self.reason:
            parts.append(f"reason={self.reason!r}")
        return " ".join(parts)


@dataclass(frozen=True)
class EndAsymptotics:
    """Coefficients of ``a log r + b + (c1 x1 + c2 x2) / r^2``."""

    a: float
    b: float
    c1: float
    c2: float
    residual: float

    @property
    def is_catenoid(self) -> bool:
        return abs(self.a) > 10 * self.residual
