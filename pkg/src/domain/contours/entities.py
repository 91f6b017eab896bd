"""
Contour entities: polygonal contours and the family parameter variants.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import StrEnum
from typing import ClassVar, TypeAlias

import numpy as np

from src.domain.shared.exceptions import InvalidParams
from src.domain.shared.types import Points, Vec3R, VectorLike, as_vec3, unit


@dataclass(frozen=True, eq=False)
class Ray:
    """Half-line ``base + s * direction``, s >= 0. Also used for complete lines."""

    base: Vec3R
    direction: Vec3R

    def __post_init__(self) -> None:
        object.__setattr__(self, "base", as_vec3(self.base))
        object.__setattr__(self, "direction", unit(self.direction))

    @classmethod
    def of(cls, base: VectorLike, direction: VectorLike) -> Ray:
        return cls(as_vec3(base), as_vec3(direction))


@dataclass(frozen=True, eq=False)
class PolyContour:
    """
    Polygonal contour, truncated (closed) or limit (open, with rays/lines).

    Args:
        vertices: Polygon vertices of shape (k, 3)
        closed: True for a truncated contour, which joins the last vertex
            back to the first
        rays: Rays attached to vertices of an open chain
        lines: Complete lines belonging to a limit contour
        truncation: Truncation radius R; None for a limit contour
        labels: One label per vertex
        family: Family tag of the builder that produced the contour
    """

    vertices: Points
    closed: bool
    rays: tuple[Ray, ...] = ()
    lines: tuple[Ray, ...] = ()
    truncation: float | None = None
    labels: tuple[str, ...] = ()
    family: str = ""

    def __post_init__(self) -> None:
        vertices = np.asarray(self.vertices, dtype=np.float64).reshape(-1, 3)
        if not np.all(np.isfinite(vertices)):
            raise InvalidParams("Contour vertices must be finite")
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "rays", tuple(self.rays))
        object.__setattr__(self, "lines", tuple(self.lines))
        labels = tuple(self.labels) or tuple(f"v{i + 1}" for i in range(len(vertices)))
        if len(labels) != len(vertices):
            raise InvalidParams("One label per vertex is required")
        object.__setattr__(self, "labels", labels)
        if not self.closed and not (self.rays or self.lines):
            raise InvalidParams("A limit contour needs at least one ray or line")

    @property
    def is_limit(self) -> bool:
        return not self.closed

    def segments(self) -> list[tuple[Vec3R, Vec3R]]:
        v = self.vertices
        count = len(v) if self.closed else len(v) - 1
        return [(v[i], v[(i + 1) % len(v)]) for i in range(max(count, 0))]

    def segment_labels(self) -> list[str]:
        n = len(self.labels)
        count = n if self.closed else n - 1
        return [f"{self.labels[i]}:{self.labels[(i + 1) % n]}" for i in range(max(count, 0))]

    def vertex(self, label: str) -> Vec3R:
        return self.vertices[self.labels.index(label)]

    def diameter(self) -> float:
        v = self.vertices
        return float(np.linalg.norm(v.max(axis=0) - v.min(axis=0))) if len(v) else 0.0

    def perimeter(self) -> float:
        return float(sum(np.linalg.norm(b - a) for a, b in self.segments()))


# =============================================================================
# Family specifications
# =============================================================================


class FamilyKind(StrEnum):
    JM = "JM"
    TETROID = "Tetroid"
    P0 = "P0"
    PG = "Pg"
    JMV = "JMV"
    AW = "AW"
    AA = "AA"


def _require(condition: bool, message: str, **details: float) -> None:
    if not condition:
        raise InvalidParams(message, dict(details))


def _require_n(n: int) -> None:
    _require(isinstance(n, int) and n >= 2, "n must be an integer >= 2", n=n)


@dataclass(frozen=True)
class JM:
    """Jorge-Meeks n-oid family."""

    n: int
    kind: ClassVar[FamilyKind] = FamilyKind.JM

    def validate(self) -> None:
        _require_n(self.n)


@dataclass(frozen=True)
class Tetroid:
    """Tetroid; its symmetry group is not dihedral, so no n is carried."""

    kind: ClassVar[FamilyKind] = FamilyKind.TETROID

    def validate(self) -> None:
        return None


@dataclass(frozen=True)
class P0:
    """Genus-zero prismoid with tilted ends."""

    n: int
    theta: float
    s: float = 1.0
    t: float = 1.0
    kind: ClassVar[FamilyKind] = FamilyKind.P0

    def validate(self) -> None:
        _require_n(self.n)
        _require(0 < self.theta < np.pi / 2, "theta must lie in (0, pi/2)", theta=self.theta)
        _require(self.s > 0 and self.t > 0, "s and t must be positive", s=self.s, t=self.t)


@dataclass(frozen=True)
class Pg:
    """Higher-genus prismoid with tilted ends."""

    n: int
    theta: float
    s: float = 1.0
    t: float = 1.0
    u: float = 1.0
    kind: ClassVar[FamilyKind] = FamilyKind.PG

    def validate(self) -> None:
        _require_n(self.n)
        _require(0 < self.theta < np.pi / 2, "theta must lie in (0, pi/2)", theta=self.theta)
        _require(
            self.s > 0 and self.t > 0 and self.u > 0,
            "s, t and u must be positive",
            s=self.s,
            t=self.t,
            u=self.u,
        )


@dataclass(frozen=True)
class JMV:
    """Jorge-Meeks n-oid with two added vertical ends."""

    n: int
    w: float
    kind: ClassVar[FamilyKind] = FamilyKind.JMV

    def validate(self) -> None:
        _require_n(self.n)
        _require(self.w > 0, "w must be positive", w=self.w)


@dataclass(frozen=True)
class AW:
    """Two alternating orbits of horizontal ends with weight ratio w."""

    n: int
    w: float
    kind: ClassVar[FamilyKind] = FamilyKind.AW

    def validate(self) -> None:
        _require_n(self.n)
        _require(self.w > 0, "w must be positive", w=self.w)


@dataclass(frozen=True)
class AA:
    """Horizontal ends at alternating angles theta and 2pi/n - theta."""

    n: int
    theta: float
    s: float = 1.0
    t: float = 1.0
    kind: ClassVar[FamilyKind] = FamilyKind.AA

    def validate(self) -> None:
        _require_n(self.n)
        _require(0 < self.theta < np.pi / self.n, "theta must lie in (0, pi/n)", theta=self.theta)
        _require(self.s > 0 and self.t > 0, "s and t must be positive", s=self.s, t=self.t)


FamilySpec: TypeAlias = JM | Tetroid | P0 | Pg | JMV | AW | AA

FAMILY_TYPES: dict[FamilyKind, type] = {
    FamilyKind.JM: JM,
    FamilyKind.TETROID: Tetroid,
    FamilyKind.P0: P0,
    FamilyKind.PG: Pg,
    FamilyKind.JMV: JMV,
    FamilyKind.AW: AW,
    FamilyKind.AA: AA,
}


@dataclass(frozen=True)
class ContourReport:
    """Outcome of :func:`validate_contour`; failures are listed, never raised."""

    jordan: bool
    angles: dict[str, float]
    slab: tuple[tuple[float, float], ...]
    orientation: str
    agreement_radius: float | None = None
    failures: tuple[str, ...] = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return not self.failures
