"""
Conjugation and period entities.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from src.domain.shared.types import Vec3R


@dataclass(frozen=True)
class ConjugateTolerances:
    """
    Thresholds of the conjugation and period stages.

    ``residual_threshold`` bounds curvature residual times mesh diameter;
    ``closure_tolerance`` bounds the per-face mismatch between the rotated
    edge field and the least-squares conjugate, relative to the face's mean
    edge length; ``period_tolerance`` is relative to the contour diameter.
    """

    residual_threshold: float = 1.0
    closure_tolerance: float = 0.25
    period_tolerance: float = 1e-3
    parallel_degrees: float = 5.0


@dataclass(frozen=True, eq=False)
class PlaneFit:
    """
    Total-least-squares plane ``normal . x = offset`` through an arc.

    ``degenerate`` marks straight arcs, which lie in a whole pencil of
    planes; ``direction`` is then the line direction and ``normal`` one of
    the pencil.
    """

    label: str
    normal: Vec3R
    offset: float
    rms: float
    centroid: Vec3R
    direction: Vec3R
    degenerate: bool = False

    def oriented(self, reference: Vec3R) -> PlaneFit:
        """The same plane with its normal on the side of ``reference``."""
        if float(self.normal @ reference) >= 0:
            return self
        return PlaneFit(
            label=self.label,
            normal=-self.normal,
            offset=-self.offset,
            rms=self.rms,
            centroid=self.centroid,
            direction=self.direction,
            degenerate=self.degenerate,
        )

    def signed_distance(self, point: Vec3R) -> float:
        return float(self.normal @ np.asarray(point) - self.offset)


@dataclass(frozen=True)
class PeriodResidual:
    """Residual components at one parameter point."""

    components: tuple[float, ...]
    parameters: dict[str, float] = field(default_factory=dict)
    diameter: float = 1.0

    def __post_init__(self) -> None:
        if not all(np.isfinite(c) for c in self.components):
            raise ValueError(f"Residual components must be finite: {self.components}")

    @property
    def norm(self) -> float:
        return float(max(abs(c) for c in self.components))

    def within(self, tolerance: float) -> bool:
        """True when every component is below ``tolerance`` times the diameter."""
        return self.norm < tolerance * self.diameter


@dataclass(frozen=True)
class HelicoidEndReport:
    ray_defect: float
    plane_defect: float
    ray_coplanar: bool
    planes_coplanar: bool

    @property
    def agreement(self) -> bool:
        return self.ray_coplanar == self.planes_coplanar


@dataclass(frozen=True)
class FeasibilityReport:
    """Outcome of the check that the segment p8-p17 lies above the curve alpha."""

    n: int
    w: float
    R: float
    feasible: bool
    clearance: float


@dataclass(frozen=True)
class ResidualTable:
    """Residual evaluations in scan order."""

    names: tuple[str, ...]
    rows: tuple[PeriodResidual, ...]

    def as_records(self) -> list[dict[str, float]]:
        records = []
        for row in self.rows:
            record = {name: row.parameters.get(name, float("nan")) for name in self.names}
            for index, component in enumerate(row.components):
                record[f"residual_{index}"] = component
            records.append(record)
        return records
