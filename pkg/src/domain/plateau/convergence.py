"""
Truncation driver: solve on growing contours and check that the solutions
settle down near the origin.
"""
import logging
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from src.domain.contours.builders import build_contour, limit_contour
from src.domain.contours.entities import FamilySpec, PolyContour
from src.domain.contours.validation import agreement_radius
from src.domain.plateau.entities import ConvergenceReport, SolverConfig, TriMesh
from src.domain.plateau.geometry import point_to_mesh_distance
from src.domain.plateau.solver import solve_plateau
from src.domain.plateau.triangulation import triangulate_disk
from src.domain.shared.exceptions import EmptyLimit
from src.domain.shared.types import Vec3R

logger = logging.getLogger(__name__)

WITNESS_RADIUS = 0.5


@dataclass(frozen=True)
class WitnessBall:
    center: Vec3R
    radius: float = WITNESS_RADIUS

    def hits(self, mesh: TriMesh) -> bool:
        """True if a vertex off the boundary lies inside the ball."""
        interior = ~mesh.boundary_mask()
        distances = np.linalg.norm(mesh.vertices[interior] - self.center, axis=1)
        return bool(distances.size and distances.min() < self.radius)


def default_witness(limit: PolyContour) -> WitnessBall:
    """Ball about the midpoint of the first limit segment, or its only vertex."""
    v = limit.vertices
    center = 0.5 * (v[0] + v[1]) if len(v) > 1 else v[0]
    return WitnessBall(center=np.asarray(center, dtype=np.float64))


def cauchy_deviation(coarse: TriMesh, fine: TriMesh, radius: float) -> float:
    """Symmetric vertex-to-mesh deviation between two solves inside a ball."""
    deviations = [0.0]
    for source, target in ((coarse, fine), (fine, coarse)):
        near = np.linalg.norm(source.vertices, axis=1) < radius
        if near.any():
            deviations.append(float(point_to_mesh_distance(source.vertices[near], target).max()))
    return max(deviations)


def converge_sequence(
    family: FamilySpec,
    schedule: Sequence[float],
    cfg: SolverConfig | None = None,
    witness: WitnessBall | None = None,
) -> tuple[TriMesh, list[ConvergenceReport]]:
    """
    Solve on the truncated contours of ``family`` for every radius in ``schedule``.

    Each report carries the truncation radius, whether the witness ball was hit
    and, from the second level on, the deviation from the previous solve
    inside the ball of radius ``schedule[0] / 2``.

    Args:
        family: Family parameters
        schedule: Strictly increasing truncation radii, at least three
        cfg: Solver settings
        witness: Ball every solve must meet; defaults to one on the limit contour

    Returns:
        The solve at the largest radius and one report per radius

    Raises:
        ValueError: If the schedule is too short or not increasing
        EmptyLimit: If a solve misses the witness ball or its contour comes too close
    """
    radii = [float(r) for r in schedule]
    if len(radii) < 3 or any(b <= a for a, b in zip(radii, radii[1:])):
        raise ValueError("Schedule must hold at least three strictly increasing radii")
    cfg = cfg or SolverConfig()
    limit = limit_contour(family)
    witness = witness or default_witness(limit)
    ball = radii[0] / 2
    reports: list[ConvergenceReport] = []
    previous: TriMesh | None = None
    mesh: TriMesh | None = None
    for R in radii:
        contour = build_contour(family, R)
        # Contour pieces off the limit must keep away from the witness ball.
        clearance = agreement_radius(contour, limit) - float(np.linalg.norm(witness.center))
        mesh, report = solve_plateau(triangulate_disk(contour, cfg.edge_length), cfg)
        hit = witness.hits(mesh)
        if not hit or clearance <= witness.radius:
            raise EmptyLimit(
                f"Solve at R={R:g} misses the witness ball",
                {"R": R, "center": witness.center.tolist(), "radius": witness.radius, "clearance": clearance},
            )
        deviation = cauchy_deviation(previous, mesh, ball) if previous is not None else None
        reports.append(report.with_truncation(R, deviation, hit))
        logger.info("Truncation R=%g: area=%.8g deviation=%s", R, report.final.area, deviation)
        previous = mesh
    assert mesh is not None
    return mesh, reports
