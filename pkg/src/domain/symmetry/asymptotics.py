"""
End asymptotics and end extraction from extended meshes.
"""
import logging

import numpy as np

from src.domain.plateau.entities import TriMesh
from src.domain.plateau.flux import loop_flux
from src.domain.plateau.geometry import is_graph
from src.domain.shared.exceptions import InvalidEnd, NotAGraphEnd
from src.domain.shared.types import VectorLike, as_vec3, unit
from src.domain.symmetry.entities import EndAsymptotics, EndDescriptor

logger = logging.getLogger(__name__)

# Loops whose flux is below this fraction of their length are planar ends.
PLANAR_FLUX_RATIO = 1e-6


def _axis_frame(direction: VectorLike) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Right-handed frame whose third vector is ``direction``; e1, e2 for e3."""
    d = unit(direction)
    helper = np.array([1.0, 0.0, 0.0]) if abs(d[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    u = unit(helper - (helper @ d) * d)
    return u, np.cross(d, u), d


def fit_end_asymptotics(
    mesh: TriMesh, axis_point: VectorLike, axis_direction: VectorLike
) -> EndAsymptotics:
    """
    Fit ``a log r + b + (c1 x1 + c2 x2) / r^2`` to the height of an end.

    Heights and planar coordinates are taken in the frame of the axis; only
    the outer half of the samples by radius enter the least-squares fit.

    Raises:
        NotAGraphEnd: If the mesh does not project injectively onto the plane
            orthogonal to the axis
    """
    direction = unit(axis_direction)
    if not is_graph(mesh, direction):
        raise NotAGraphEnd("End region is not a graph over its axis plane")
    u, v, d = _axis_frame(direction)
    local = mesh.vertices - as_vec3(axis_point)
    x1, x2, height = local @ u, local @ v, local @ d
    r = np.hypot(x1, x2)
    outer = r >= np.median(r)
    outer &= r > 0
    r, x1, x2, height = r[outer], x1[outer], x2[outer], height[outer]
    design = np.column_stack([np.log(r), np.ones_like(r), x1 / r**2, x2 / r**2])
    coefficients, *_ = np.linalg.lstsq(design, height, rcond=None)
    residual = float(np.sqrt(np.mean((design @ coefficients - height) ** 2)))
    a, b, c1, c2 = (float(c) for c in coefficients)
    logger.debug("End fit a=%.6g b=%.6g c=(%.3g, %.3g) rms=%.3g", a, b, c1, c2, residual)
    return EndAsymptotics(a=a, b=b, c1=c1, c2=c2, residual=residual)


def ends_from_mesh(mesh: TriMesh) -> list[EndDescriptor]:
    """
    One catenoid end per boundary loop carrying flux.

    The weight is the loop's flux, the normal its direction and the axis runs
    through the loop centroid along the normal. Loops with negligible flux
    are planar ends and are skipped.
    """
    ends = []
    for loop in mesh.boundary_loops():
        points = mesh.vertices[loop]
        length = float(np.linalg.norm(np.roll(points, -1, axis=0) - points, axis=1).sum())
        weight = loop_flux(mesh, loop)
        if np.linalg.norm(weight) <= PLANAR_FLUX_RATIO * length:
            logger.info("Skipping planar end with %d boundary vertices", len(loop))
            continue
        normal = unit(weight)
        try:
            ends.append(EndDescriptor(normal, points.mean(axis=0), normal, weight))
        except InvalidEnd:
            logger.warning("Discarding invalid end at %s", points.mean(axis=0))
    return ends
