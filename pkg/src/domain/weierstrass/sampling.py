"""
Analytic mesh samples of Weierstrass data over polar parameter grids.

Samples serve as exact-family oracles for the discrete operators: the
conjugation, flux and extension code is checked against them.
"""
import logging
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from src.domain.plateau.entities import TriMesh
from src.domain.weierstrass.entities import LineSegment, WeierstrassData
from src.domain.weierstrass.quadrature import DEFAULT_TOLERANCE
from src.domain.weierstrass.services import immerse, path_integral

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SampledSurface:
    """A sampled mesh together with the parameter of each vertex."""

    mesh: TriMesh
    parameters: npt.NDArray[np.complex128]


def polar_grid(
    radii: Sequence[float], angles: Sequence[float], center: complex = 0j
) -> npt.NDArray[np.complex128]:
    """Grid points ``center + r e^{i theta}``, radius-major order."""
    r = np.asarray(radii, dtype=np.float64)[:, None]
    theta = np.asarray(angles, dtype=np.float64)[None, :]
    return (center + r * np.exp(1j * theta)).reshape(-1)


def sample_mesh(
    data: WeierstrassData,
    radii: Sequence[float],
    angles: Sequence[float],
    center: complex = 0j,
    periodic: bool = False,
    tol: float = DEFAULT_TOLERANCE,
) -> SampledSurface:
    """
    Immerse a polar parameter grid.

    Positions are accumulated chord by chord, starting with a segment from
    the basepoint to the first grid point, so the result is exact up to
    quadrature error wherever the integral is path independent on the grid.

    Args:
        data: Weierstrass data
        radii: Increasing radii
        angles: Increasing angles; with ``periodic`` the last column joins the first
        center: Center of the polar grid
        periodic: Close the grid around the full circle
        tol: Quadrature tolerance per unit length

    Returns:
        Sampled surface with arcs ``inner``, ``outer`` and, unless periodic,
        ``start`` and ``end``
    """
    n_r, n_t = len(radii), len(angles)
    z = polar_grid(radii, angles, center).reshape(n_r, n_t)
    x = np.zeros((n_r, n_t, 3))
    x[0, 0] = immerse(data, LineSegment(data.basepoint, z[0, 0]), tol)
    for j in range(1, n_r):
        x[j, 0] = x[j - 1, 0] + path_integral(data, LineSegment(z[j - 1, 0], z[j, 0]), tol).real
    for j in range(n_r):
        for k in range(1, n_t):
            chord = LineSegment(z[j, k - 1], z[j, k])
            x[j, k] = x[j, k - 1] + path_integral(data, chord, tol).real

    index = np.arange(n_r * n_t).reshape(n_r, n_t)
    columns = n_t if periodic else n_t - 1
    triangles = []
    for j in range(n_r - 1):
        for k in range(columns):
            k1 = (k + 1) % n_t
            a, b, c, d = index[j, k], index[j + 1, k], index[j + 1, k1], index[j, k1]
            triangles.append((a, b, c))
            triangles.append((a, c, d))

    arcs = {
        "inner": tuple(index[0].tolist()),
        "outer": tuple(index[-1].tolist()),
    }
    if periodic:
        arcs["inner"] += (int(index[0, 0]),)
        arcs["outer"] += (int(index[-1, 0]),)
    else:
        arcs["start"] = tuple(index[:, 0].tolist())
        arcs["end"] = tuple(index[:, -1].tolist())

    mesh = TriMesh(vertices=x.reshape(-1, 3), triangles=np.array(triangles), arcs=arcs)
    logger.debug("Sampled %s on a %dx%d grid", data.name or "data", n_r, n_t)
    return SampledSurface(mesh=mesh, parameters=z.reshape(-1))
