"""
Minimal surface equation graphs over convex planar domains.

The equation ``div(grad f / sqrt(1 + |grad f|^2)) = 0`` is discretized on a
uniform grid in conservation form and solved by damped Picard iteration:
the face coefficients are frozen, the resulting linear system is solved, and
the update is relaxed.
"""
from __future__ import annotations

import logging
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import RegularGridInterpolator
from scipy.sparse import coo_matrix
from scipy.sparse.linalg import spsolve

from src.domain.plateau.entities import TriMesh
from src.domain.shared.exceptions import NoConvergence, NonConvexDomain

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-8
DEFAULT_DAMPING = 1.0
DEFAULT_MAX_ITERATIONS = 500


@dataclass(frozen=True)
class BoundaryData:
    """
    Boundary heights on a polygon, possibly with jump discontinuities.

    Args:
        values: Maps boundary points of shape (m, 2) to heights of shape (m,)
        jumps: Boundary points where ``values`` jumps; the data are blended
            linearly across one grid cell on either side
    """

    values: Callable[[np.ndarray], np.ndarray]
    jumps: tuple[tuple[float, float], ...] = field(default_factory=tuple)

    @classmethod
    def constant(cls, value: float) -> BoundaryData:
        return cls(lambda p: np.full(len(p), float(value)))

    @classmethod
    def affine(cls, a: float, b: float, c: float = 0.0) -> BoundaryData:
        return cls(lambda p: a * p[:, 0] + b * p[:, 1] + c)


@dataclass(frozen=True, eq=False)
class HeightField:
    """Grid solution; ``values[i, j]`` is the height at ``(x[i], y[j])``."""

    x: np.ndarray
    y: np.ndarray
    values: np.ndarray
    inside: np.ndarray
    residual: float
    iterations: int

    @property
    def spacing(self) -> float:
        return float(self.x[1] - self.x[0])

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        """Bilinear interpolation at points of shape (m, 2)."""
        interpolator = RegularGridInterpolator(
            (self.x, self.y), self.values, bounds_error=False, fill_value=None
        )
        return interpolator(np.asarray(points, dtype=np.float64).reshape(-1, 2))

    def to_mesh(self) -> TriMesh:
        """Graph mesh over the grid cells whose corners all carry values."""
        nx, ny = self.values.shape
        grid_x, grid_y = np.meshgrid(self.x, self.y, indexing="ij")
        vertices = np.column_stack([grid_x.ravel(), grid_y.ravel(), self.values.ravel()])
        known = np.isfinite(self.values)
        triangles = []
        for i in range(nx - 1):
            for j in range(ny - 1):
                if known[i : i + 2, j : j + 2].all():
                    a, b = i * ny + j, (i + 1) * ny + j
                    c, d = (i + 1) * ny + j + 1, i * ny + j + 1
                    triangles.extend([(a, b, c), (a, c, d)])
        used = np.unique(np.array(triangles, dtype=np.int64))
        remap = -np.ones(len(vertices), dtype=np.int64)
        remap[used] = np.arange(len(used))
        return TriMesh(vertices=vertices[used], triangles=remap[np.array(triangles)])


def check_convex(polygon: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """
    Return the polygon counterclockwise.

    Raises:
        NonConvexDomain: If the polygon is not strictly convex
    """
    poly = np.asarray(polygon, dtype=np.float64).reshape(-1, 2)
    if len(poly) < 3:
        raise NonConvexDomain("A domain needs at least three vertices", {"vertices": len(poly)})
    edges = np.roll(poly, -1, axis=0) - poly
    turns = edges[:, 0] * np.roll(edges, -1, axis=0)[:, 1] - edges[:, 1] * np.roll(edges, -1, axis=0)[:, 0]
    scale = tol * float(np.abs(edges).max()) ** 2
    if np.all(turns > -scale) and turns.sum() > 0:
        return poly
    if np.all(turns < scale) and turns.sum() < 0:
        return poly[::-1]
    raise NonConvexDomain("Domain polygon is not convex", {"turns": turns.tolist()})


def _inside(poly: np.ndarray, points: np.ndarray, margin: float) -> np.ndarray:
    result = np.ones(len(points), dtype=bool)
    for a, b in zip(poly, np.roll(poly, -1, axis=0)):
        edge = b - a
        normal = np.array([edge[1], -edge[0]]) / np.linalg.norm(edge)
        result &= (points - a) @ normal < -margin
    return result


def _project_to_boundary(poly: np.ndarray, points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Closest boundary points and their arclength positions."""
    best = np.full(len(points), np.inf)
    closest = np.zeros_like(points)
    position = np.zeros(len(points))
    offset = 0.0
    for a, b in zip(poly, np.roll(poly, -1, axis=0)):
        edge = b - a
        length = float(np.linalg.norm(edge))
        s = np.clip((points - a) @ edge / length**2, 0.0, 1.0)
        candidate = a + s[:, None] * edge
        dist = np.linalg.norm(points - candidate, axis=1)
        better = dist < best
        best[better] = dist[better]
        closest[better] = candidate[better]
        position[better] = offset + s[better] * length
        offset += length
    return closest, position


def _point_at(poly: np.ndarray, position: np.ndarray) -> np.ndarray:
    lengths = np.linalg.norm(np.roll(poly, -1, axis=0) - poly, axis=1)
    starts = np.concatenate([[0.0], np.cumsum(lengths)[:-1]])
    position = np.mod(position, lengths.sum())
    index = np.clip(np.searchsorted(starts, position, side="right") - 1, 0, len(poly) - 1)
    s = (position - starts[index]) / lengths[index]
    return poly[index] + s[:, None] * (np.roll(poly, -1, axis=0)[index] - poly[index])


def boundary_values(poly: np.ndarray, data: BoundaryData, points: np.ndarray, h: float) -> np.ndarray:
    """Dirichlet values at grid nodes, with jumps blended over one cell."""
    closest, position = _project_to_boundary(poly, points)
    values = np.asarray(data.values(closest), dtype=np.float64)
    if data.jumps:
        perimeter = float(np.linalg.norm(np.roll(poly, -1, axis=0) - poly, axis=1).sum())
        _, jump_positions = _project_to_boundary(poly, np.array(data.jumps, dtype=np.float64))
        for sigma in jump_positions:
            offset = (position - sigma + perimeter / 2) % perimeter - perimeter / 2
            near = np.abs(offset) < h
            if not near.any():
                continue
            before = data.values(_point_at(poly, np.array([sigma - h])))[0]
            after = data.values(_point_at(poly, np.array([sigma + h])))[0]
            weight = (offset[near] + h) / (2 * h)
            values[near] = (1 - weight) * before + weight * after
    return values


def _coefficients(f: np.ndarray, h: float) -> tuple[np.ndarray, np.ndarray]:
    """Face coefficients ``1/sqrt(1 + |grad f|^2)`` on x-faces and y-faces."""
    gx = np.gradient(f, h, axis=0)
    gy = np.gradient(f, h, axis=1)
    fx = np.diff(f, axis=0) / h
    fy_at_x = 0.5 * (gy[1:, :] + gy[:-1, :])
    fy = np.diff(f, axis=1) / h
    fx_at_y = 0.5 * (gx[:, 1:] + gx[:, :-1])
    return 1 / np.sqrt(1 + fx**2 + fy_at_x**2), 1 / np.sqrt(1 + fy**2 + fx_at_y**2)


def _flux_residual(f: np.ndarray, cx: np.ndarray, cy: np.ndarray, inside: np.ndarray) -> float:
    div = np.zeros_like(f)
    flux_x = cx * np.diff(f, axis=0)
    flux_y = cy * np.diff(f, axis=1)
    div[:-1, :] += flux_x
    div[1:, :] -= flux_x
    div[:, :-1] += flux_y
    div[:, 1:] -= flux_y
    return float(np.abs(div[inside]).max()) if inside.any() else 0.0


def solve_graph_mse(
    domain: Sequence[Sequence[float]] | np.ndarray,
    boundary: BoundaryData,
    h: float,
    tol: float = DEFAULT_TOLERANCE,
    damping: float = DEFAULT_DAMPING,
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
) -> HeightField:
    """
    Solve the minimal surface equation over a convex polygon.

    The residual is the largest discrete flux divergence over interior nodes.
    Grid nodes outside the domain take the boundary value of their closest
    boundary point.

    Args:
        domain: Convex polygon vertices of shape (k, 2)
        boundary: Boundary data
        h: Grid spacing
        tol: Residual tolerance
        damping: Relaxation factor in (0, 1]
        max_iterations: Picard iteration cap

    Returns:
        HeightField with NaN outside the domain

    Raises:
        NonConvexDomain: If the domain is not convex
        NoConvergence: If the residual stays above ``tol``
    """
    if h <= 0 or not 0 < damping <= 1:
        raise ValueError("h must be positive and damping must lie in (0, 1]")
    poly = check_convex(domain)
    lo, hi = poly.min(axis=0), poly.max(axis=0)
    x = np.arange(lo[0] - h, hi[0] + 1.5 * h, h)
    y = np.arange(lo[1] - h, hi[1] + 1.5 * h, h)
    grid_x, grid_y = np.meshgrid(x, y, indexing="ij")
    nodes = np.column_stack([grid_x.ravel(), grid_y.ravel()])
    inside = _inside(poly, nodes, 1e-9 * h).reshape(grid_x.shape)
    neighbour = np.zeros_like(inside)
    neighbour[1:, :] |= inside[:-1, :]
    neighbour[:-1, :] |= inside[1:, :]
    neighbour[:, 1:] |= inside[:, :-1]
    neighbour[:, :-1] |= inside[:, 1:]
    dirichlet = neighbour & ~inside

    f = np.zeros(grid_x.shape)
    # Nodes beyond the Dirichlet layer only feed tangential differences.
    f[~inside] = boundary_values(poly, boundary, nodes[~inside.ravel()], h)
    # Initial guess: mean boundary height.
    f[inside] = f[dirichlet].mean() if dirichlet.any() else 0.0

    index = -np.ones(grid_x.shape, dtype=np.int64)
    index[inside] = np.arange(int(inside.sum()))
    cx, cy = _coefficients(f, h)
    residual = _flux_residual(f, cx, cy, inside)
    iterations = 0
    while residual >= tol and iterations < max_iterations:
        iterations += 1
        f = f + damping * (_picard_solve(f, cx, cy, inside, index) - f)
        cx, cy = _coefficients(f, h)
        residual = _flux_residual(f, cx, cy, inside)
        logger.debug("MSE iteration %d residual %.3e", iterations, residual)
    values = np.where(inside | dirichlet, f, np.nan)
    field_ = HeightField(x=x, y=y, values=values, inside=inside, residual=residual, iterations=iterations)
    if residual >= tol:
        raise NoConvergence(
            "Minimal surface equation solve did not converge",
            {"best": field_, "residual": residual, "iterations": iterations},
        )
    return field_


def _picard_solve(
    f: np.ndarray, cx: np.ndarray, cy: np.ndarray, inside: np.ndarray, index: np.ndarray
) -> np.ndarray:
    nx, ny = f.shape
    rows, cols, vals = [], [], []
    rhs = np.zeros(int(inside.sum()))
    for i, j in zip(*np.nonzero(inside)):
        row = index[i, j]
        diagonal = 0.0
        for ni, nj, coeff in (
            (i + 1, j, cx[i, j]),
            (i - 1, j, cx[i - 1, j]),
            (i, j + 1, cy[i, j]),
            (i, j - 1, cy[i, j - 1]),
        ):
            diagonal += coeff
            if inside[ni, nj]:
                rows.append(row)
                cols.append(index[ni, nj])
                vals.append(-coeff)
            else:
                rhs[row] += coeff * f[ni, nj]
        rows.append(row)
        cols.append(row)
        vals.append(diagonal)
    n = len(rhs)
    matrix = coo_matrix((vals, (rows, cols)), shape=(n, n)).tocsc()
    solution = f.copy()
    solution[inside] = spsolve(matrix, rhs)
    return solution
