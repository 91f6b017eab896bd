"""
Initial disk meshes spanning polygonal contours, and 1-to-4 refinement.
"""
import logging

import numpy as np
from scipy.sparse.linalg import spsolve
from scipy.spatial import Delaunay

from src.domain.contours.entities import PolyContour
from src.domain.contours.validation import is_jordan
from src.domain.plateau.entities import TriMesh
from src.domain.plateau.geometry import cotangent_laplacian
from src.domain.shared.exceptions import NotJordan
from src.domain.shared.types import Faces, Points

logger = logging.getLogger(__name__)


def sample_boundary(contour: PolyContour, edge_length: float) -> tuple[Points, dict[str, tuple[int, ...]]]:
    """
    Sample a closed contour with spacing at most ``edge_length``.

    Returns:
        Boundary points in contour order and the vertex chain of every
        contour segment, keyed by its ``"pi:pj"`` label
    """
    points: list[np.ndarray] = []
    arcs: dict[str, tuple[int, ...]] = {}
    segments = contour.segments()
    for (a, b), label in zip(segments, contour.segment_labels()):
        pieces = max(1, int(np.ceil(np.linalg.norm(b - a) / edge_length - 1e-9)))
        start = len(points)
        for k in range(pieces):
            points.append(a + (b - a) * (k / pieces))
        chain = list(range(start, start + pieces)) + [start + pieces]
        arcs[label] = tuple(chain)
    total = len(points)
    # The last chain closes on the first sample.
    arcs = {label: tuple(i % total for i in chain) for label, chain in arcs.items()}
    return np.array(points), arcs


def _reference_disk(boundary_count: int) -> tuple[Points, int]:
    angles = 2 * np.pi * np.arange(boundary_count) / boundary_count
    circle = np.column_stack([np.cos(angles), np.sin(angles)])
    spacing = 2 * np.pi / boundary_count
    rows = np.arange(-1.0, 1.0 + spacing, spacing * np.sqrt(3) / 2)
    interior = []
    for row, y in enumerate(rows):
        xs = np.arange(-1.0, 1.0 + spacing, spacing) + (spacing / 2 if row % 2 else 0.0)
        interior.extend((x, y) for x in xs if np.hypot(x, y) < 1.0 - 0.5 * spacing)
    points = np.vstack([circle, np.array(interior).reshape(-1, 2)])
    return points, boundary_count


def _orient_ccw(points: Points, triangles: Faces) -> Faces:
    a, b, c = (points[triangles[:, k]] for k in range(3))
    signed = (b[:, 0] - a[:, 0]) * (c[:, 1] - a[:, 1]) - (b[:, 1] - a[:, 1]) * (c[:, 0] - a[:, 0])
    flipped = triangles.copy()
    flipped[signed < 0] = flipped[signed < 0][:, [0, 2, 1]]
    return flipped


def harmonic_extension(points: Points, triangles: Faces, boundary: np.ndarray, values: Points) -> Points:
    """
    Extend boundary values harmonically with the cotangent Laplacian of the
    planar reference mesh ``points``.
    """
    laplacian = cotangent_laplacian(points, triangles)
    free = np.setdiff1d(np.arange(len(points)), boundary)
    result = np.zeros((len(points), values.shape[1]))
    result[boundary] = values
    if len(free):
        system = laplacian[free][:, free].tocsc()
        rhs = -laplacian[free][:, boundary] @ values
        solved = spsolve(system, rhs)
        result[free] = solved.reshape(len(free), -1)
    return result


def triangulate_disk(contour: PolyContour, edge_length: float) -> TriMesh:
    """
    Disk mesh spanning a closed contour.

    The boundary samples the contour with spacing at most ``edge_length``;
    the interior comes from a Delaunay triangulation of a reference disk and
    is placed in space by harmonic extension of the boundary positions.

    Args:
        contour: Closed Jordan contour
        edge_length: Target boundary spacing

    Returns:
        TriMesh with fixed boundary vertices and one arc per contour segment

    Raises:
        NotJordan: If the contour is open or not a Jordan polygon
    """
    if not contour.closed or not is_jordan(contour.vertices, closed=True):
        raise NotJordan(
            "Contour is not a closed Jordan polygon",
            {"vertices": len(contour.vertices), "closed": contour.closed},
        )
    if edge_length <= 0:
        raise ValueError("edge_length must be positive")
    boundary_points, arcs = sample_boundary(contour, edge_length)
    reference, count = _reference_disk(len(boundary_points))
    triangles = _orient_ccw(reference, Delaunay(reference).simplices.astype(np.int64))
    boundary = np.arange(count)
    vertices = harmonic_extension(reference, triangles, boundary, boundary_points)
    fixed = np.zeros(len(vertices), dtype=bool)
    fixed[boundary] = True
    mesh = TriMesh(vertices=vertices, triangles=triangles, arcs=arcs, fixed=fixed)
    logger.debug("Triangulated %s contour: %r", contour.family or "custom", mesh)
    return mesh


def refine(mesh: TriMesh) -> TriMesh:
    """
    Split every triangle into four at its edge midpoints.

    Boundary midpoints are inserted into the arc chains and inherit the fixed
    flag when both edge ends are fixed.
    """
    edges = mesh.edges()
    index = {(int(i), int(j)): mesh.n_vertices + k for k, (i, j) in enumerate(edges)}
    midpoints = 0.5 * (mesh.vertices[edges[:, 0]] + mesh.vertices[edges[:, 1]])
    boundary = {tuple(sorted(map(int, e))) for e in mesh.boundary_edges()}
    fixed_mid = np.array(
        [(i, j) in boundary and bool(mesh.fixed[i] and mesh.fixed[j]) for i, j in index]
    ).reshape(-1)
    triangles = []
    for a, b, c in mesh.triangles.tolist():
        ab = index[(min(a, b), max(a, b))]
        bc = index[(min(b, c), max(b, c))]
        ca = index[(min(c, a), max(c, a))]
        triangles.extend([(a, ab, ca), (ab, b, bc), (ca, bc, c), (ab, bc, ca)])
    arcs = {}
    for label, chain in mesh.arcs.items():
        refined = [chain[0]]
        for i, j in zip(chain[:-1], chain[1:]):
            refined.extend([index[(min(i, j), max(i, j))], j])
        arcs[label] = tuple(refined)
    return TriMesh(
        vertices=np.vstack([mesh.vertices, midpoints]),
        triangles=np.array(triangles, dtype=np.int64),
        arcs=arcs,
        fixed=np.concatenate([mesh.fixed, fixed_mid]),
    )
