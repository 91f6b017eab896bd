"""
Discrete differential geometry on triangle meshes.

The cotangent Laplacian ``L`` is assembled so that ``(L X)_i`` is the area
gradient at vertex ``i``; dividing by the mixed Voronoi area gives the mean
curvature normal, up to a factor of two.
"""
import logging

import numpy as np
from scipy.sparse import coo_matrix, csr_matrix, diags
from scipy.spatial import cKDTree

from src.domain.plateau.entities import TriMesh
from src.domain.shared.exceptions import InvalidMesh
from src.domain.shared.types import Faces, Points, VectorLike, unit

logger = logging.getLogger(__name__)

GRAPH_TOLERANCE = 1e-10
_TINY = 1e-300


def _lift(points: Points) -> Points:
    points = np.asarray(points, dtype=np.float64)
    if points.shape[1] == 2:
        return np.column_stack([points, np.zeros(len(points))])
    return points


def triangle_areas(vertices: Points, triangles: Faces) -> np.ndarray:
    v = _lift(vertices)
    a, b, c = v[triangles[:, 0]], v[triangles[:, 1]], v[triangles[:, 2]]
    return 0.5 * np.linalg.norm(np.cross(b - a, c - a), axis=1)


def face_normals(vertices: Points, triangles: Faces) -> Points:
    """Unit normals following the triangle orientation; zero for degenerate faces."""
    v = _lift(vertices)
    a, b, c = v[triangles[:, 0]], v[triangles[:, 1]], v[triangles[:, 2]]
    n = np.cross(b - a, c - a)
    norms = np.linalg.norm(n, axis=1, keepdims=True)
    return np.divide(n, norms, out=np.zeros_like(n), where=norms > 0)


def area(mesh: TriMesh) -> float:
    return float(triangle_areas(mesh.vertices, mesh.triangles).sum())


def area_gradient(vertices: Points, triangles: Faces) -> tuple[float, Points]:
    """
    Total area and its gradient with respect to every vertex.

    The gradient equals ``L X`` for the cotangent Laplacian of the same
    positions; degenerate faces contribute nothing.
    """
    v = _lift(vertices)
    a, b, c = v[triangles[:, 0]], v[triangles[:, 1]], v[triangles[:, 2]]
    normals = np.cross(b - a, c - a)
    norms = np.linalg.norm(normals, axis=1, keepdims=True)
    units = np.divide(normals, norms, out=np.zeros_like(normals), where=norms > 0)
    gradient = np.zeros_like(v)
    np.add.at(gradient, triangles[:, 0], 0.5 * np.cross(units, c - b))
    np.add.at(gradient, triangles[:, 1], 0.5 * np.cross(units, a - c))
    np.add.at(gradient, triangles[:, 2], 0.5 * np.cross(units, b - a))
    return float(0.5 * norms.sum()), gradient


def cotangent_weights(vertices: Points, triangles: Faces) -> csr_matrix:
    """Symmetric weights ``W_ij = (cot a_ij + cot b_ij) / 2``, zero diagonal."""
    v = _lift(vertices)
    rows, cols, values = [], [], []
    for k in range(3):
        i, j, o = triangles[:, k], triangles[:, (k + 1) % 3], triangles[:, (k + 2) % 3]
        u, w = v[i] - v[o], v[j] - v[o]
        cross = np.linalg.norm(np.cross(u, w), axis=1)
        cot = np.einsum("ij,ij->i", u, w) / np.maximum(cross, _TINY)
        rows.extend([i, j])
        cols.extend([j, i])
        values.extend([0.5 * cot, 0.5 * cot])
    n = len(v)
    return coo_matrix(
        (np.concatenate(values), (np.concatenate(rows), np.concatenate(cols))), shape=(n, n)
    ).tocsr()


def cotangent_laplacian(vertices: Points, triangles: Faces) -> csr_matrix:
    """Positive semidefinite cotangent Laplacian ``L = D - W``."""
    weights = cotangent_weights(vertices, triangles)
    return (diags(np.asarray(weights.sum(axis=1)).ravel()) - weights).tocsr()


def corner_angles(vertices: Points, triangles: Faces) -> np.ndarray:
    """Interior angles of shape (M, 3), the k-th at vertex ``triangles[:, k]``."""
    v = _lift(vertices)
    angles = np.empty(triangles.shape, dtype=np.float64)
    for k in range(3):
        o, i, j = triangles[:, k], triangles[:, (k + 1) % 3], triangles[:, (k + 2) % 3]
        u, w = v[i] - v[o], v[j] - v[o]
        angles[:, k] = np.arctan2(
            np.linalg.norm(np.cross(u, w), axis=1), np.einsum("ij,ij->i", u, w)
        )
    return angles


def min_angle(mesh: TriMesh) -> float:
    if mesh.n_triangles == 0:
        return 0.0
    return float(corner_angles(mesh.vertices, mesh.triangles).min())


def mixed_areas(vertices: Points, triangles: Faces) -> np.ndarray:
    """
    Mixed Voronoi vertex areas.

    Non-obtuse triangles contribute their Voronoi regions; obtuse triangles
    give half their area to the obtuse corner and a quarter to the others.
    """
    v = _lift(vertices)
    angles = corner_angles(v, triangles)
    tri_area = triangle_areas(v, triangles)
    result = np.zeros(len(v))
    obtuse = angles.max(axis=1) > np.pi / 2
    for k in range(3):
        o, i, j = triangles[:, k], triangles[:, (k + 1) % 3], triangles[:, (k + 2) % 3]
        cot = 1.0 / np.tan(np.clip(angles[:, k], 1e-12, np.pi - 1e-12))
        length2 = np.einsum("ij,ij->i", v[j] - v[i], v[j] - v[i])
        voronoi = length2 * cot / 8.0
        np.add.at(result, i, np.where(obtuse, 0.0, voronoi))
        np.add.at(result, j, np.where(obtuse, 0.0, voronoi))
        share = np.where(angles[:, k] > np.pi / 2, 0.5, 0.25) * tri_area
        np.add.at(result, o, np.where(obtuse, share, 0.0))
    return result


def mean_curvature_normals(mesh: TriMesh) -> Points:
    """``(L X)_i / A_i``: twice the mean curvature times the normal."""
    laplacian = cotangent_laplacian(mesh.vertices, mesh.triangles)
    masses = mixed_areas(mesh.vertices, mesh.triangles)
    return (laplacian @ mesh.vertices) / np.maximum(masses, _TINY)[:, None]


def curvature_residual(mesh: TriMesh) -> float:
    """
    Largest norm of the mean curvature normal over free interior vertices.

    Returns 0.0 when every vertex is on the boundary or fixed.
    """
    free = ~(mesh.boundary_mask() | mesh.fixed)
    if not free.any():
        return 0.0
    return float(np.linalg.norm(mean_curvature_normals(mesh)[free], axis=1).max())


def angle_defects(mesh: TriMesh) -> np.ndarray:
    """``2 pi`` minus the angle sum at every vertex."""
    angles = corner_angles(mesh.vertices, mesh.triangles)
    sums = np.zeros(mesh.n_vertices)
    for k in range(3):
        np.add.at(sums, mesh.triangles[:, k], angles[:, k])
    return 2 * np.pi - sums


# =============================================================================
# Graph and embedding tests
# =============================================================================


def _plane_basis(direction: VectorLike) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    d = unit(direction)
    helper = np.eye(3)[int(np.argmin(np.abs(d)))]
    u = unit(np.cross(d, helper))
    return u, np.cross(d, u), d


def _segments_cross_2d(p: np.ndarray, q: np.ndarray, tol: float) -> np.ndarray:
    """Pairwise crossing or touching of the 2D segments p[i]q[i]."""

    def orient(a, b, c):
        value = (b[..., 0] - a[..., 0]) * (c[..., 1] - a[..., 1]) - (b[..., 1] - a[..., 1]) * (
            c[..., 0] - a[..., 0]
        )
        length = np.linalg.norm(b - a, axis=-1)
        return np.where(np.abs(value) <= tol * length, 0.0, np.sign(value))

    def within(a, b, c):
        lo, hi = np.minimum(a, b) - tol, np.maximum(a, b) + tol
        return np.all((c >= lo) & (c <= hi), axis=-1)

    a, b = p[:, None, :], q[:, None, :]
    c, d = p[None, :, :], q[None, :, :]
    o1, o2 = orient(a, b, c), orient(a, b, d)
    o3, o4 = orient(c, d, a), orient(c, d, b)
    proper = (o1 * o2 < 0) & (o3 * o4 < 0)
    touching = (
        ((o1 == 0) & within(a, b, c))
        | ((o2 == 0) & within(a, b, d))
        | ((o3 == 0) & within(c, d, a))
        | ((o4 == 0) & within(c, d, b))
    )
    return proper | touching


def _simple_loop_2d(points: np.ndarray, tol: float) -> bool:
    # Drop repeated samples; collinear runs are fine.
    keep = np.ones(len(points), dtype=bool)
    keep[1:] = np.linalg.norm(np.diff(points, axis=0), axis=1) > tol
    if len(points) > 1 and np.linalg.norm(points[0] - points[-1]) <= tol:
        keep[-1] = False
    loop = points[keep]
    k = len(loop)
    if k < 3:
        return False
    hits = _segments_cross_2d(loop, np.roll(loop, -1, axis=0), tol)
    idx = np.arange(k)
    gap = np.abs(idx[:, None] - idx[None, :])
    hits &= (gap > 1) & (gap < k - 1)
    return not bool(hits.any())


def is_graph(mesh: TriMesh, direction: VectorLike, tol: float = GRAPH_TOLERANCE) -> bool:
    """
    True when projection along ``direction`` is injective on the mesh.

    Non-degenerate projected triangles must all keep one orientation, each
    projected boundary loop must stay simple once repeated points are merged,
    and interior vertices must project to distinct points. Boundary segments
    parallel to ``direction`` project to points; the triangles on them may
    degenerate.
    """
    if mesh.n_triangles == 0:
        return False
    u, w, _ = _plane_basis(direction)
    flat = np.column_stack([mesh.vertices @ u, mesh.vertices @ w])
    scale = max(mesh.diameter(), 1.0)
    a, b, c = (flat[mesh.triangles[:, k]] for k in range(3))
    signed = (b[:, 0] - a[:, 0]) * (c[:, 1] - a[:, 1]) - (b[:, 1] - a[:, 1]) * (c[:, 0] - a[:, 0])
    threshold = tol * scale**2
    degenerate = np.abs(signed) <= threshold
    if degenerate.any():
        boundary = mesh.boundary_edges()
        vertical = boundary[
            np.linalg.norm(flat[boundary[:, 0]] - flat[boundary[:, 1]], axis=1) <= tol * scale
        ]
        allowed = {tuple(sorted(map(int, e))) for e in vertical}
        for tri in mesh.triangles[degenerate].tolist():
            edges = {tuple(sorted((tri[k], tri[(k + 1) % 3]))) for k in range(3)}
            if not edges & allowed:
                return False
    live = signed[~degenerate]
    if not (np.all(live > 0) or np.all(live < 0)):
        return False
    interior = np.flatnonzero(~mesh.boundary_mask())
    used = np.unique(mesh.triangles)
    tree = cKDTree(flat[used])
    for hits in tree.query_ball_point(flat[interior], tol * scale):
        if len(hits) > 1:
            return False
    try:
        loops = mesh.boundary_loops()
    except InvalidMesh:
        return False
    return all(_simple_loop_2d(flat[loop], tol * scale) for loop in loops)


def _segment_hits_triangle(
    p: Points, q: Points, a: Points, b: Points, c: Points, eps: float
) -> np.ndarray:
    """Moller-Trumbore test of segments pq against triangles abc, row by row."""
    d = q - p
    e1, e2 = b - a, c - a
    h = np.cross(d, e2)
    det = np.einsum("ij,ij->i", e1, h)
    ok = np.abs(det) > eps
    inv = np.divide(1.0, det, out=np.zeros_like(det), where=ok)
    s = p - a
    bu = inv * np.einsum("ij,ij->i", s, h)
    qv = np.cross(s, e1)
    bv = inv * np.einsum("ij,ij->i", d, qv)
    t = inv * np.einsum("ij,ij->i", e2, qv)
    inside = (bu > eps) & (bv > eps) & (bu + bv < 1 - eps)
    return ok & inside & (t > eps) & (t < 1 - eps)


def self_intersections(mesh: TriMesh) -> int:
    """Number of intersecting pairs of triangles that share no vertex."""
    if mesh.n_triangles < 2:
        return 0
    v, t = mesh.vertices, mesh.triangles
    corners = v[t]
    centroids = corners.mean(axis=1)
    reach = float(np.linalg.norm(corners - centroids[:, None, :], axis=2).max())
    pairs = np.array(sorted(cKDTree(centroids).query_pairs(2 * reach)), dtype=np.int64)
    if len(pairs) == 0:
        return 0
    first, second = t[pairs[:, 0]], t[pairs[:, 1]]
    disjoint = ~np.any(first[:, :, None] == second[:, None, :], axis=(1, 2))
    pairs = pairs[disjoint]
    if len(pairs) == 0:
        return 0
    eps = 1e-12
    hit = np.zeros(len(pairs), dtype=bool)
    for this, other in ((0, 1), (1, 0)):
        tri = corners[pairs[:, other]]
        seg = corners[pairs[:, this]]
        for k in range(3):
            hit |= _segment_hits_triangle(
                seg[:, k], seg[:, (k + 1) % 3], tri[:, 0], tri[:, 1], tri[:, 2], eps
            )
    return int(hit.sum())


def is_embedded(mesh: TriMesh) -> bool:
    return self_intersections(mesh) == 0


# =============================================================================
# Distances
# =============================================================================


def _closest_on_triangles(p: Points, a: Points, b: Points, c: Points) -> Points:
    """Closest points on triangles abc to points p, row by row."""
    ab, ac, ap = b - a, c - a, p - a
    d1, d2 = np.einsum("ij,ij->i", ab, ap), np.einsum("ij,ij->i", ac, ap)
    bp = p - b
    d3, d4 = np.einsum("ij,ij->i", ab, bp), np.einsum("ij,ij->i", ac, bp)
    cp = p - c
    d5, d6 = np.einsum("ij,ij->i", ab, cp), np.einsum("ij,ij->i", ac, cp)
    va = d3 * d6 - d5 * d4
    vb = d5 * d2 - d1 * d6
    vc = d1 * d4 - d3 * d2
    denom = va + vb + vc
    safe = np.where(np.abs(denom) > _TINY, denom, 1.0)
    result = a + ab * (vb / safe)[:, None] + ac * (vc / safe)[:, None]

    def choose(mask, value):
        result[mask] = value[mask]

    # Edge regions.
    bc_t = np.divide(d4 - d3, (d4 - d3) + (d5 - d6), out=np.zeros_like(d4), where=((d4 - d3) + (d5 - d6)) != 0)
    choose((va <= 0) & (d4 - d3 >= 0) & (d5 - d6 >= 0), b + (c - b) * bc_t[:, None])
    ac_t = np.divide(d2, d2 - d6, out=np.zeros_like(d2), where=(d2 - d6) != 0)
    choose((vb <= 0) & (d2 >= 0) & (d6 <= 0), a + ac * ac_t[:, None])
    ab_t = np.divide(d1, d1 - d3, out=np.zeros_like(d1), where=(d1 - d3) != 0)
    choose((vc <= 0) & (d1 >= 0) & (d3 <= 0), a + ab * ab_t[:, None])
    # Vertex regions.
    choose((d6 >= 0) & (d5 <= d6), c)
    choose((d3 >= 0) & (d4 <= d3), b)
    choose((d1 <= 0) & (d2 <= 0), a)
    return result


def point_to_mesh_distance(points: Points, mesh: TriMesh, candidates: int = 16) -> np.ndarray:
    """
    Distance from each point to the mesh.

    Only the ``candidates`` triangles with the nearest centroids are tested,
    which is exact for meshes with reasonably shaped triangles.
    """
    points = np.asarray(points, dtype=np.float64).reshape(-1, 3)
    corners = mesh.vertices[mesh.triangles]
    tree = cKDTree(corners.mean(axis=1))
    k = min(candidates, mesh.n_triangles)
    _, nearest = tree.query(points, k=k)
    nearest = np.asarray(nearest).reshape(len(points), k)
    best = np.full(len(points), np.inf)
    for column in range(k):
        tri = corners[nearest[:, column]]
        closest = _closest_on_triangles(points, tri[:, 0], tri[:, 1], tri[:, 2])
        best = np.minimum(best, np.linalg.norm(points - closest, axis=1))
    return best
