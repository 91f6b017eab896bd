"""
Discrete conjugate surfaces and plane fits of boundary geodesics.

Every edge vector is turned by a right angle about the surface normal at
the edge, the mean of the adjacent face normals, and the rotated field is
integrated to vertex positions by least squares. For a conformal
parametrization this is ``dX* = N x dX``, the differential of the surface
obtained from the Weierstrass data with ``eta`` replaced by ``i eta``.
"""
import logging

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.linalg import spsolve

from src.domain.conjugate.entities import ConjugateTolerances, PlaneFit
from src.domain.plateau.entities import TriMesh
from src.domain.plateau.geometry import curvature_residual, face_normals
from src.domain.shared.exceptions import ArcTooShort, NonIntegrable, NotMinimal
from src.domain.shared.types import Points, VectorLike

logger = logging.getLogger(__name__)


def _edge_normals(mesh: TriMesh, edges: np.ndarray) -> Points:
    normals = face_normals(mesh.vertices, mesh.triangles)
    faces = mesh.edge_faces()
    summed = np.array([normals[faces[(int(i), int(j))]].sum(axis=0) for i, j in edges])
    norms = np.linalg.norm(summed, axis=1, keepdims=True)
    return np.divide(summed, norms, out=np.zeros_like(summed), where=norms > 0)


def rotated_edges(mesh: TriMesh) -> tuple[np.ndarray, Points]:
    """Undirected edges ``(i, j)`` and the targets for ``Y_j - Y_i``."""
    edges = mesh.edges()
    vectors = mesh.vertices[edges[:, 1]] - mesh.vertices[edges[:, 0]]
    return edges, np.cross(_edge_normals(mesh, edges), vectors)


def _face_edges(mesh: TriMesh, edges: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Edge index and traversal sign of the three sides of every face."""
    lookup = {(int(i), int(j)): k for k, (i, j) in enumerate(edges)}
    index = np.empty(mesh.triangles.shape, dtype=np.int64)
    sign = np.empty(mesh.triangles.shape)
    for f, tri in enumerate(mesh.triangles.tolist()):
        for side, (a, b) in enumerate(((tri[0], tri[1]), (tri[1], tri[2]), (tri[2], tri[0]))):
            index[f, side] = lookup[(min(a, b), max(a, b))]
            sign[f, side] = 1.0 if a < b else -1.0
    return index, sign


def _mean_face_edge(mesh: TriMesh, edges: np.ndarray, index: np.ndarray) -> np.ndarray:
    lengths = np.linalg.norm(mesh.vertices[edges[:, 1]] - mesh.vertices[edges[:, 0]], axis=1)
    return np.maximum(lengths[index].mean(axis=1), 1e-300)


def closure_defect(mesh: TriMesh) -> float:
    """
    Largest circulation of the rotated edge field around a face, relative to
    the face's mean edge length. Zero for an exactly integrable field.
    """
    edges, targets = rotated_edges(mesh)
    if mesh.n_triangles == 0:
        return 0.0
    index, sign = _face_edges(mesh, edges)
    circulation = np.einsum("fs,fsk->fk", sign, targets[index])
    scale = _mean_face_edge(mesh, edges, index)
    return float((np.linalg.norm(circulation, axis=1) / scale).max())


def fit_defect(mesh: TriMesh, conjugate: Points) -> float:
    """
    Largest mismatch between the integrated edges ``Y_j - Y_i`` and the
    rotated field on any face, relative to the face's mean edge length.

    This is what remains of the closure defect after least squares.
    """
    edges, targets = rotated_edges(mesh)
    if mesh.n_triangles == 0:
        return 0.0
    mismatch = np.linalg.norm(conjugate[edges[:, 1]] - conjugate[edges[:, 0]] - targets, axis=1)
    index, _ = _face_edges(mesh, edges)
    scale = _mean_face_edge(mesh, edges, index)
    return float((mismatch[index].max(axis=1) / scale).max())


def conjugate_mesh(
    mesh: TriMesh,
    tolerances: ConjugateTolerances | None = None,
    anchor: int | None = None,
    anchor_position: VectorLike | None = None,
) -> TriMesh:
    """
    Conjugate of a discrete minimal surface on the same connectivity.

    The result is fixed up to translation by pinning ``anchor`` (default: the
    vertex closest to the origin) at ``anchor_position`` (default: its own
    position). Conjugating twice therefore reflects through the anchor.

    Args:
        mesh: Minimal mesh
        tolerances: Minimality and closure thresholds
        anchor: Vertex index to pin
        anchor_position: Where to pin it

    Returns:
        Mesh with the same triangles, arcs and fixed flags

    Raises:
        NotMinimal: If curvature residual times diameter exceeds the threshold
        NonIntegrable: If the least-squares positions still miss the rotated
            edge field by more than the closure tolerance on some face
    """
    tolerances = tolerances or ConjugateTolerances()
    residual = curvature_residual(mesh) * max(mesh.diameter(), 1e-300)
    if residual > tolerances.residual_threshold:
        raise NotMinimal(
            "Mesh is too far from minimal to conjugate",
            {"scaled_residual": residual, "threshold": tolerances.residual_threshold},
        )
    if anchor is None:
        anchor = int(np.argmin(np.linalg.norm(mesh.vertices, axis=1)))
    pinned = np.asarray(
        mesh.vertices[anchor] if anchor_position is None else anchor_position, dtype=np.float64
    )

    edges, targets = rotated_edges(mesh)
    n = mesh.n_vertices
    i, j = edges[:, 0], edges[:, 1]
    ones = np.ones(len(edges))
    # Normal equations of sum |Y_j - Y_i - t_ij|^2: a graph Laplacian system.
    laplacian = coo_matrix(
        (
            np.concatenate([ones, ones, -ones, -ones]),
            (np.concatenate([i, j, i, j]), np.concatenate([i, j, j, i])),
        ),
        shape=(n, n),
    ).tocsr()
    rhs = np.zeros((n, 3))
    np.add.at(rhs, i, -targets)
    np.add.at(rhs, j, targets)
    free = np.ones(n, dtype=bool)
    free[anchor] = False
    system = laplacian[free][:, free].tocsc()
    rhs = rhs[free] - laplacian[free][:, [anchor]] @ pinned[None, :]
    vertices = np.empty((n, 3))
    vertices[anchor] = pinned
    vertices[free] = np.asarray(spsolve(system, rhs)).reshape(-1, 3)
    defect = fit_defect(mesh, vertices)
    if defect > tolerances.closure_tolerance:
        raise NonIntegrable(
            "Rotated edge field does not close up",
            {"closure_defect": defect, "threshold": tolerances.closure_tolerance},
        )
    logger.info(
        "Conjugated mesh with %d vertices: closure defect %.3e, scaled residual %.3e",
        n,
        defect,
        residual,
    )
    return mesh.with_vertices(vertices)


def fit_plane(points: Points, label: str = "") -> PlaneFit:
    """
    Total-least-squares plane through at least three points.

    Raises:
        ArcTooShort: If fewer than three points are given
    """
    points = np.asarray(points, dtype=np.float64).reshape(-1, 3)
    if len(points) < 3:
        raise ArcTooShort(f"Arc {label!r} has fewer than three vertices", {"vertices": len(points)})
    centroid = points.mean(axis=0)
    _, singular, vt = np.linalg.svd(points - centroid, full_matrices=False)
    normal = vt[2]
    degenerate = bool(singular[1] <= 1e-9 * max(singular[0], 1e-300))
    return PlaneFit(
        label=label,
        normal=normal,
        offset=float(normal @ centroid),
        rms=float(singular[2] / np.sqrt(len(points))),
        centroid=centroid,
        direction=vt[0],
        degenerate=degenerate,
    )


def boundary_geodesic_planes(mesh: TriMesh, labels: list[str] | None = None) -> list[PlaneFit]:
    """Plane fit of every boundary arc, in label order."""
    return [fit_plane(mesh.arc_points(label), label) for label in (labels or sorted(mesh.arcs))]


def plane_angle_degrees(first: PlaneFit, second: PlaneFit) -> float:
    cosine = abs(float(first.normal @ second.normal))
    return float(np.degrees(np.arccos(np.clip(cosine, 0.0, 1.0))))


def signed_plane_distance(first: PlaneFit, second: PlaneFit) -> float:
    """Offset of the second plane's centroid along the first plane's normal."""
    return first.signed_distance(second.centroid)
