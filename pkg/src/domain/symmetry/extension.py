"""
Completing fundamental pieces by reflection across the mirror planes.
"""
import itertools
import logging
from collections import deque
from collections.abc import Sequence

import numpy as np
from scipy.linalg import orthogonal_procrustes
from scipy.spatial import cKDTree

from src.domain.conjugate.transform import fit_plane
from src.domain.plateau.entities import TriMesh
from src.domain.shared.exceptions import ArcNotOnMirror, WeldFailure
from src.domain.shared.types import Faces, Matrix3, Vec3R
from src.domain.symmetry.entities import SymGroup

logger = logging.getLogger(__name__)

WELD_TOLERANCE = 1e-6
# Largest distance, relative to max(1, diameter), that snapping may remove.
SNAP_TOLERANCE = 1e-2


def _mirror_of(points: np.ndarray, normals: Sequence[Vec3R], tol: float) -> int | None:
    """Index of a mirror plane through the origin that contains all points."""
    for index, normal in enumerate(normals):
        if float(np.abs(points @ normal).max()) <= tol:
            return index
    return None


def mirror_assignment(
    mesh: TriMesh, group: SymGroup, tol: float, free_arcs: Sequence[str] = ()
) -> dict[str, int]:
    """
    Mirror of every boundary arc outside ``free_arcs``.

    Raises:
        ArcNotOnMirror: If an arc lies on none of the group's mirrors
    """
    normals = group.mirror_normals()
    assignment = {}
    for label in sorted(mesh.arcs):
        if label in free_arcs:
            continue
        index = _mirror_of(mesh.arc_points(label), normals, tol)
        if index is None:
            raise ArcNotOnMirror(
                f"Arc {label!r} lies on no mirror plane", {"arc": label, "tolerance": tol}
            )
        assignment[label] = index
    return assignment


def _union_find(size: int, pairs: np.ndarray) -> np.ndarray:
    parent = np.arange(size)

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, j in pairs:
        a, b = find(int(i)), find(int(j))
        if a != b:
            parent[max(a, b)] = min(a, b)
    return np.array([find(i) for i in range(size)])


def orient_consistently(triangles: Faces) -> Faces:
    """
    Flip triangles so that every shared edge is used in opposite directions.

    Raises:
        WeldFailure: If the surface is not orientable or an edge is shared by
            more than two triangles
    """
    triangles = triangles.copy()
    incident: dict[tuple[int, int], list[int]] = {}
    for index, tri in enumerate(triangles.tolist()):
        for k in range(3):
            a, b = tri[k], tri[(k + 1) % 3]
            incident.setdefault((min(a, b), max(a, b)), []).append(index)
    if any(len(faces) > 2 for faces in incident.values()):
        raise WeldFailure("Welded mesh has an edge shared by more than two triangles")

    def directed(index: int) -> set[tuple[int, int]]:
        tri = triangles[index]
        return {(int(tri[k]), int(tri[(k + 1) % 3])) for k in range(3)}

    state = np.zeros(len(triangles), dtype=bool)
    for seed in range(len(triangles)):
        if state[seed]:
            continue
        state[seed] = True
        queue = deque([seed])
        while queue:
            current = queue.popleft()
            for a, b in directed(current):
                for other in incident[(min(a, b), max(a, b))]:
                    if other == current:
                        continue
                    clash = (a, b) in directed(other)
                    if not state[other]:
                        if clash:
                            triangles[other] = triangles[other][[0, 2, 1]]
                        state[other] = True
                        queue.append(other)
                    elif clash:
                        raise WeldFailure("Welded mesh is not orientable")
    return triangles


def reflect_extend(
    mesh: TriMesh,
    group: SymGroup,
    weld_tol: float = WELD_TOLERANCE,
    free_arcs: Sequence[str] = (),
) -> TriMesh:
    """
    Union of the images of a fundamental piece under the group, welded.

    Arcs in ``free_arcs`` stay boundary and appear once per distinct image as
    ``"<label>@<k>"``; every other arc must lie on a mirror plane and
    disappears into the interior.

    Args:
        mesh: Fundamental piece
        group: Symmetry group
        weld_tol: Welding distance relative to max(1, diameter)
        free_arcs: Arcs that are not on mirrors, e.g. truncation arcs

    Raises:
        ArcNotOnMirror: If a non-free arc lies on no mirror
        WeldFailure: If mirror arcs stay open or the result is not an
            oriented manifold
    """
    scale = weld_tol * max(1.0, mesh.diameter())
    mirrors = mirror_assignment(mesh, group, scale, free_arcs)
    n = mesh.n_vertices
    vertices, triangles, fixed = [], [], []
    for k, g in enumerate(group.elements):
        vertices.append(mesh.vertices @ g.T)
        tris = mesh.triangles + k * n
        triangles.append(tris[:, [0, 2, 1]] if np.linalg.det(g) < 0 else tris)
        fixed.append(mesh.fixed)
    stacked = np.vstack(vertices)
    pairs = np.array(sorted(cKDTree(stacked).query_pairs(scale)), dtype=np.int64).reshape(-1, 2)
    roots = _union_find(len(stacked), pairs)
    tris = roots[np.vstack(triangles)]
    collapsed = (tris[:, 0] == tris[:, 1]) | (tris[:, 1] == tris[:, 2]) | (tris[:, 2] == tris[:, 0])
    if collapsed.any():
        raise WeldFailure("Welding collapsed a triangle", {"triangles": int(collapsed.sum())})
    _, first = np.unique(np.sort(tris, axis=1), axis=0, return_index=True)
    tris = tris[np.sort(first)]
    used = np.unique(tris)
    remap = -np.ones(len(stacked), dtype=np.int64)
    remap[used] = np.arange(len(used))
    tris = orient_consistently(remap[tris])

    arcs: dict[str, tuple[int, ...]] = {}
    seen_chains: set[frozenset[int]] = set()
    for k in range(group.order):
        for label in free_arcs:
            chain = tuple(int(remap[roots[i + k * n]]) for i in mesh.arc(label))
            key = frozenset(chain)
            if key not in seen_chains:
                seen_chains.add(key)
                arcs[f"{label}@{k}"] = chain
    result = TriMesh(
        vertices=stacked[used],
        triangles=tris,
        arcs=arcs,
        fixed=np.concatenate(fixed)[used],
    )
    boundary = {tuple(sorted(map(int, e))) for e in result.boundary_edges()}
    for label in mirrors:
        chain = [int(remap[roots[i]]) for i in mesh.arc(label)]
        open_edges = [
            e for e in zip(chain[:-1], chain[1:]) if tuple(sorted(e)) in boundary
        ]
        if open_edges:
            raise WeldFailure(
                f"Mirror arc {label!r} was not welded", {"open_edges": len(open_edges)}
            )
    logger.info(
        "Extended piece by %d reflections: %d vertices, %d triangles",
        group.order,
        result.n_vertices,
        result.n_triangles,
    )
    return result


def symmetry_residual(mesh: TriMesh, group: SymGroup | Sequence[Matrix3]) -> float:
    """Largest distance from a transformed vertex to the nearest vertex."""
    elements = group.elements if isinstance(group, SymGroup) else group
    tree = cKDTree(mesh.vertices)
    worst = 0.0
    for g in elements:
        distances, _ = tree.query(mesh.vertices @ np.asarray(g).T)
        worst = max(worst, float(np.max(distances)))
    return worst


def place_on_mirrors(
    mesh: TriMesh,
    group: SymGroup,
    labels: Sequence[str],
    snap: bool = True,
    snap_tol: float = SNAP_TOLERANCE,
) -> tuple[TriMesh, dict[str, int]]:
    """
    Move a piece so that its planar boundary arcs lie on mirror planes.

    Tries every assignment of the arcs to the planes P_0..P_n, where arcs
    may share a plane, and every choice of normal signs. The orthogonal part
    comes from orthogonal Procrustes on the plane normals and the translation
    from the plane offsets. The best placement is applied; with ``snap`` the
    arc vertices are then projected onto their planes. Straight arcs lie in a
    pencil of planes and are left out of the fit.

    Returns:
        The placed mesh and the plane index of each arc

    Raises:
        ArcNotOnMirror: If no arc is planar, or if snapping would move an arc
            vertex by more than ``snap_tol`` times max(1, diameter)
    """
    fits = [fit_plane(mesh.arc_points(label), label) for label in labels]
    fits = [fit for fit in fits if not fit.degenerate]
    if not fits:
        raise ArcNotOnMirror("No planar arc to place", {"arcs": list(labels)})
    normals = np.array([fit.normal for fit in fits])
    centroids = np.array([fit.centroid for fit in fits])
    planes = np.array(group.planes)
    best: tuple[float, Matrix3, Vec3R, tuple[int, ...]] | None = None
    for assignment in itertools.product(range(len(planes)), repeat=len(fits)):
        targets = planes[list(assignment)]
        # The first sign is free: flipping all of them is the same placement.
        for tail in itertools.product((1.0, -1.0), repeat=len(fits) - 1):
            signs = (1.0, *tail)
            signed = targets * np.array(signs)[:, None]
            rotation, _ = orthogonal_procrustes(normals, signed)
            q = rotation.T
            misfit = float(np.linalg.norm(normals @ rotation - signed))
            # m_k . (Q c_k + t) = 0 for every arc.
            rhs = -np.einsum("ij,ij->i", targets, centroids @ q.T)
            shift, *_ = np.linalg.lstsq(targets, rhs, rcond=None)
            offsets = float(np.linalg.norm(targets @ shift - rhs))
            score = misfit + offsets / max(mesh.diameter(), 1e-300)
            if best is None or score < best[0]:
                best = (score, q, shift, assignment)
    assert best is not None
    _, q, shift, assignment = best
    vertices = mesh.vertices @ q.T + shift
    triangles = mesh.triangles[:, [0, 2, 1]] if np.linalg.det(q) < 0 else mesh.triangles
    mapping = {fit.label: int(index) for fit, index in zip(fits, assignment)}
    if snap:
        bound = snap_tol * max(1.0, mesh.diameter())
        for label, index in mapping.items():
            chain = list(mesh.arc(label))
            normal = planes[index]
            heights = vertices[chain] @ normal
            worst = float(np.abs(heights).max())
            if worst > bound:
                raise ArcNotOnMirror(
                    f"Arc {label!r} is {worst:.3g} away from mirror {index}",
                    {"arc": label, "distance": worst, "tolerance": bound},
                )
            vertices[chain] -= np.outer(heights, normal)
    placed = TriMesh(vertices=vertices, triangles=triangles, arcs=mesh.arcs, fixed=mesh.fixed)
    logger.info("Placed %d arcs on mirrors %s (score %.3e)", len(fits), mapping, best[0])
    return placed, mapping
