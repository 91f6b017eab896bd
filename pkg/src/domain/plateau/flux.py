"""
Discrete flux of boundary arcs: the conormal integral along the boundary.
"""
import numpy as np

from src.domain.plateau.entities import TriMesh
from src.domain.shared.types import Vec3R


def _boundary_edge_faces(mesh: TriMesh) -> dict[tuple[int, int], int]:
    """Directed boundary edge, in triangle orientation, to its triangle."""
    count: dict[tuple[int, int], int] = {}
    owner: dict[tuple[int, int], tuple[int, int, int]] = {}
    for index, (a, b, c) in enumerate(mesh.triangles.tolist()):
        for i, j in ((a, b), (b, c), (c, a)):
            key = (min(i, j), max(i, j))
            count[key] = count.get(key, 0) + 1
            owner[key] = (i, j, index)
    return {(i, j): face for key, (i, j, face) in owner.items() if count[key] == 1}


def edge_conormals(mesh: TriMesh) -> dict[tuple[int, int], Vec3R]:
    """Outward conormal of each directed boundary edge, scaled by its length."""
    result = {}
    for (i, j), face in _boundary_edge_faces(mesh).items():
        a, b, c = mesh.vertices[mesh.triangles[face]]
        normal = np.cross(b - a, c - a)
        norm = np.linalg.norm(normal)
        edge = mesh.vertices[j] - mesh.vertices[i]
        if norm == 0.0:
            result[(i, j)] = np.zeros(3)
            continue
        conormal = np.cross(edge, normal / norm)
        result[(i, j)] = conormal
    return result


def discrete_flux(mesh: TriMesh, arc: str | None = None) -> Vec3R:
    """
    Sum of edge length times outward unit conormal over boundary edges.

    Args:
        mesh: Oriented mesh
        arc: Boundary arc label; None integrates over the whole boundary

    Raises:
        UnknownArc: If ``arc`` is not a label of the mesh
    """
    conormals = edge_conormals(mesh)
    if arc is None:
        return np.sum(list(conormals.values()), axis=0) if conormals else np.zeros(3)
    chain = mesh.arc(arc)
    total = np.zeros(3)
    for i, j in zip(chain[:-1], chain[1:]):
        if (i, j) in conormals:
            total += conormals[(i, j)]
        elif (j, i) in conormals:
            total += conormals[(j, i)]
    return total


def loop_flux(mesh: TriMesh, loop: list[int]) -> Vec3R:
    """Flux through one boundary loop as returned by ``TriMesh.boundary_loops``."""
    conormals = edge_conormals(mesh)
    total = np.zeros(3)
    for i, j in zip(loop, loop[1:] + loop[:1]):
        total += conormals.get((i, j), conormals.get((j, i), np.zeros(3)))
    return total
