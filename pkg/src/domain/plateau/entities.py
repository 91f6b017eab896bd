"""
Plateau domain entities.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field, replace

import numpy as np

from src.domain.shared.exceptions import InvalidMesh, UnknownArc
from src.domain.shared.types import Faces, Points, Vec3R


@dataclass(frozen=True, eq=False)
class TriMesh:
    """
    Oriented triangle mesh with labeled boundary arcs.

    Args:
        vertices: Array of shape (N, 3)
        triangles: Vertex index triples of shape (M, 3)
        arcs: Boundary arc label to vertex chain
        fixed: Per-vertex flag, True where the solver must not move the vertex
    """

    vertices: Points
    triangles: Faces
    arcs: dict[str, tuple[int, ...]] = field(default_factory=dict)
    fixed: np.ndarray | None = None

    def __post_init__(self) -> None:
        vertices = np.asarray(self.vertices, dtype=np.float64).reshape(-1, 3)
        triangles = np.asarray(self.triangles, dtype=np.int64).reshape(-1, 3)
        fixed = (
            np.zeros(len(vertices), dtype=bool)
            if self.fixed is None
            else np.asarray(self.fixed, dtype=bool)
        )
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "triangles", triangles)
        object.__setattr__(self, "fixed", fixed)
        object.__setattr__(
            self, "arcs", {str(k): tuple(int(i) for i in v) for k, v in self.arcs.items()}
        )

    def __repr__(self) -> str:
        return (
            f"TriMesh(vertices={len(self.vertices)}, triangles={len(self.triangles)}, "
            f"arcs={sorted(self.arcs)})"
        )

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_triangles(self) -> int:
        return len(self.triangles)

    def with_vertices(self, vertices: Points) -> TriMesh:
        """Copy of the mesh with new vertex positions."""
        return replace(self, vertices=np.array(vertices, dtype=np.float64))

    def directed_edges(self) -> Faces:
        t = self.triangles
        return np.concatenate([t[:, [0, 1]], t[:, [1, 2]], t[:, [2, 0]]])

    def edges(self) -> Faces:
        """Unique undirected edges as sorted index pairs."""
        if self.n_triangles == 0:
            return np.empty((0, 2), dtype=np.int64)
        return np.unique(np.sort(self.directed_edges(), axis=1), axis=0)

    def boundary_edges(self) -> Faces:
        """Directed edges, in triangle orientation, that have no twin."""
        directed = self.directed_edges()
        undirected = np.sort(directed, axis=1)
        _, inverse, counts = np.unique(
            undirected, axis=0, return_inverse=True, return_counts=True
        )
        return directed[counts[inverse.reshape(-1)] == 1]

    def boundary_mask(self) -> np.ndarray:
        mask = np.zeros(self.n_vertices, dtype=bool)
        mask[self.boundary_edges().reshape(-1)] = True
        return mask

    def boundary_loops(self) -> list[list[int]]:
        """Boundary vertex cycles, each following the triangle orientation."""
        successor: dict[int, int] = {int(i): int(j) for i, j in self.boundary_edges()}
        loops: list[list[int]] = []
        seen: set[int] = set()
        for start in sorted(successor):
            if start in seen:
                continue
            loop = [start]
            seen.add(start)
            current = successor[start]
            while current != start:
                if current in seen or current not in successor:
                    raise InvalidMesh("Boundary is not a union of simple loops")
                loop.append(current)
                seen.add(current)
                current = successor[current]
            loops.append(loop)
        return loops

    def euler_characteristic(self) -> int:
        used = np.unique(self.triangles)
        return len(used) - len(self.edges()) + self.n_triangles

    def arc(self, label: str) -> tuple[int, ...]:
        """
        Vertex chain of a boundary arc.

        Raises:
            UnknownArc: If the label is not present
        """
        try:
            return self.arcs[label]
        except KeyError:
            raise UnknownArc(f"Unknown boundary arc {label!r}", {"known": sorted(self.arcs)})

    def arc_points(self, label: str) -> Points:
        return self.vertices[list(self.arc(label))]

    def diameter(self) -> float:
        if self.n_vertices == 0:
            return 0.0
        return float(np.linalg.norm(self.vertices.max(axis=0) - self.vertices.min(axis=0)))

    def centroid(self) -> Vec3R:
        return self.vertices.mean(axis=0)

    def check(self, require_arc_cover: bool = False) -> None:
        """
        Validate the structural invariants.

        Args:
            require_arc_cover: Also require the arcs to cover the boundary exactly

        Raises:
            InvalidMesh: If any invariant fails
        """
        if self.n_triangles and (
            self.triangles.min() < 0 or self.triangles.max() >= self.n_vertices
        ):
            raise InvalidMesh("Triangle references a missing vertex")
        if np.any(self.triangles[:, 0] == self.triangles[:, 1]) or np.any(
            self.triangles[:, 1] == self.triangles[:, 2]
        ) or np.any(self.triangles[:, 2] == self.triangles[:, 0]):
            raise InvalidMesh("Triangle repeats a vertex")
        directed = self.directed_edges()
        if len(np.unique(directed, axis=0)) != len(directed):
            raise InvalidMesh("Inconsistent orientation or non-manifold edge")
        boundary = {tuple(sorted(map(int, e))) for e in self.boundary_edges()}
        covered: set[tuple[int, int]] = set()
        for label, chain in self.arcs.items():
            for i, j in zip(chain[:-1], chain[1:]):
                edge = (min(i, j), max(i, j))
                if edge not in boundary:
                    raise InvalidMesh(f"Arc {label!r} leaves the boundary at {edge}")
                covered.add(edge)
        if require_arc_cover and covered != boundary:
            raise InvalidMesh(
                "Arcs do not cover the boundary",
                {"missing": len(boundary - covered)},
            )

    def edge_faces(self) -> dict[tuple[int, int], list[int]]:
        """Undirected edge to adjacent triangle indices."""
        faces: dict[tuple[int, int], list[int]] = defaultdict(list)
        for index, (a, b, c) in enumerate(self.triangles.tolist()):
            for i, j in ((a, b), (b, c), (c, a)):
                faces[(min(i, j), max(i, j))].append(index)
        return faces


@dataclass(frozen=True)
class SolverConfig:
    """
    Discrete Plateau solver settings.

    ``displacement_tolerance`` is relative to the mesh diameter.
    """

    max_iterations: int = 500
    displacement_tolerance: float = 1e-9
    curvature_tolerance: float = 1e-4
    refinement_levels: int = 1
    edge_length: float = 0.25
    flip_interval: int = 10
    graph_direction: tuple[float, float, float] | None = None
    check_embedding: bool = True
    stability_diagnostic: bool = False

    def validate(self) -> None:
        """
        Raises:
            ValueError: If any numeric setting is not positive
        """
        for name in (
            "max_iterations",
            "displacement_tolerance",
            "curvature_tolerance",
            "refinement_levels",
            "edge_length",
            "flip_interval",
        ):
            if getattr(self, name) <= 0:
                raise ValueError(f"SolverConfig.{name} must be positive")


@dataclass(frozen=True)
class LevelReport:
    """Outcome of one refinement level of a Plateau solve."""

    level: int
    area: float
    displacement: float
    residual: float
    iterations: int
    is_graph: bool | None
    is_embedded: bool | None
    area_monotone: bool
    vertices: int = 0
    stability: float | None = None


@dataclass(frozen=True)
class ConvergenceReport:
    """
    Per-level history of a solve.

    ``truncation`` and ``cauchy_deviation`` are filled by the truncation
    driver; a standalone solve leaves them empty.
    """

    levels: tuple[LevelReport, ...]
    truncation: float | None = None
    cauchy_deviation: float | None = None
    witness_hit: bool | None = None

    @property
    def final(self) -> LevelReport:
        return self.levels[-1]

    @property
    def areas(self) -> list[float]:
        return [level.area for level in self.levels]

    @property
    def area_monotone(self) -> bool:
        return all(level.area_monotone for level in self.levels)

    def with_truncation(
        self, truncation: float, cauchy_deviation: float | None, witness_hit: bool
    ) -> ConvergenceReport:
        return replace(
            self,
            truncation=truncation,
            cauchy_deviation=cauchy_deviation,
            witness_hit=witness_hit,
        )
