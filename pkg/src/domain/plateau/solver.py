"""
Discrete least-area disks.

A level starts with Dirichlet solves: each minimizes the cotangent Dirichlet
energy of the current surface over the free vertices, which never increases
area. Edge flips between solves keep the triangulation close to Delaunay.
Once the solves stall, L-BFGS on the area itself drives the curvature
residual down, with flips between polish rounds.
"""
import logging

import numpy as np
from scipy.optimize import minimize
from scipy.sparse import diags
from scipy.sparse.linalg import eigsh, spsolve

from src.domain.plateau.entities import ConvergenceReport, LevelReport, SolverConfig, TriMesh
from src.domain.plateau.geometry import (
    angle_defects,
    area,
    area_gradient,
    corner_angles,
    cotangent_laplacian,
    curvature_residual,
    is_embedded,
    is_graph,
    mean_curvature_normals,
    min_angle,
    mixed_areas,
    triangle_areas,
)
from src.domain.plateau.triangulation import refine
from src.domain.shared.exceptions import AreaIncrease, DegenerateTriangle, NoConvergence

logger = logging.getLogger(__name__)

MIN_ANGLE = 1e-6
AREA_SLACK = 1e-10
FLIP_PASSES = 8
STALL_DECREASE = 1e-7
POLISH_ROUNDS = 6
POLISH_ITERATIONS = 20
POLISH_FTOL = 1e-15


def _free_mask(mesh: TriMesh) -> np.ndarray:
    return ~(mesh.fixed | mesh.boundary_mask())


def dirichlet_step(mesh: TriMesh) -> TriMesh:
    """Move the free vertices to the minimizer of the current Dirichlet energy."""
    free = _free_mask(mesh)
    if not free.any():
        return mesh
    laplacian = cotangent_laplacian(mesh.vertices, mesh.triangles)
    pinned = ~free
    system = laplacian[free][:, free].tocsc()
    rhs = -(laplacian[free][:, pinned] @ mesh.vertices[pinned])
    vertices = mesh.vertices.copy()
    vertices[free] = np.asarray(spsolve(system, rhs)).reshape(-1, 3)
    return mesh.with_vertices(vertices)


def flip_edges(mesh: TriMesh, improve_angles: bool = False) -> tuple[TriMesh, int]:
    """
    Flip interior edges that violate the Delaunay condition.

    A flip is taken only when it does not increase area; with
    ``improve_angles`` it must raise the smallest angle of the pair instead.

    Returns:
        The flipped mesh and the number of flips
    """
    triangles = mesh.triangles.copy()
    vertices = mesh.vertices
    total = 0
    for _ in range(FLIP_PASSES):
        current = TriMesh(vertices, triangles, mesh.arcs, mesh.fixed)
        existing = {tuple(e) for e in current.edges().tolist()}
        touched = np.zeros(len(triangles), dtype=bool)
        flips = 0
        for (i, j), faces in current.edge_faces().items():
            if len(faces) != 2 or touched[faces].any():
                continue
            f1, f2 = faces
            t1, t2 = triangles[f1].tolist(), triangles[f2].tolist()
            # Put the edge as a -> b in t1.
            if (t1.index(i) + 1) % 3 != t1.index(j):
                i, j = j, i
                if (t1.index(i) + 1) % 3 != t1.index(j):
                    continue
            k = next(v for v in t1 if v not in (i, j))
            opposite = [v for v in t2 if v not in (i, j)]
            if len(opposite) != 1:
                continue
            l = opposite[0]
            if (min(k, l), max(k, l)) in existing:
                continue
            old = np.array([[i, j, k], [j, i, l]])
            new = np.array([[l, j, k], [k, i, l]])
            old_angles = corner_angles(vertices, old)
            new_angles = corner_angles(vertices, new)
            if improve_angles:
                if new_angles.min() <= old_angles.min():
                    continue
            else:
                if old_angles[0, 2] + old_angles[1, 2] <= np.pi + 1e-12:
                    continue
                before = triangle_areas(vertices, old).sum()
                after = triangle_areas(vertices, new).sum()
                if after > before * (1 + 1e-12) or new_angles.min() < MIN_ANGLE:
                    continue
            triangles[f1], triangles[f2] = new
            touched[[f1, f2]] = True
            existing.discard((min(i, j), max(i, j)))
            existing.add((min(k, l), max(k, l)))
            flips += 1
        total += flips
        if flips == 0:
            break
    return TriMesh(vertices, triangles, mesh.arcs, mesh.fixed), total


def stability_eigenvalue(mesh: TriMesh) -> float:
    """
    Smallest eigenvalue of the discrete Jacobi operator with zero boundary values.

    The operator is ``-Laplacian - |A|^2`` with ``|A|^2 = 4H^2 - 2K`` from the
    mean curvature normal and the angle defects. A nonnegative value is
    consistent with stability; it is a diagnostic, not a certificate.
    """
    free = _free_mask(mesh)
    if free.sum() < 2:
        return float("nan")
    masses = np.maximum(mixed_areas(mesh.vertices, mesh.triangles), 1e-300)
    h_squared = (np.linalg.norm(mean_curvature_normals(mesh), axis=1) / 2) ** 2
    gauss = angle_defects(mesh) / masses
    second_form = np.maximum(4 * h_squared - 2 * gauss, 0.0)
    stiffness = cotangent_laplacian(mesh.vertices, mesh.triangles)[free][:, free]
    potential = diags(second_form[free] * masses[free])
    operator = (stiffness - potential).tocsc()
    mass = diags(masses[free]).tocsc()
    # Shift below the Gershgorin bound so shift-invert returns the smallest eigenvalue.
    scaled = diags(1 / np.sqrt(masses[free])) @ operator @ diags(1 / np.sqrt(masses[free]))
    offdiag = np.asarray(abs(scaled).sum(axis=1)).ravel() - np.abs(scaled.diagonal())
    sigma = float((scaled.diagonal() - offdiag).min()) - 1.0
    values = eigsh(operator, k=1, M=mass, sigma=sigma, which="LM", return_eigenvectors=False)
    return float(values[0])


def _repair(mesh: TriMesh) -> TriMesh:
    if min_angle(mesh) >= MIN_ANGLE:
        return mesh
    repaired, _ = flip_edges(mesh, improve_angles=True)
    smallest = min_angle(repaired)
    if smallest < MIN_ANGLE:
        raise DegenerateTriangle(
            "Triangle collapsed below the minimum angle",
            {"min_angle": smallest, "threshold": MIN_ANGLE},
        )
    return repaired


def _check_area(before: float, after: float, level: int, step: str) -> None:
    if after > before * (1 + AREA_SLACK) + 1e-14:
        raise AreaIncrease(
            f"Area increased during {step} at level {level}",
            {"before": before, "after": after, "slack": AREA_SLACK},
        )


def _relax(mesh: TriMesh, cfg: SolverConfig, level: int) -> tuple[TriMesh, int, float]:
    """
    Dirichlet solves with edge flips between them.

    Stops once the displacement drops below tolerance or a step no longer
    lowers the area by a relative ``STALL_DECREASE``.
    """
    scale = max(mesh.diameter(), 1e-300)
    previous = area(mesh)
    displacement = float("inf")
    iterations = 0
    for iterations in range(1, cfg.max_iterations + 1):
        moved = dirichlet_step(mesh)
        displacement = float(np.linalg.norm(moved.vertices - mesh.vertices, axis=1).max())
        current = area(moved)
        _check_area(previous, current, level, "a Dirichlet solve")
        mesh = moved
        if iterations % cfg.flip_interval == 0:
            mesh, flips = flip_edges(mesh)
            if flips:
                logger.debug("Level %d iteration %d: %d edge flips", level, iterations, flips)
        mesh = _repair(mesh)
        stalled = previous - current <= STALL_DECREASE * previous
        previous = area(mesh)
        if displacement < cfg.displacement_tolerance * scale or stalled:
            break
    return mesh, iterations, displacement


def polish_area(mesh: TriMesh, cfg: SolverConfig, budget: int) -> tuple[TriMesh, int]:
    """
    Minimize area over the free vertices at fixed connectivity with L-BFGS.

    The gradient tolerance is chosen so that a converged run has a curvature
    residual below ``cfg.curvature_tolerance``.

    Returns:
        The polished mesh and the number of quasi-Newton iterations
    """
    free = _free_mask(mesh)
    if not free.any():
        return mesh, 0
    masses = mixed_areas(mesh.vertices, mesh.triangles)[free]
    gtol = cfg.curvature_tolerance * float(masses.min()) / (2 * np.sqrt(3))
    vertices = mesh.vertices.copy()

    def objective(x: np.ndarray) -> tuple[float, np.ndarray]:
        vertices[free] = x.reshape(-1, 3)
        value, gradient = area_gradient(vertices, mesh.triangles)
        return value, gradient[free].ravel()

    result = minimize(
        objective,
        mesh.vertices[free].ravel(),
        jac=True,
        method="L-BFGS-B",
        options={
            "maxiter": budget,
            "maxfun": 2 * budget,
            "gtol": gtol,
            "ftol": POLISH_FTOL,
            "maxcor": 20,
        },
    )
    polished = mesh.vertices.copy()
    polished[free] = np.asarray(result.x).reshape(-1, 3)
    return mesh.with_vertices(polished), int(result.nit)


def _solve_level(mesh: TriMesh, cfg: SolverConfig, level: int) -> tuple[TriMesh, LevelReport, bool]:
    mesh, iterations, displacement = _relax(mesh, cfg, level)
    residual = curvature_residual(mesh)
    budget = cfg.max_iterations * POLISH_ITERATIONS
    for round_ in range(POLISH_ROUNDS):
        if residual < cfg.curvature_tolerance:
            break
        before = area(mesh)
        polished, steps = polish_area(mesh, cfg, budget)
        _check_area(before, area(polished), level, "the area polish")
        displacement = float(np.linalg.norm(polished.vertices - mesh.vertices, axis=1).max())
        iterations += steps
        polished, flips = flip_edges(polished)
        mesh = _repair(polished)
        residual = curvature_residual(mesh)
        logger.debug(
            "Level %d polish round %d: residual=%.3e steps=%d flips=%d",
            level,
            round_,
            residual,
            steps,
            flips,
        )
        if steps == 0 and flips == 0:
            break
    converged = residual < cfg.curvature_tolerance
    direction = cfg.graph_direction
    report = LevelReport(
        level=level,
        area=area(mesh),
        displacement=displacement,
        residual=residual,
        iterations=iterations,
        is_graph=is_graph(mesh, direction) if direction is not None else None,
        is_embedded=is_embedded(mesh) if cfg.check_embedding else None,
        area_monotone=True,
        vertices=mesh.n_vertices,
        stability=stability_eigenvalue(mesh) if cfg.stability_diagnostic else None,
    )
    return mesh, report, converged


def solve_plateau(mesh: TriMesh, cfg: SolverConfig | None = None) -> tuple[TriMesh, ConvergenceReport]:
    """
    Minimize area with the fixed and boundary vertices held in place.

    Every refinement level after the first splits each triangle into four and
    restarts from the previous solution.

    Args:
        mesh: Initial mesh, e.g. from :func:`triangulate_disk`
        cfg: Solver settings

    Returns:
        Solved mesh and its per-level report

    Raises:
        NoConvergence: If the curvature residual is still above tolerance after
            the Dirichlet solves and the polish rounds; ``details`` carry
            ``best`` and ``report``
        DegenerateTriangle: If a triangle collapses and flips cannot repair it
        AreaIncrease: If a step at fixed connectivity increases area by more
            than a relative ``AREA_SLACK``
    """
    cfg = cfg or SolverConfig()
    cfg.validate()
    mesh.check()
    levels: list[LevelReport] = []
    for level in range(cfg.refinement_levels):
        if level:
            mesh = refine(mesh)
        mesh, report, converged = _solve_level(mesh, cfg, level)
        levels.append(report)
        logger.info(
            "Plateau level %d: area=%.10g residual=%.3e iterations=%d vertices=%d",
            level,
            report.area,
            report.residual,
            report.iterations,
            report.vertices,
        )
        if not converged:
            result = ConvergenceReport(levels=tuple(levels))
            raise NoConvergence(
                f"Plateau solve did not converge at level {level}",
                {"best": mesh, "report": result, "residual": report.residual},
            )
    return mesh, ConvergenceReport(levels=tuple(levels))
