"""
Pytest configuration and common fixtures.

This module provides shared fixtures for the whole suite: small meshes and
contours with known geometry, analytic catenoid samples that serve as
exact-family oracles, and run configurations.
"""
# Third-party imports
import numpy as np
import pytest

# Local imports
from src.domain.contours.entities import JM, PolyContour
from src.domain.plateau.entities import SolverConfig, TriMesh
from src.domain.plateau.triangulation import triangulate_disk
from src.domain.runs.entities import RunConfig
from src.domain.weierstrass.catalog import catenoid
from src.domain.weierstrass.sampling import sample_mesh


@pytest.fixture(scope="session")
def django_db_setup(django_db_setup, django_db_blocker):
    """Ensure Django database is properly set up for tests."""
    with django_db_blocker.unblock():
        # This ensures the database is created and configured
        pass


@pytest.fixture(autouse=True)
def enable_db_access_for_all_tests(db):
    """Enable database access for all tests."""
    pass


# =============================================================================
# Contour Fixtures
# =============================================================================


@pytest.fixture
def unit_square_contour():
    """Provide the planar unit square in the x1x2-plane."""
    return PolyContour(
        vertices=np.array(
            [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [1.0, 1.0, 0.0], [0.0, 1.0, 0.0]]
        ),
        closed=True,
        family="square",
    )


@pytest.fixture
def skew_quad_contour():
    """Provide a non-planar quadrilateral with one raised corner."""
    return PolyContour(
        vertices=np.array(
            [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [1.0, 1.0, 1.0], [0.0, 1.0, 0.0]]
        ),
        closed=True,
        family="skew",
    )


@pytest.fixture
def quarter_disk_contour():
    """Provide the quarter unit disk in the first quadrant, origin first."""
    angles = np.linspace(0.0, np.pi / 2, 9)
    rim = np.column_stack([np.cos(angles), np.sin(angles), np.zeros_like(angles)])
    return PolyContour(vertices=np.vstack([np.zeros(3), rim]), closed=True)


# =============================================================================
# Mesh Fixtures
# =============================================================================


@pytest.fixture
def flat_square_mesh(unit_square_contour):
    """Provide a triangulated unit square with edge length 0.25."""
    return triangulate_disk(unit_square_contour, 0.25)


@pytest.fixture
def tetrahedron_mesh():
    """Provide the closed regular tetrahedron with side length 2."""
    vertices = np.array(
        [[1.0, 1.0, 1.0], [1.0, -1.0, -1.0], [-1.0, 1.0, -1.0], [-1.0, -1.0, 1.0]]
    ) / np.sqrt(2)
    triangles = np.array([[0, 1, 2], [0, 3, 1], [0, 2, 3], [1, 3, 2]])
    return TriMesh(vertices=vertices, triangles=triangles)


@pytest.fixture(scope="session")
def catenoid_annulus():
    """
    Provide the catenoid of neck radius 1 sampled over 1 <= |z| <= 4.

    The inner boundary circle is the neck; the axis is the line through
    (-1, 0, 0) along x3.
    """
    radii = np.geomspace(1.0, 4.0, 25)
    angles = np.linspace(0.0, 2 * np.pi, 64, endpoint=False)
    return sample_mesh(catenoid(2 * np.pi), radii, angles, periodic=True)


@pytest.fixture(scope="session")
def catenoid_end():
    """Provide the upper end of the unit catenoid, far from the neck."""
    radii = np.geomspace(3.0, 1000.0, 48)
    angles = np.linspace(0.0, 2 * np.pi, 64, endpoint=False)
    return sample_mesh(catenoid(2 * np.pi), radii, angles, periodic=True)


@pytest.fixture(scope="session")
def catenoid_quarter():
    """
    Provide a quarter of the upper catenoid half, moved onto the mirrors of D_2.

    After the shift by (1, 0, 0) the arcs ``start``, ``end`` and ``inner``
    lie in the planes x2 = 0, x1 = 0 and x3 = 0; ``outer`` is free.
    """
    radii = np.geomspace(1.0, 4.0, 13)
    angles = np.linspace(0.0, np.pi / 2, 13)
    sampled = sample_mesh(catenoid(2 * np.pi), radii, angles)
    return sampled.mesh.with_vertices(sampled.mesh.vertices + np.array([1.0, 0.0, 0.0]))


# =============================================================================
# Configuration Fixtures
# =============================================================================


@pytest.fixture
def fast_solver():
    """Provide solver settings sized for unit tests."""
    return SolverConfig(max_iterations=200, edge_length=0.5, check_embedding=False)


@pytest.fixture
def jm_run_config(tmp_path, fast_solver):
    """Provide a Jorge-Meeks run configuration writing below tmp_path."""
    return RunConfig(
        family=JM(3),
        schedule=(2.0, 3.0, 4.0),
        solver=fast_solver,
        output_directory=str(tmp_path / "runs"),
    )
