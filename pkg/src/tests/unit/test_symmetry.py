"""
Unit tests for the symmetry group, the end classifier and reflection extension.
"""
import numpy as np
import pytest

from src.domain.plateau.flux import loop_flux
from src.domain.plateau.geometry import area
from src.domain.plateau.triangulation import triangulate_disk
from src.domain.shared.exceptions import (
    ArcNotOnMirror,
    ClaimViolation,
    FreeOrbit,
    InvalidEnd,
    InvalidN,
    TooManyEnds,
    WeldFailure,
)
from src.domain.symmetry.asymptotics import ends_from_mesh, fit_end_asymptotics
from src.domain.symmetry.classify import balanced, classify
from src.domain.symmetry.entities import Classification, EndDescriptor
from src.domain.symmetry.extension import (
    orient_consistently,
    place_on_mirrors,
    reflect_extend,
    symmetry_residual,
)
from src.domain.symmetry.group import case_of_end, dihedral_group, orbit, orbit_of_end
from src.tests.factories import HorizontalEndFactory

E1 = np.array([1.0, 0.0, 0.0])
E2 = np.array([0.0, 1.0, 0.0])
E3 = np.array([0.0, 0.0, 1.0])


def _pair(normal, weight):
    return [EndDescriptor.radial(normal, weight), EndDescriptor.radial(-np.asarray(normal), weight)]


class TestDihedralGroup:
    """Test cases for dihedral_group."""

    @pytest.mark.parametrize("n", [2, 3, 4, 6])
    def test_group_structure(self, n):
        """Test order, closure, orthogonality and mirror count."""
        # Act
        group = dihedral_group(n)

        # Assert
        assert group.order == 4 * n
        assert group.is_closed()
        assert group.is_orthogonal()
        assert len(group.mirror_normals()) == n + 1
        assert len(group.planes) == n + 1

    def test_order_one_rejected(self):
        """Test that n = 1 is not a dihedral order."""
        # Act & Assert
        with pytest.raises(InvalidN):
            dihedral_group(1)

    def test_horizontal_plane_is_first_mirror(self):
        """Test that P_0 is the x1x2-plane and P_n the x1x3-plane."""
        # Act
        group = dihedral_group(3)

        # Assert
        assert np.allclose(group.planes[0], E3)
        assert np.allclose(np.abs(group.planes[3]), E2, atol=1e-15)


class TestEndDescriptor:
    """Test cases for EndDescriptor validation."""

    def test_weight_must_follow_normal(self):
        """Test that a weight off the normal is rejected."""
        # Act & Assert
        with pytest.raises(InvalidEnd):
            EndDescriptor(E1, np.zeros(3), E1, E2)

    def test_zero_normal_rejected(self):
        """Test that a zero normal is rejected."""
        # Act & Assert
        with pytest.raises(InvalidEnd):
            EndDescriptor(np.zeros(3), np.zeros(3), E1, E1)

    def test_radial_end_is_normalized(self):
        """Test that radial ends carry unit normals and scaled weights."""
        # Act
        end = EndDescriptor.radial([2.0, 0.0, 0.0], 3.0)

        # Assert
        assert np.allclose(end.normal, E1)
        assert np.allclose(end.weight, 3.0 * E1)


class TestOrbits:
    """Test cases for orbits and end cases."""

    def test_horizontal_end_in_mirror(self):
        """Test that e1 is a case-4 end with an orbit of n ends."""
        # Arrange
        group = dihedral_group(3)

        # Act
        size, case = orbit_of_end(HorizontalEndFactory(), group)

        # Assert
        assert (size, case) == (3, 4)

    def test_horizontal_end_between_mirrors(self):
        """Test that a horizontal end off every mirror is case 2 with 2n images."""
        # Arrange
        group = dihedral_group(2)

        # Act
        size, case = orbit_of_end(HorizontalEndFactory(azimuth=np.pi / 6), group)

        # Assert
        assert (size, case) == (4, 2)

    def test_axial_end(self):
        """Test that an end on the x3-axis is case 6 with two images."""
        # Arrange
        group = dihedral_group(4)
        end = EndDescriptor.radial(E3, 1.0)

        # Act & Assert
        assert case_of_end(end, group) == 6
        assert len(orbit(end, group)) == 2

    def test_generic_end_has_free_orbit(self):
        """Test that an end with trivial stabilizer is rejected."""
        # Arrange
        end = EndDescriptor.radial([0.8, 0.3, 0.52], 1.0)

        # Act & Assert
        with pytest.raises(FreeOrbit):
            orbit_of_end(end, dihedral_group(2))


class TestBalanced:
    """Test cases for balanced."""

    def test_opposite_weights_balance(self):
        """Test that opposite weights balance."""
        # Act & Assert
        assert balanced([E1, -E1])

    def test_single_weight_unbalanced(self):
        """Test that a lone weight is unbalanced."""
        # Act & Assert
        assert not balanced([E1])

    def test_empty_set_balanced(self):
        """Test that no weights are balanced."""
        # Act & Assert
        assert balanced([])


class TestClassify:
    """Test cases for classify."""

    def test_jorge_meeks(self):
        """Test that the cube roots of unity give JM with n = 3."""
        # Arrange
        ends = [HorizontalEndFactory(azimuth=2 * np.pi * k / 3) for k in range(3)]

        # Act
        result = classify(ends, 3)

        # Assert
        assert result.kind is Classification.JM
        assert result.parameters == {"n": 3.0}
        assert result.added_ends == 0
        assert result.record() == "VERDICT JM n=3"

    def test_closure_adds_missing_ends(self):
        """Test that one representative is completed to the whole orbit."""
        # Act
        result = classify([HorizontalEndFactory()], 3)

        # Assert
        assert result.kind is Classification.JM
        assert result.added_ends == 2

    def test_alternating_weights(self):
        """Test that two horizontal orbits give AW with the weight ratio."""
        # Arrange
        ends = _pair(E1, 1.0) + _pair(E2, 2.0)

        # Act
        result = classify(ends, 2)

        # Assert
        assert result.kind is Classification.AW
        assert result.parameters["w"] == pytest.approx(2.0)

    def test_vertical_pair(self):
        """Test that an added pair of axial ends gives JMV with their relative weight."""
        # Arrange
        ends = _pair(E1, 1.0) + _pair(E3, 3.0)

        # Act
        result = classify(ends, 2)

        # Assert
        assert result.kind is Classification.JMV
        assert result.parameters["w"] == pytest.approx(3.0)

    def test_catenoid(self):
        """Test that two axial ends are a catenoid."""
        # Act
        result = classify(_pair(E3, 1.0), 3)

        # Assert
        assert result.kind is Classification.CATENOID
        assert result.parameters == {}
        assert result.record().startswith("VERDICT Catenoid reason=")

    def test_tilted_orbit(self):
        """Test that a tilted orbit of 2n ends gives P0 with its tilt."""
        # Arrange
        normal = [np.cos(np.pi / 4), 0.0, np.sin(np.pi / 4)]

        # Act
        result = classify([EndDescriptor.radial(normal, 1.0)], 2)

        # Assert
        assert result.kind is Classification.P0
        assert result.parameters["theta"] == pytest.approx(np.pi / 4)

    def test_alternating_angles(self):
        """Test that a horizontal orbit off the mirrors gives AA with its smaller gap."""
        # Act
        result = classify([HorizontalEndFactory(azimuth=np.pi / 6)], 2)

        # Assert
        assert result.kind is Classification.AA
        assert result.parameters["theta"] == pytest.approx(np.pi / 3)

    def test_too_many_ends(self):
        """Test that more than 2n + 1 ends are rejected."""
        # Arrange
        ends = _pair(E1, 1.0) + [HorizontalEndFactory(azimuth=np.pi / 6)]

        # Act & Assert
        with pytest.raises(TooManyEnds) as exc:
            classify(ends, 2)
        assert exc.value.details["ends"] == 6

    def test_repeated_end(self):
        """Test that two ends with the same normal and axis are rejected."""
        # Arrange
        end = HorizontalEndFactory()

        # Act & Assert
        with pytest.raises(ClaimViolation):
            classify([end, HorizontalEndFactory()], 3)


ORACLE_DRAWS = 1000
ORACLE_FAMILIES = ("JM", "AW", "JMV", "P0", "AA", "Catenoid")


def _generators(n):
    """Rotation by 2 pi / n, reflection in x2 = 0 and reflection in x3 = 0."""
    c, s = np.cos(2 * np.pi / n), np.sin(2 * np.pi / n)
    return (
        np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]]),
        np.diag([1.0, -1.0, 1.0]),
        np.diag([1.0, 1.0, -1.0]),
    )


def _closure(normal, n):
    """Orbit of a unit normal found by applying generators until nothing is new."""
    found = [np.asarray(normal, dtype=np.float64)]
    frontier = list(found)
    while frontier:
        fresh = []
        for vector in frontier:
            for g in _generators(n):
                image = g @ vector
                if not any(np.linalg.norm(image - known) < 1e-9 for known in found):
                    found.append(image)
                    fresh.append(image)
        frontier = fresh
    return found


def _draw(rng):
    """A random family, order and set of radial representatives."""
    n = int(rng.integers(2, 5))
    family = ORACLE_FAMILIES[rng.integers(len(ORACLE_FAMILIES))]
    step = np.pi / n
    horizontal = lambda phi: np.array([np.cos(phi), np.sin(phi), 0.0])  # noqa: E731
    if family == "JM":
        seeds = [horizontal(step * rng.integers(2 * n))]
    elif family == "AW":
        k = int(rng.integers(n))
        seeds = [horizontal(2 * k * step), horizontal((2 * k + 1) * step)]
    elif family == "JMV":
        seeds = [horizontal(step * rng.integers(2 * n)), E3 * rng.choice([-1.0, 1.0])]
    elif family == "P0":
        tilt = rng.uniform(np.radians(5.0), np.radians(85.0))
        phi = step * rng.integers(2 * n)
        seeds = [np.array([np.cos(tilt) * np.cos(phi), np.cos(tilt) * np.sin(phi), np.sin(tilt)])]
    elif family == "AA":
        margin = np.radians(3.0)
        seeds = [horizontal(rng.uniform(margin, step - margin) + step * rng.integers(2 * n))]
    else:
        seeds = [E3 * rng.choice([-1.0, 1.0])]
    ends = []
    for seed in seeds:
        members = _closure(seed, n)
        weight = rng.uniform(0.5, 3.0)
        keep = rng.choice(len(members), size=int(rng.integers(1, len(members) + 1)), replace=False)
        ends.extend(EndDescriptor.radial(members[i], weight) for i in keep)
    order = rng.permutation(len(ends))
    return n, [ends[i] for i in order]


def _expected(ends, n):
    """Family and parameters read off the brute-force orbits of the ends."""
    orbits = []
    for end in ends:
        if any(any(np.linalg.norm(end.normal - m) < 1e-9 for m in o["normals"]) for o in orbits):
            continue
        orbits.append(
            {"normals": _closure(end.normal, n), "weight": float(np.linalg.norm(end.weight))}
        )
    total = sum(len(o["normals"]) for o in orbits)
    vertical = [o for o in orbits if abs(o["normals"][0][2]) > 1 - 1e-9]
    flat = [o for o in orbits if abs(o["normals"][0][2]) < 1e-9]
    if len(orbits) == 1 and vertical:
        return Classification.CATENOID, {}, total
    if len(orbits) == 1 and len(flat) == 1 and len(flat[0]["normals"]) == n:
        return Classification.JM, {"n": n}, total
    if len(orbits) == 2 and len(flat) == 2:
        weights = sorted(o["weight"] for o in flat)
        return Classification.AW, {"n": n, "w": weights[1] / weights[0]}, total
    if len(orbits) == 2 and len(flat) == 1 and len(vertical) == 1:
        return Classification.JMV, {"n": n, "w": vertical[0]["weight"] / flat[0]["weight"]}, total
    (only,) = orbits
    assert len(only["normals"]) == 2 * n
    if flat:
        azimuths = np.sort(np.mod([np.arctan2(v[1], v[0]) for v in only["normals"]], 2 * np.pi))
        gaps = np.diff(np.concatenate([azimuths, [azimuths[0] + 2 * np.pi]]))
        return Classification.AA, {"n": n, "theta": gaps.min()}, total
    tilt = np.arcsin(abs(only["normals"][0][2]))
    return Classification.P0, {"n": n, "theta": tilt}, total


class TestClassifierOracle:
    """Test cases for classify against an independent orbit enumeration."""

    def test_random_configurations(self):
        """Test that random symmetric configurations match brute-force orbits."""
        # Arrange
        rng = np.random.default_rng(20261019)
        seen = set()

        for _ in range(ORACLE_DRAWS):
            n, ends = _draw(rng)
            kind, parameters, total = _expected(ends, n)

            # Act
            result = classify(ends, n)

            # Assert
            assert result.kind is kind
            assert result.parameters.keys() == parameters.keys()
            for key, value in parameters.items():
                assert result.parameters[key] == pytest.approx(value, rel=1e-9)
            assert result.added_ends == total - len(ends)
            assert sum(orbit.size for orbit in result.orbits) == total
            seen.add(kind)

        assert seen == {Classification(name) for name in ORACLE_FAMILIES}


class TestReflectExtend:
    """Test cases for reflect_extend and its helpers."""

    def test_catenoid_quarter_closes_to_annulus(self, catenoid_quarter):
        """Test that eight images of a catenoid quarter weld into an annulus."""
        # Act
        mesh = reflect_extend(catenoid_quarter, dihedral_group(2), free_arcs=("outer",))

        # Assert
        loops = mesh.boundary_loops()
        assert mesh.euler_characteristic() == 0
        assert len(loops) == 2
        assert len([label for label in mesh.arcs if label.startswith("outer@")]) == 8
        for loop in loops:
            assert np.linalg.norm(loop_flux(mesh, loop)) == pytest.approx(2 * np.pi, rel=0.1)

    def test_extended_catenoid_is_classified(self, catenoid_quarter):
        """Test that the ends read off the extension classify as a catenoid."""
        # Arrange
        mesh = reflect_extend(catenoid_quarter, dihedral_group(2), free_arcs=("outer",))

        # Act
        result = classify(ends_from_mesh(mesh), 2)

        # Assert
        assert result.kind is Classification.CATENOID

    def test_flat_quarter_disk(self, quarter_disk_contour):
        """Test that a flat quarter disk extends to the whole disk."""
        # Arrange
        piece = triangulate_disk(quarter_disk_contour, 0.25)
        free = [label for label in piece.arcs if label not in ("v1:v2", "v10:v1")]
        group = dihedral_group(2)

        # Act
        disk = reflect_extend(piece, group, free_arcs=free)

        # Assert
        assert area(disk) == pytest.approx(4 * area(piece), rel=1e-9)
        assert disk.euler_characteristic() == 1
        assert symmetry_residual(disk, group) < 1e-9

    def test_arc_off_mirror(self, quarter_disk_contour):
        """Test that a shifted piece has arcs on no mirror."""
        # Arrange
        piece = triangulate_disk(quarter_disk_contour, 0.25)
        piece = piece.with_vertices(piece.vertices + 0.1)
        free = [label for label in piece.arcs if label not in ("v1:v2", "v10:v1")]

        # Act & Assert
        with pytest.raises(ArcNotOnMirror):
            reflect_extend(piece, dihedral_group(2), free_arcs=free)

    def test_edge_with_three_faces(self):
        """Test that a non-manifold edge cannot be oriented."""
        # Arrange
        triangles = np.array([[0, 1, 2], [1, 0, 3], [0, 1, 4]])

        # Act & Assert
        with pytest.raises(WeldFailure):
            orient_consistently(triangles)

    def test_orientation_repaired(self):
        """Test that a flipped neighbour is flipped back."""
        # Arrange
        triangles = np.array([[0, 1, 2], [0, 1, 3]])

        # Act
        result = orient_consistently(triangles)

        # Assert
        assert result[0].tolist() == [0, 1, 2]
        assert result[1].tolist() == [0, 3, 1]


class TestPlaceOnMirrors:
    """Test cases for place_on_mirrors."""

    def test_rigid_motion_undone(self, catenoid_quarter):
        """Test that a rigidly moved quarter is placed back on the mirrors."""
        # Arrange
        angle = 0.7
        axis = np.array([1.0, 2.0, 3.0]) / np.sqrt(14.0)
        cross = np.array([[0, -axis[2], axis[1]], [axis[2], 0, -axis[0]], [-axis[1], axis[0], 0]])
        rotation = np.eye(3) + np.sin(angle) * cross + (1 - np.cos(angle)) * cross @ cross
        moved = catenoid_quarter.with_vertices(
            catenoid_quarter.vertices @ rotation.T + np.array([0.3, -0.2, 0.5])
        )
        group = dihedral_group(2)

        # Act
        placed, mapping = place_on_mirrors(moved, group, ["start", "end", "inner"], snap=False)

        # Assert
        assert sorted(mapping) == ["end", "inner", "start"]
        assert len(set(mapping.values())) == 3
        for label, index in mapping.items():
            distances = placed.arc_points(label) @ group.planes[index]
            assert np.abs(distances).max() < 1e-6

    def test_snap_lands_on_planes(self, catenoid_quarter):
        """Test that snapping a piece already near its mirrors puts the arcs on them."""
        # Arrange
        group = dihedral_group(2)

        # Act
        placed, mapping = place_on_mirrors(catenoid_quarter, group, ["start", "end", "inner"])

        # Assert
        for label, index in mapping.items():
            distances = placed.arc_points(label) @ group.planes[index]
            assert np.abs(distances).max() < 1e-12

    def test_bent_arc_is_not_snapped(self, catenoid_quarter):
        """Test that an arc far off every mirror is rejected instead of projected."""
        # Arrange
        chain = np.array(catenoid_quarter.arc("inner"))
        bump = np.sin(np.linspace(0.0, np.pi, len(chain)))
        vertices = catenoid_quarter.vertices.copy()
        vertices[chain, 2] += bump
        bent = catenoid_quarter.with_vertices(vertices)

        # Act & Assert
        with pytest.raises(ArcNotOnMirror) as exc:
            place_on_mirrors(bent, dihedral_group(2), ["start", "end", "inner"])
        assert exc.value.details["distance"] > exc.value.details["tolerance"]

    def test_only_straight_arcs(self, flat_square_mesh):
        """Test that a piece without planar arcs cannot be placed."""
        # Act & Assert
        with pytest.raises(ArcNotOnMirror):
            place_on_mirrors(flat_square_mesh, dihedral_group(2), ["v1:v2", "v2:v3"])


class TestEndAsymptotics:
    """Test cases for fit_end_asymptotics and ends_from_mesh."""

    def test_catenoid_end_coefficients(self, catenoid_end):
        """Test that the unit catenoid end grows like log r + log 2."""
        # Act
        fit = fit_end_asymptotics(catenoid_end.mesh, (-1.0, 0.0, 0.0), E3)

        # Assert
        assert fit.a == pytest.approx(1.0, abs=1e-3)
        assert fit.b == pytest.approx(np.log(2.0), abs=1e-2)
        assert fit.is_catenoid

    def test_flat_disk_has_no_ends(self, flat_square_mesh):
        """Test that a boundary loop without flux is not reported as an end."""
        # Act
        ends = ends_from_mesh(flat_square_mesh)

        # Assert
        assert ends == []
