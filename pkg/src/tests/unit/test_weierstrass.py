"""
Unit tests for the Weierstrass representation.
"""
import numpy as np
import pytest

from src.domain.shared.exceptions import (
    ConstantGauss,
    InvalidParams,
    InvalidWeierstrassData,
    OpenPath,
    PoleAtPoint,
)
from src.domain.weierstrass.catalog import catenoid, enneper, helicoid, jorge_meeks
from src.domain.weierstrass.entities import (
    Circle,
    HoloForm,
    LineSegment,
    Polyline,
    RationalMap,
    WeierstrassData,
)
from src.domain.weierstrass.sampling import sample_mesh
from src.domain.weierstrass.services import (
    conjugate,
    eval_forms,
    flux,
    gauss_degree,
    gauss_normal,
    immerse,
    path_integral,
    period,
    puncture_fluxes,
)


class TestRationalMap:
    """Test cases for RationalMap."""

    def test_power_with_negative_exponent(self):
        """Test that negative powers put the monomial in the denominator."""
        # Act
        g = RationalMap.power(-1)

        # Assert
        assert g(2.0) == pytest.approx(0.5)
        assert g.degree == 1
        assert g.poles().tolist() == [0j]

    def test_shared_root_rejected(self):
        """Test that a common root of numerator and denominator is rejected."""
        # Act & Assert
        with pytest.raises(InvalidWeierstrassData):
            RationalMap((1.0, -1.0), (1.0, -1.0))

    def test_zero_denominator_rejected(self):
        """Test that an identically zero denominator is rejected."""
        # Act & Assert
        with pytest.raises(InvalidWeierstrassData):
            RationalMap((1.0,), (0.0,))

    def test_leading_zeros_trimmed(self):
        """Test that leading zero coefficients do not raise the degree."""
        # Act
        g = RationalMap((0.0, 0.0, 1.0, 0.0))

        # Assert
        assert g.degree == 1
        assert not g.is_constant


class TestWeierstrassData:
    """Test cases for WeierstrassData validation."""

    def test_basepoint_on_puncture_rejected(self):
        """Test that the basepoint may not sit on a puncture."""
        # Act & Assert
        with pytest.raises(InvalidWeierstrassData):
            WeierstrassData(
                g=RationalMap.power(-1),
                eta=HoloForm(RationalMap.constant(1.0)),
                punctures=(0j,),
                basepoint=0j,
            )

    def test_degenerate_metric_at_basepoint_rejected(self):
        """Test that a vanishing eta at the basepoint is rejected."""
        # Act & Assert
        with pytest.raises(InvalidWeierstrassData):
            WeierstrassData(
                g=RationalMap.power(1),
                eta=HoloForm(RationalMap.power(1)),
                basepoint=0j,
            )

    def test_eta_pole_off_punctures_rejected(self):
        """Test that eta may only have poles at the declared punctures."""
        # Arrange
        eta = HoloForm(RationalMap((1.0,), (1.0, -2.0)))

        # Act & Assert
        with pytest.raises(InvalidWeierstrassData) as exc:
            WeierstrassData(g=RationalMap.power(1), eta=eta, punctures=())
        assert np.allclose(exc.value.details["poles"], [2.0])

    def test_eta_pole_at_puncture_accepted(self):
        """Test that the same pole is fine once it is declared a puncture."""
        # Arrange
        eta = HoloForm(RationalMap((1.0,), (1.0, -2.0)))

        # Act
        data = WeierstrassData(g=RationalMap.power(1), eta=eta, punctures=(2.0,))

        # Assert
        assert data.stray_poles().size == 0

    def test_jorge_meeks_double_poles_at_punctures(self):
        """Test that the double poles of the Jorge-Meeks eta all sit on punctures."""
        # Act
        data = jorge_meeks(4)

        # Assert
        assert data.stray_poles().size == 0

    def test_jorge_meeks_needs_two_ends(self):
        """Test that the Jorge-Meeks entry needs n >= 2."""
        # Act & Assert
        with pytest.raises(InvalidParams):
            jorge_meeks(1)


class TestEvalForms:
    """Test cases for eval_forms."""

    def test_catenoid_at_one(self):
        """Test the catenoid integrand at z = 1."""
        # Act
        phi = eval_forms(catenoid(4 * np.pi), 1.0)

        # Assert
        assert np.allclose(phi, (0.0, 2j, 2.0))

    def test_catenoid_at_i(self):
        """Test the catenoid integrand at z = i."""
        # Act
        phi = eval_forms(catenoid(4 * np.pi), 1j)

        # Assert
        assert np.allclose(phi, (2.0, 0.0, -2j))

    def test_zero_of_gauss_map(self):
        """Test that g = 0 leaves (h, i h, 0)."""
        # Act
        phi = eval_forms(enneper(), 0j)

        # Assert
        assert np.allclose(phi, (1.0, 1j, 0.0))

    def test_null_identity(self):
        """Test that the squares of the three forms sum to zero."""
        # Arrange
        data = jorge_meeks(3)
        points = [0.3 + 0.2j, -0.5j, 2.0 - 1.0j, -1.7 + 0.4j]

        for z in points:
            # Act
            phi = np.array(eval_forms(data, z))

            # Assert
            assert abs(np.sum(phi**2)) < 1e-10 * np.sum(np.abs(phi) ** 2)

    def test_pole_raises(self):
        """Test that evaluating at a puncture raises PoleAtPoint."""
        # Act & Assert
        with pytest.raises(PoleAtPoint):
            eval_forms(catenoid(), 0j)


class TestImmerse:
    """Test cases for immerse and path integrals."""

    def test_catenoid_along_real_axis(self):
        """Test the closed form of the catenoid along the segment 1 -> e."""
        # Act
        point = immerse(catenoid(2 * np.pi), LineSegment(1.0, np.e))

        # Assert
        assert np.allclose(point, (np.cosh(1.0) - 1.0, 0.0, 1.0), atol=1e-9)

    def test_empty_path_is_origin(self):
        """Test that a zero-length path stays at the origin."""
        # Act
        point = immerse(catenoid(), LineSegment(1.0, 1.0))

        # Assert
        assert np.array_equal(point, np.zeros(3))

    def test_reversal_negates_integral(self):
        """Test that reversing a path negates the integral."""
        # Arrange
        data = catenoid()
        path = Polyline((1.0, 2.0 + 1.0j, -1.0 + 2.0j))

        # Act
        forward = path_integral(data, path)
        backward = path_integral(data, path.reversed())

        # Assert
        assert np.allclose(forward, -backward, atol=1e-9)

    def test_path_must_start_at_basepoint(self):
        """Test that paths starting elsewhere are rejected."""
        # Act & Assert
        with pytest.raises(InvalidWeierstrassData):
            immerse(catenoid(), LineSegment(2.0, 3.0))

    def test_path_through_puncture_raises(self):
        """Test that a path through a puncture raises PoleAtPoint."""
        # Act & Assert
        with pytest.raises(PoleAtPoint):
            immerse(catenoid(), LineSegment(1.0, -1.0))


class TestConjugate:
    """Test cases for conjugate data."""

    def test_catenoid_conjugate_is_helicoid(self):
        """Test that conjugating the catenoid gives the helicoid data."""
        # Arrange
        w = 3.0

        # Act
        result = conjugate(catenoid(w))

        # Assert
        assert result.g == helicoid(w).g
        assert np.allclose(
            result.eta.coefficient.numerator, helicoid(w).eta.coefficient.numerator
        )

    def test_conjugate_twice_negates_eta(self):
        """Test that conjugating twice negates the forms."""
        # Arrange
        data = jorge_meeks(3)

        # Act
        twice = conjugate(conjugate(data))

        # Assert
        z = 0.4 + 0.3j
        assert np.allclose(eval_forms(twice, z), -np.array(eval_forms(data, z)))


class TestPeriodAndFlux:
    """Test cases for period and flux."""

    def test_catenoid_has_no_period(self):
        """Test that the catenoid closes up around its puncture."""
        # Act
        result = period(catenoid(), Circle(0j, 1.0))

        # Assert
        assert np.allclose(result, 0.0, atol=1e-9)

    def test_helicoid_period_is_vertical(self):
        """Test that the helicoid period has length w along -x3."""
        # Arrange
        w = 2 * np.pi

        # Act
        result = period(helicoid(w), Circle(0j, 1.0))

        # Assert
        assert np.allclose(result, (0.0, 0.0, -w), atol=1e-9)

    def test_catenoid_flux(self):
        """Test that the catenoid flux is its weight along x3."""
        # Arrange
        w = 5.0

        # Act
        result = flux(catenoid(w), Circle(0j, 1.0))

        # Assert
        assert np.allclose(result, (0.0, 0.0, w), atol=1e-9)

    def test_helicoid_flux_vanishes(self):
        """Test that the helicoid carries no flux."""
        # Act
        result = flux(helicoid(), Circle(0j, 1.0))

        # Assert
        assert np.allclose(result, 0.0, atol=1e-9)

    def test_flux_is_homology_invariant(self):
        """Test that homologous loops carry the same flux."""
        # Arrange
        data = catenoid(2 * np.pi)

        # Act
        small = flux(data, Circle(0j, 0.5))
        large = flux(data, Circle(0j, 2.0))

        # Assert
        assert np.allclose(small, large, atol=1e-9)

    def test_loop_around_nothing(self):
        """Test that a loop enclosing no singularity has zero period and flux."""
        # Arrange
        loop = Circle(3.0 + 0j, 1.0)

        # Act & Assert
        assert np.allclose(period(catenoid(), loop), 0.0, atol=1e-9)
        assert np.allclose(flux(catenoid(), loop), 0.0, atol=1e-9)

    def test_open_path_rejected(self):
        """Test that an open path is not a loop."""
        # Act & Assert
        with pytest.raises(OpenPath):
            flux(catenoid(), Polyline((1.0, 2.0, 3.0)))

    def test_jorge_meeks_balancing(self):
        """Test that the Jorge-Meeks end fluxes are horizontal, equal and balanced."""
        # Act
        fluxes = puncture_fluxes(jorge_meeks(3), radius=0.05)

        # Assert
        norms = [np.linalg.norm(f) for f in fluxes]
        assert len(fluxes) == 3
        assert np.allclose(np.sum(fluxes, axis=0), 0.0, atol=1e-6)
        assert np.allclose(norms, norms[0], rtol=1e-6)
        assert all(abs(f[2]) < 1e-6 * norms[0] for f in fluxes)


class TestGaussMap:
    """Test cases for gauss_normal and gauss_degree."""

    def test_zero_maps_to_south_pole(self):
        """Test that g = 0 gives (0, 0, -1)."""
        # Act & Assert
        assert np.allclose(gauss_normal(enneper(), 0j), (0.0, 0.0, -1.0))

    def test_infinity_maps_to_north_pole(self):
        """Test that g = infinity gives (0, 0, 1)."""
        # Act & Assert
        assert np.allclose(gauss_normal(catenoid(), 0j), (0.0, 0.0, 1.0))

    def test_one_maps_to_first_axis(self):
        """Test that g = 1 gives (1, 0, 0)."""
        # Act & Assert
        assert np.allclose(gauss_normal(catenoid(), 1.0), (1.0, 0.0, 0.0))

    @pytest.mark.parametrize(
        "data, expected",
        [
            (catenoid(), 1),
            (jorge_meeks(3), 2),
            (WeierstrassData(RationalMap.power(2), HoloForm(RationalMap.constant(1.0))), 2),
        ],
    )
    def test_degree(self, data, expected):
        """Test the degree of the Gauss map."""
        # Act & Assert
        assert gauss_degree(data) == expected

    def test_constant_gauss_map_raises(self):
        """Test that a constant Gauss map has no degree."""
        # Arrange
        plane = WeierstrassData(RationalMap.constant(2.0), HoloForm(RationalMap.constant(1.0)))

        # Act & Assert
        with pytest.raises(ConstantGauss):
            gauss_degree(plane)


class TestSampleMesh:
    """Test cases for sample_mesh."""

    def test_open_grid_arcs(self):
        """Test the arcs and triangle count of an open polar grid."""
        # Act
        sampled = sample_mesh(catenoid(), [1.0, 1.5, 2.0], np.linspace(0.0, 1.0, 5))

        # Assert
        mesh = sampled.mesh
        assert sorted(mesh.arcs) == ["end", "inner", "outer", "start"]
        assert mesh.n_triangles == 2 * 2 * 4
        assert mesh.euler_characteristic() == 1
        mesh.check(require_arc_cover=True)

    def test_periodic_grid_is_annulus(self, catenoid_annulus):
        """Test that a periodic grid closes into an annulus."""
        # Act
        mesh = catenoid_annulus.mesh

        # Assert
        assert sorted(mesh.arcs) == ["inner", "outer"]
        assert mesh.euler_characteristic() == 0
        assert len(mesh.boundary_loops()) == 2
        assert mesh.arc("inner")[0] == mesh.arc("inner")[-1]

    def test_vertices_match_immersion(self):
        """Test that accumulated chords agree with direct immersion."""
        # Arrange
        data = catenoid()
        sampled = sample_mesh(data, [1.0, 2.0], [0.0, 0.5, 1.0])

        # Act
        z = sampled.parameters[-1]
        direct = immerse(data, Polyline((1.0, abs(z), z)))

        # Assert
        assert np.allclose(sampled.mesh.vertices[-1], direct, atol=1e-8)
