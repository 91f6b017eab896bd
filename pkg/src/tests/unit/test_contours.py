"""
Unit tests for contour builders and contour validation.
"""
import numpy as np
import pytest

from src.domain.contours.builders import (
    build_contour,
    contour_AA,
    contour_AW,
    contour_JM,
    contour_JMV,
    contour_limit_JM,
    contour_P0,
    contour_Pg,
    contour_platonoid,
    limit_arcs,
    limit_contour,
)
from src.domain.contours.entities import AA, AW, JM, JMV, P0, PolyContour, Pg, Tetroid
from src.domain.contours.validation import (
    agreement_radius,
    is_jordan,
    orientation,
    validate_contour,
    vertex_angles,
)
from src.domain.shared.exceptions import (
    InvalidParams,
    UnsupportedPlatonoid,
    WeightNotReduced,
)


class TestFamilySpecs:
    """Test cases for family parameter validation."""

    @pytest.mark.parametrize(
        "family",
        [
            JM(1),
            P0(2, 0.0),
            P0(2, np.pi / 2),
            P0(2, np.pi / 4, s=-1.0),
            Pg(2, np.pi / 4, u=0.0),
            JMV(3, -1.0),
            AW(2, 0.0),
            AA(2, np.pi / 2),
        ],
    )
    def test_invalid_parameters(self, family):
        """Test that out-of-range parameters are rejected."""
        # Act & Assert
        with pytest.raises(InvalidParams):
            family.validate()

    def test_tetroid_has_no_parameters(self):
        """Test that the tetroid always validates."""
        # Act & Assert
        Tetroid().validate()


class TestJorgeMeeksContour:
    """Test cases for the Jorge-Meeks contours."""

    def test_vertices_for_three_ends(self):
        """Test the hexagon vertices for n = 3 and R = 4."""
        # Act
        contour = contour_JM(3, 4.0)

        # Assert
        assert contour.closed
        assert contour.labels == ("p1", "p2", "p3", "p4", "p5", "p6")
        assert np.allclose(contour.vertex("p2"), (0.0, 0.5, np.sqrt(3) / 2))
        assert np.allclose(contour.vertex("p6"), (0.0, 4.0, 0.0))

    def test_vertices_for_two_ends(self):
        """Test that p2 is (0, 0, 1) for n = 2."""
        # Act
        contour = contour_JM(2, 4.0)

        # Assert
        assert np.allclose(contour.vertex("p2"), (0.0, 0.0, 1.0))

    def test_contour_is_jordan(self):
        """Test that the truncated hexagon passes validation."""
        # Act
        report = validate_contour(contour_JM(3, 4.0), limit=contour_limit_JM(3))

        # Assert
        assert report.jordan
        assert report.passed
        assert report.agreement_radius >= 2.0

    def test_vertex_angles(self):
        """Test the angles at p1 and p2."""
        # Arrange
        n = 4

        # Act
        angles = vertex_angles(contour_JM(n, 4.0))

        # Assert
        assert angles["p1"] == pytest.approx(180.0 / n, abs=1e-9)
        assert angles["p2"] == pytest.approx(90.0, abs=1e-9)

    def test_slab(self):
        """Test that the contour stays in 0 <= x3 <= sin(pi/n)."""
        # Act
        report = validate_contour(contour_JM(3, 4.0))

        # Assert
        low, high = report.slab[2]
        assert low == pytest.approx(0.0)
        assert high == pytest.approx(np.sin(np.pi / 3))

    def test_limit_contour(self):
        """Test the segment and rays of the limit contour."""
        # Act
        limit = contour_limit_JM(3)

        # Assert
        assert limit.is_limit
        assert np.allclose(limit.vertices, [(0.0, 0.0, 0.0), (0.0, 0.5, np.sqrt(3) / 2)])
        assert np.allclose(limit.rays[0].base, (0.0, 0.5, np.sqrt(3) / 2))
        assert np.allclose(limit.rays[0].direction, (1.0, 0.0, 0.0))
        assert np.allclose(limit.rays[1].base, (0.0, 0.0, 0.0))
        assert np.allclose(limit.rays[1].direction, (0.0, 1.0, 0.0))

    @pytest.mark.parametrize("n, R", [(1, 4.0), (3, 1.0), (3, 0.5)])
    def test_invalid_arguments(self, n, R):
        """Test that n < 2 or R <= 1 are rejected."""
        # Act & Assert
        with pytest.raises(InvalidParams):
            contour_JM(n, R)

    def test_limit_arcs(self):
        """Test which truncated segments lie on the limit contour."""
        # Act
        labels = limit_arcs(contour_JM(3, 4.0), contour_limit_JM(3))

        # Assert
        assert labels == ["p1:p2", "p2:p3", "p6:p1"]


class TestTetroidContour:
    """Test cases for the platonic contours."""

    def test_angle_at_origin(self):
        """Test that the tetroid contour has a 60 degree angle at p1."""
        # Act
        report = validate_contour(
            contour_platonoid("tetroid", 4.0), expected_angles={"p1": 60.0}
        )

        # Assert
        assert report.passed
        assert report.angles["p1"] == pytest.approx(60.0, abs=1e-9)

    def test_wrong_expected_angle_is_reported(self):
        """Test that a failed angle check is listed, not raised."""
        # Act
        report = validate_contour(
            contour_platonoid("tetroid", 4.0), expected_angles={"p1": 45.0, "p9": 10.0}
        )

        # Assert
        assert not report.passed
        assert len(report.failures) == 2

    @pytest.mark.parametrize("kind", ["cuboid", "octoid", "dodecoid", "icosoid"])
    def test_other_platonoids_unsupported(self, kind):
        """Test that only the tetroid is built."""
        # Act & Assert
        with pytest.raises(UnsupportedPlatonoid):
            contour_platonoid(kind, 4.0)


class TestPrismoidContours:
    """Test cases for the P0, Pg and AA contours."""

    def test_p0_vertices_for_two(self):
        """Test p4 and p5 for n = 2, theta = pi/4."""
        # Act
        contour = contour_P0(2, np.pi / 4, 1.0, 1.0, 4.0)

        # Assert
        assert np.allclose(contour.vertex("p4"), (4.0, -4.0, -3.0))
        assert np.allclose(contour.vertex("p5"), (-4.0, -4.0, -5.0))

    def test_p0_vertices_for_three(self):
        """Test p2 for n = 3."""
        # Act
        contour = contour_P0(3, np.pi / 4, 1.0, 1.0, 4.0)

        # Assert
        assert np.allclose(contour.vertex("p2"), (-0.5, -np.sqrt(3) / 2, 0.0))

    def test_p0_near_vertical_ends(self):
        """Test that theta close to pi/2 flattens p4 and keeps a Jordan contour."""
        # Act
        contour = contour_P0(2, np.pi / 2 - 1e-9, 1.0, 1.0, 4.0)

        # Assert
        assert contour.vertex("p4")[2] == pytest.approx(0.0, abs=1e-6)
        assert contour.vertex("p5")[2] == pytest.approx(-1.0, abs=1e-6)
        assert is_jordan(contour.vertices)

    def test_p0_truncation_bound(self):
        """Test that R must exceed max(s, t) + 1."""
        # Act & Assert
        with pytest.raises(InvalidParams):
            contour_P0(2, np.pi / 4, 1.0, 2.0, 3.0)

    def test_p0_limit_contour(self):
        """Test the limit chain p2, p1, p7 with its two rays."""
        # Act
        limit = contour_P0(2, np.pi / 4, 1.0, 1.0, None)

        # Assert
        assert limit.labels == ("p2", "p1", "p7")
        assert limit.truncation is None
        assert len(limit.rays) == 2

    def test_pg_vertices(self):
        """Test p6 and p8 for n = 2, theta = pi/4."""
        # Act
        contour = contour_Pg(2, np.pi / 4, 1.0, 1.0, 1.0, 4.0)

        # Assert
        assert np.allclose(contour.vertex("p6"), (-4.0, -4.0, -3.0))
        assert np.allclose(contour.vertex("p8"), (-1.0, -1.0, 0.0))

    def test_pg_small_s_approaches_p0_shape(self):
        """Test that p1 tends to p2 as s tends to 0."""
        # Act
        contour = contour_Pg(2, np.pi / 4, 1e-6, 1.0, 1.0, 4.0)

        # Assert
        assert np.linalg.norm(contour.vertex("p1") - contour.vertex("p2")) < 1e-5

    def test_aa_contour(self):
        """Test that the AA contour is a closed Jordan heptagon."""
        # Act
        contour = contour_AA(2, np.pi / 4, 1.0, 1.0, 4.0)

        # Assert
        assert len(contour.vertices) == 7
        assert is_jordan(contour.vertices)

    def test_aa_angle_range(self):
        """Test that theta must lie in (0, pi/n)."""
        # Act & Assert
        with pytest.raises(InvalidParams):
            contour_AA(3, np.pi / 3, 1.0, 1.0, 4.0)


class TestVerticalEndContours:
    """Test cases for the JMV and AW contours."""

    def test_jmv_vertex_order(self):
        """Test the JMV vertex order and the position of p8."""
        # Act
        contour = contour_JMV(3, 3.0, 4.0)

        # Assert
        assert contour.labels == (
            "p3", "p4", "p5", "p6", "p1", "p7", "p8", "p17", "p16", "p13", "p2"
        )
        assert np.allclose(contour.vertex("p8"), (0.5, 0.0, 0.0))

    def test_jmv_needs_large_weight(self):
        """Test that w/2n must exceed 1/4."""
        # Act & Assert
        with pytest.raises(InvalidParams):
            contour_JMV(2, 1.0, 4.0)

    def test_jmv_limit_has_vertical_line(self):
        """Test that the JMV limit contour carries a complete line."""
        # Act
        limit = contour_JMV(3, 3.0, None)

        # Assert
        assert len(limit.lines) == 1
        assert np.allclose(limit.lines[0].direction, (0.0, 1.0, 0.0))

    @pytest.mark.parametrize("w", [0.5, 1.0])
    def test_aw_weight_must_be_reduced(self, w):
        """Test that w <= 1 asks for the homothety first."""
        # Act & Assert
        with pytest.raises(WeightNotReduced):
            contour_AW(2, w, 4.0)

    def test_aw_weight_error_is_invalid_params(self):
        """Test that WeightNotReduced is an InvalidParams."""
        # Act & Assert
        with pytest.raises(InvalidParams):
            contour_AW(2, 0.5, None)

    def test_aw_contour(self):
        """Test that the AW contour is closed with thirteen vertices."""
        # Act
        contour = contour_AW(2, 2.0, 4.0)

        # Assert
        assert contour.closed
        assert len(contour.vertices) == 13
        assert contour.vertex("p7")[2] == pytest.approx(0.5)


class TestDispatch:
    """Test cases for build_contour and limit_contour."""

    @pytest.mark.parametrize(
        "family, expected",
        [
            (JM(3), "JM"),
            (Tetroid(), "Tetroid"),
            (P0(2, np.pi / 4), "P0"),
            (Pg(2, np.pi / 4), "Pg"),
            (JMV(3, 3.0), "JMV"),
            (AW(2, 2.0), "AW"),
            (AA(2, np.pi / 4), "AA"),
        ],
    )
    def test_every_family(self, family, expected):
        """Test that every family builds a truncated and a limit contour."""
        # Act
        truncated = build_contour(family, 5.0)
        limit = limit_contour(family)

        # Assert
        assert truncated.family == expected
        assert truncated.closed
        assert truncated.truncation == 5.0
        assert limit.is_limit


class TestJordanCheck:
    """Test cases for is_jordan and orientation."""

    def test_crossing_square(self):
        """Test that a bow-tie is not a Jordan polygon."""
        # Arrange
        bowtie = np.array([[0.0, 0.0, 0.0], [1.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])

        # Act & Assert
        assert not is_jordan(bowtie)

    def test_two_vertices(self):
        """Test that two vertices do not make a closed polygon."""
        # Act & Assert
        assert not is_jordan(np.array([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0]]))

    def test_backtracking_chain(self):
        """Test that a chain folding back onto itself is rejected."""
        # Arrange
        chain = np.array([[0.0, 0.0, 0.0], [2.0, 0.0, 0.0], [1.0, 0.0, 0.0]])

        # Act & Assert
        assert not is_jordan(chain, closed=False)

    def test_orientation(self, unit_square_contour):
        """Test the orientation seen from +x3."""
        # Arrange
        reversed_square = PolyContour(unit_square_contour.vertices[::-1], closed=True)

        # Act & Assert
        assert orientation(unit_square_contour) == "ccw"
        assert orientation(reversed_square) == "cw"

    def test_agreement_radius_of_identical_contours(self):
        """Test that a limit contour agrees with itself everywhere."""
        # Arrange
        limit = contour_limit_JM(3)

        # Act & Assert
        assert agreement_radius(limit, limit) == float("inf")
