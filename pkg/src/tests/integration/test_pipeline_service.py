"""
Integration tests for the pipeline application service.

These tests run the stage sequence against the real run cache and artifact
store; the numerical stages come from a mocked surface service so that the
sequencing, caching and failure handling are checked in isolation.
"""
# Standard library imports
import dataclasses
from pathlib import Path
from unittest.mock import Mock

# Third-party imports
import pytest

# Local imports
from src.application.services import PipelineApplicationService, SurfaceApplicationService
from src.domain.contours.entities import ContourReport, Tetroid
from src.domain.plateau.solver import solve_plateau
from src.domain.runs.entities import CachePolicy, RunConfig, RunStatus
from src.domain.shared.exceptions import ConfigError, InvalidParams, StageFailed
from src.infrastructure.runs.models import RunRecordModel
from src.infrastructure.runs.repositories import DjangoRunRepository, FileArtifactStore


def _passing_contour_report() -> ContourReport:
    report = Mock(spec=ContourReport)
    report.passed = True
    report.failures = ()
    report.agreement_radius = 1.0
    return report


@pytest.mark.django_db
class TestPipelineApplicationService:
    """Test the pipeline stage sequence with a mocked surface service."""

    @pytest.fixture(autouse=True)
    def setup(self, tmp_path, unit_square_contour, flat_square_mesh, fast_solver):
        """Set up test data."""
        self.surface = Mock(spec=SurfaceApplicationService)
        self.repository = DjangoRunRepository()
        self.service = PipelineApplicationService(
            surface_service=self.surface,
            run_repository=self.repository,
            artifact_store_factory=FileArtifactStore,
        )
        mesh, report = solve_plateau(flat_square_mesh, fast_solver)
        reports = [
            report.with_truncation(radius, deviation, False)
            for radius, deviation in ((2.0, None), (3.0, 0.1), (4.0, 0.01))
        ]
        self.surface.build_contour.return_value = (unit_square_contour, _passing_contour_report())
        self.surface.converge.return_value = (mesh, reports)
        self.surface.conjugate.return_value = mesh
        self.config = RunConfig(
            family=Tetroid(),
            schedule=(2.0, 3.0, 4.0),
            solver=fast_solver,
            output_directory=str(tmp_path / "runs"),
        )

    def test_tetroid_stops_after_conjugate(self):
        """Test that the tetroid run finishes with the conjugate piece."""
        # Act
        record = self.service.run_pipeline(self.config)

        # Assert
        assert record.passed
        assert record.verdict == "VERDICT Tetroid reason='conjugate piece only'"
        assert [stage.stage for stage in record.stages] == ["contour", "plateau", "conjugate"]
        assert sorted(record.manifest) == ["conjugate", "contour", "convergence", "plateau"]
        assert record.missing_artifacts() == []
        self.surface.classify.assert_not_called()

    def test_artifacts_under_hash_directory(self):
        """Test that artifacts go below the output directory and hash prefix."""
        # Act
        record = self.service.run_pipeline(self.config)

        # Assert
        expected = Path(self.config.output_directory) / record.config_hash[:12]
        assert all(Path(path).parent == expected for path in record.manifest.values())

    def test_cache_hit_skips_work(self):
        """Test that a passed run with intact artifacts is reused."""
        # Arrange
        first = self.service.run_pipeline(self.config)

        # Act
        second = self.service.run_pipeline(self.config)

        # Assert
        assert second.config_hash == first.config_hash
        assert self.surface.converge.call_count == 1

    def test_refresh_recomputes(self):
        """Test that the refresh policy ignores the cache."""
        # Arrange
        self.service.run_pipeline(self.config)
        refresh = dataclasses.replace(self.config, cache_policy=CachePolicy.REFRESH)

        # Act
        self.service.run_pipeline(refresh)

        # Assert
        assert self.surface.converge.call_count == 2
        assert RunRecordModel.objects.count() == 1

    def test_cache_off_saves_nothing(self):
        """Test that the off policy leaves the run cache untouched."""
        # Arrange
        config = dataclasses.replace(self.config, cache_policy=CachePolicy.OFF)

        # Act
        self.service.run_pipeline(config)

        # Assert
        assert RunRecordModel.objects.count() == 0

    def test_invalid_config_before_any_work(self):
        """Test that an invalid configuration fails before the first stage."""
        # Arrange
        config = dataclasses.replace(self.config, schedule=(4.0, 3.0, 2.0))

        # Act & Assert
        with pytest.raises(ConfigError):
            self.service.run_pipeline(config)
        self.surface.build_contour.assert_not_called()
        assert RunRecordModel.objects.count() == 0

    def test_stage_failure_is_tagged_and_saved(self):
        """Test that a failing stage is reported with its tag and recorded."""
        # Arrange
        self.surface.build_contour.side_effect = InvalidParams("R too small", {"R": 4.0})

        # Act & Assert
        with pytest.raises(StageFailed) as exc:
            self.service.run_pipeline(self.config)
        assert exc.value.details["stage"] == "contour"
        assert exc.value.details["cause"] == "InvalidParams"
        saved = self.repository.get_by_hash(self.config.config_hash())
        assert saved.status == RunStatus.FAILED
        assert saved.stages[0].passed is False
        self.surface.converge.assert_not_called()

    def test_failed_run_not_reused(self):
        """Test that a failed record does not count as a cache hit."""
        # Arrange
        self.surface.build_contour.side_effect = InvalidParams("R too small")
        with pytest.raises(StageFailed):
            self.service.run_pipeline(self.config)
        self.surface.build_contour.side_effect = None

        # Act
        record = self.service.run_pipeline(self.config)

        # Assert
        assert record.passed

    def test_non_decreasing_deviation_fails_plateau(self):
        """Test that Cauchy deviations must decrease along the schedule."""
        # Arrange
        mesh, reports = self.surface.converge.return_value
        reports = [reports[0], reports[1], dataclasses.replace(reports[2], cauchy_deviation=0.5)]
        self.surface.converge.return_value = (mesh, reports)

        # Act & Assert
        with pytest.raises(StageFailed) as exc:
            self.service.run_pipeline(self.config)
        assert exc.value.details["stage"] == "plateau"
