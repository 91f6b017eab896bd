"""
Unit tests for run configurations, run records and killed periods.
"""
import dataclasses

import pytest

from src.domain.contours.entities import JM, P0
from src.domain.runs.entities import (
    CachePolicy,
    RunConfig,
    RunRecord,
    RunStatus,
    StageReport,
)
from src.domain.shared.exceptions import ConfigError
from src.domain.shared.types import ConfigHash
from src.tests.factories import KilledPeriodFactory, RunConfigFactory

JM_ITEMS = {"family.kind": "JM", "family.n": "3", "schedule": "2.0,3.0,4.0"}


class TestRunConfigItems:
    """Test cases for the flat key-value view of RunConfig."""

    def test_round_trip_jm(self):
        """Test that to_items and from_items are inverse."""
        # Arrange
        config = RunConfigFactory()

        # Act
        restored = RunConfig.from_items(config.to_items())

        # Assert
        assert restored == config

    def test_round_trip_prismoid(self):
        """Test that float family parameters survive the round trip exactly."""
        # Arrange
        config = RunConfigFactory(family=P0(n=2, theta=0.7, s=1.25, t=0.8), seed=7)

        # Act
        restored = RunConfig.from_items(config.to_items())

        # Assert
        assert restored.family == config.family
        assert restored.seed == 7

    def test_defaults_fill_missing_keys(self):
        """Test that defaults apply below explicit items."""
        # Act
        config = RunConfig.from_items(
            JM_ITEMS, defaults={"solver.max_iterations": "42", "family.n": "5"}
        )

        # Assert
        assert config.solver.max_iterations == 42
        assert config.family == JM(3)

    def test_unknown_key(self):
        """Test that an unknown key is reported by name."""
        # Act & Assert
        with pytest.raises(ConfigError) as exc:
            RunConfig.from_items({**JM_ITEMS, "solver.bogus": "1"})
        assert exc.value.details["key"] == "solver.bogus"

    @pytest.mark.parametrize(
        "change, key",
        [
            ({"schedule": "4.0,3.0,2.0"}, "schedule"),
            ({"schedule": "2.0,3.0"}, "schedule"),
            ({"solver.max_iterations": "many"}, "solver.max_iterations"),
            ({"family.kind": "XX"}, "family.kind"),
            ({"cache.policy": "sometimes"}, "cache.policy"),
            ({"family.n": "1"}, "family"),
            ({"tol.weld": "0.0"}, "tol.weld"),
            ({"search.lo": "3.0", "search.hi": "1.0"}, "search.lo"),
        ],
    )
    def test_invalid_items(self, change, key):
        """Test that invalid settings raise ConfigError naming their key."""
        # Act & Assert
        with pytest.raises(ConfigError) as exc:
            RunConfig.from_items({**JM_ITEMS, **change})
        assert exc.value.details["key"] == key

    def test_missing_schedule(self):
        """Test that the schedule is required."""
        # Act & Assert
        with pytest.raises(ConfigError) as exc:
            RunConfig.from_items({"family.kind": "JM", "family.n": "3"})
        assert exc.value.details["key"] == "schedule"

    def test_missing_family_parameter(self):
        """Test that parameters without defaults are required."""
        # Act & Assert
        with pytest.raises(ConfigError) as exc:
            RunConfig.from_items({"family.kind": "P0", "family.n": "2", "schedule": "1,2,3"})
        assert exc.value.details["key"] == "family.theta"


class TestConfigHash:
    """Test cases for RunConfig.config_hash."""

    def test_hash_ignores_output_and_cache_policy(self):
        """Test that where and whether to cache do not change the hash."""
        # Arrange
        config = RunConfigFactory()
        moved = dataclasses.replace(
            config, output_directory="elsewhere", cache_policy=CachePolicy.REFRESH
        )

        # Act & Assert
        assert moved.config_hash() == config.config_hash()

    def test_hash_follows_results_inputs(self):
        """Test that the seed and the schedule change the hash."""
        # Arrange
        config = RunConfigFactory()

        # Act & Assert
        assert dataclasses.replace(config, seed=1).config_hash() != config.config_hash()
        assert (
            dataclasses.replace(config, schedule=(2.0, 3.0, 5.0)).config_hash()
            != config.config_hash()
        )

    def test_hash_is_hex_digest(self):
        """Test that the hash is a 64-character hexadecimal digest."""
        # Act
        digest = RunConfigFactory().config_hash()

        # Assert
        assert len(digest) == 64
        int(digest, 16)


class TestRunRecord:
    """Test cases for RunRecord."""

    def test_new_record_is_running(self):
        """Test that a new record starts in the running state."""
        # Act
        record = RunRecord(config_hash=ConfigHash("ab" * 32), family="JM")

        # Assert
        assert record.status == RunStatus.RUNNING
        assert not record.passed
        assert record.finished_at is None

    def test_finish_sets_status_and_verdict(self):
        """Test that finishing stores the verdict and the outcome."""
        # Arrange
        record = RunRecord(config_hash=ConfigHash("ab" * 32), family="JM")
        record.add_stage(StageReport("contour", True, 0.1))

        # Act
        record.finish("VERDICT JM n=3", passed=True)

        # Assert
        assert record.passed
        assert record.verdict == "VERDICT JM n=3"
        assert record.finished_at is not None
        assert [stage.stage for stage in record.stages] == ["contour"]

    def test_missing_artifacts(self, tmp_path):
        """Test that artifacts deleted from disk are reported."""
        # Arrange
        present = tmp_path / "plateau.obj"
        present.write_text("v 0 0 0\n")
        record = RunRecord(config_hash=ConfigHash("ab" * 32), family="JM")
        record.add_artifact("plateau", present)
        record.add_artifact("conjugate", tmp_path / "conjugate.obj")

        # Act & Assert
        assert record.missing_artifacts() == ["conjugate"]


class TestKilledPeriod:
    """Test cases for KilledPeriod.cache_key."""

    def test_key_ignores_results(self):
        """Test that the found parameters and residual do not enter the key."""
        # Arrange
        first = KilledPeriodFactory(angle_or_weight=0.5)
        second = dataclasses.replace(first, parameters={"s": 9.0}, residual=1.0)

        # Act & Assert
        assert first.cache_key == second.cache_key

    def test_key_follows_inputs(self):
        """Test that angle, schedule and tolerances enter the key."""
        # Arrange
        base = KilledPeriodFactory(angle_or_weight=0.5)

        # Act & Assert
        assert dataclasses.replace(base, angle_or_weight=0.6).cache_key != base.cache_key
        assert dataclasses.replace(base, schedule=(5.0,)).cache_key != base.cache_key
        assert (
            dataclasses.replace(base, tolerances={"period_tolerance": 1e-4}).cache_key
            != base.cache_key
        )
