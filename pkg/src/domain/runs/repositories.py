"""
Run cache and artifact store interfaces.
"""
from abc import ABC, abstractmethod
from pathlib import Path

from src.domain.contours.entities import PolyContour
from src.domain.plateau.entities import ConvergenceReport, TriMesh
from src.domain.runs.entities import KilledPeriod, RunRecord
from src.domain.shared.types import ConfigHash
from src.domain.symmetry.entities import EndDescriptor


class RunRepository(ABC):
    """
    Abstract run cache.

    The domain depends on this abstraction; the Django implementation lives
    in the infrastructure layer.
    """

    @abstractmethod
    def get_by_hash(self, config_hash: ConfigHash) -> RunRecord | None:
        """
        Get the run recorded for a configuration.

        Args:
            config_hash: Digest of the run configuration

        Returns:
            Run record if found, None otherwise
        """
        pass

    @abstractmethod
    def save(self, record: RunRecord) -> RunRecord:
        """
        Insert or replace the record for its configuration hash.

        Args:
            record: Run record to save

        Returns:
            Saved run record
        """
        pass

    @abstractmethod
    def list_runs(self, family: str | None = None, limit: int = 20) -> list[RunRecord]:
        """
        Most recent runs first.

        Args:
            family: Optional family filter
            limit: Maximum number of records
        """
        pass

    @abstractmethod
    def save_killed_period(self, killed: KilledPeriod) -> KilledPeriod:
        """Insert or replace a killed-period entry by its cache key."""
        pass

    @abstractmethod
    def find_killed_period(self, cache_key: str) -> KilledPeriod | None:
        pass

    @abstractmethod
    def list_killed_periods(self, family: str | None = None) -> list[KilledPeriod]:
        pass


class ArtifactStore(ABC):
    """Where pipeline stages write their files."""

    @abstractmethod
    def write_mesh(self, name: str, mesh: TriMesh) -> Path:
        """
        Write a mesh and return its path.

        Args:
            name: Artifact name without extension
            mesh: Mesh to write
        """
        pass

    @abstractmethod
    def write_contour(self, name: str, contour: PolyContour) -> Path:
        pass

    @abstractmethod
    def write_reports(self, name: str, reports: list[ConvergenceReport]) -> Path:
        """Write one CSV row per convergence report."""
        pass

    @abstractmethod
    def write_ends(self, name: str, ends: list[EndDescriptor]) -> Path:
        pass

    @abstractmethod
    def write_text(self, name: str, text: str) -> Path:
        """Write a text artifact; ``name`` includes the extension."""
        pass
