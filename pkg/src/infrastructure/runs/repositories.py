"""
Django implementation of RunRepository and a file-based ArtifactStore.
"""
import logging
from dataclasses import asdict
from pathlib import Path

from src.domain.contours.entities import PolyContour
from src.domain.plateau.entities import ConvergenceReport, TriMesh
from src.domain.runs.entities import KilledPeriod, RunRecord, RunStatus, StageReport
from src.domain.runs.repositories import ArtifactStore, RunRepository
from src.domain.shared.types import ConfigHash
from src.domain.symmetry.entities import EndDescriptor
from src.infrastructure.io.contour_file import write_contour
from src.infrastructure.io.ends_file import write_ends
from src.infrastructure.io.obj import export_obj
from src.infrastructure.io.reports import export_csv
from src.infrastructure.runs.models import KilledPeriodModel, RunRecordModel

logger = logging.getLogger(__name__)


class DjangoRunRepository(RunRepository):
    """
    Django implementation of RunRepository.

    This class implements the RunRepository interface using Django ORM.
    """

    def get_by_hash(self, config_hash: ConfigHash) -> RunRecord | None:
        try:
            model = RunRecordModel.objects.get(config_hash=config_hash)
            return self._to_domain_entity(model)
        except RunRecordModel.DoesNotExist:
            return None

    def save(self, record: RunRecord) -> RunRecord:
        model, _ = RunRecordModel.objects.update_or_create(
            config_hash=record.config_hash,
            defaults={
                "family": record.family,
                "started_at": record.started_at,
                "finished_at": record.finished_at,
                "status": record.status.value,
                "verdict": record.verdict,
                "stages": [asdict(stage) for stage in record.stages],
                "manifest": dict(record.manifest),
            },
        )
        return self._to_domain_entity(model)

    def list_runs(self, family: str | None = None, limit: int = 20) -> list[RunRecord]:
        queryset = RunRecordModel.objects.all()
        if family:
            queryset = queryset.filter(family=family)
        return [
            self._to_domain_entity(model)
            for model in queryset.order_by("-started_at")[:limit]
        ]

    def save_killed_period(self, killed: KilledPeriod) -> KilledPeriod:
        model, _ = KilledPeriodModel.objects.update_or_create(
            cache_key=killed.cache_key,
            defaults={
                "family": killed.family,
                "n": killed.n,
                "angle_or_weight": killed.angle_or_weight,
                "schedule": list(killed.schedule),
                "tolerances": dict(killed.tolerances),
                "parameters": dict(killed.parameters),
                "residual": killed.residual,
            },
        )
        return self._to_killed_period(model)

    def find_killed_period(self, cache_key: str) -> KilledPeriod | None:
        try:
            return self._to_killed_period(KilledPeriodModel.objects.get(cache_key=cache_key))
        except KilledPeriodModel.DoesNotExist:
            return None

    def list_killed_periods(self, family: str | None = None) -> list[KilledPeriod]:
        queryset = KilledPeriodModel.objects.all()
        if family:
            queryset = queryset.filter(family=family)
        return [self._to_killed_period(model) for model in queryset.order_by("n", "angle_or_weight")]

    def _to_domain_entity(self, model: RunRecordModel) -> RunRecord:
        """
        Convert Django model to domain entity.

        Args:
            model: Django run record model

        Returns:
            RunRecord domain entity
        """
        return RunRecord(
            config_hash=ConfigHash(model.config_hash),
            family=model.family,
            started_at=model.started_at,
            finished_at=model.finished_at,
            status=RunStatus(model.status),
            verdict=model.verdict,
            stages=[StageReport(**stage) for stage in model.stages],
            manifest=dict(model.manifest),
        )

    def _to_killed_period(self, model: KilledPeriodModel) -> KilledPeriod:
        return KilledPeriod(
            family=model.family,
            n=model.n,
            angle_or_weight=model.angle_or_weight,
            schedule=tuple(model.schedule),
            tolerances=dict(model.tolerances),
            parameters=dict(model.parameters),
            residual=model.residual,
        )


class FileArtifactStore(ArtifactStore):
    """Writes artifacts below one output directory, created on demand."""

    def __init__(self, directory: str | Path) -> None:
        self._directory = Path(directory)

    @property
    def directory(self) -> Path:
        return self._directory

    def _path(self, name: str) -> Path:
        self._directory.mkdir(parents=True, exist_ok=True)
        return self._directory / name

    def write_mesh(self, name: str, mesh: TriMesh) -> Path:
        path = self._path(f"{name}.obj")
        export_obj(mesh, path)
        logger.debug("Wrote mesh %s", path)
        return path

    def write_contour(self, name: str, contour: PolyContour) -> Path:
        return write_contour(contour, self._path(f"{name}.txt"))

    def write_reports(self, name: str, reports: list[ConvergenceReport]) -> Path:
        return export_csv(reports, self._path(f"{name}.csv"))

    def write_ends(self, name: str, ends: list[EndDescriptor]) -> Path:
        return write_ends(ends, self._path(f"{name}.txt"))

    def write_text(self, name: str, text: str) -> Path:
        path = self._path(name)
        path.write_text(text, encoding="utf-8")
        logger.debug("Wrote %s", path)
        return path
