"""
Application services for coordinating domain operations.
"""
import dataclasses
import logging
import time
from collections.abc import Callable
from pathlib import Path
from typing import Any

import numpy as np

from src.domain.conjugate.entities import PeriodResidual, ResidualTable
from src.domain.conjugate.feasibility import jmv_feasibility
from src.domain.conjugate.periods import (
    kill_periods,
    period_residual_P0,
    period_residual_Pg,
    residual_radius,
    scan_residuals,
)
from src.domain.conjugate.transform import boundary_geodesic_planes, conjugate_mesh
from src.domain.contours.builders import build_contour, limit_arcs, limit_contour
from src.domain.contours.entities import (
    AA,
    AW,
    JM,
    JMV,
    P0,
    ContourReport,
    FamilyKind,
    FamilySpec,
    Pg,
    PolyContour,
)
from src.domain.contours.validation import validate_contour
from src.domain.plateau.convergence import converge_sequence
from src.domain.plateau.entities import ConvergenceReport, SolverConfig, TriMesh
from src.domain.plateau.flux import discrete_flux, loop_flux
from src.domain.plateau.solver import solve_plateau
from src.domain.plateau.triangulation import triangulate_disk
from src.domain.runs.entities import (
    CachePolicy,
    KilledPeriod,
    RunConfig,
    RunRecord,
    StageReport,
)
from src.domain.runs.repositories import ArtifactStore, RunRepository
from src.domain.shared.exceptions import DomainException, StageFailed
from src.domain.symmetry.asymptotics import ends_from_mesh
from src.domain.symmetry.classify import classify
from src.domain.symmetry.entities import (
    Classification,
    ClassificationResult,
    EndDescriptor,
)
from src.domain.symmetry.extension import (
    place_on_mirrors,
    reflect_extend,
    symmetry_residual,
)
from src.domain.symmetry.group import dihedral_group

logger = logging.getLogger(__name__)

# Family a pipeline run should be classified as. Pg shares the end
# configuration of P0; the classifier does not read the genus.
EXPECTED_CLASSIFICATION = {
    FamilyKind.JM: Classification.JM,
    FamilyKind.P0: Classification.P0,
    FamilyKind.PG: Classification.P0,
    FamilyKind.JMV: Classification.JMV,
    FamilyKind.AW: Classification.AW,
    FamilyKind.AA: Classification.AA,
}


class SurfaceApplicationService:
    """
    Application service for single-stage operations.

    Each method runs one capability of the domain on explicit inputs; the
    management commands and the pipeline both go through it.
    """

    def describe_family(self, family: FamilySpec) -> tuple[PolyContour, ContourReport]:
        """
        Limit contour of a family and its validation report.

        Args:
            family: Family parameters
        """
        family.validate()
        limit = limit_contour(family)
        return limit, validate_contour(limit)

    def build_contour(self, family: FamilySpec, R: float) -> tuple[PolyContour, ContourReport]:
        """
        Truncated contour and its validation report against the limit.

        Args:
            family: Family parameters
            R: Truncation radius
        """
        family.validate()
        contour = build_contour(family, R)
        return contour, validate_contour(contour, limit=limit_contour(family))

    def solve_contour(
        self, contour: PolyContour, cfg: SolverConfig
    ) -> tuple[TriMesh, ConvergenceReport]:
        """Least-area disk spanning a closed contour."""
        return solve_plateau(triangulate_disk(contour, cfg.edge_length), cfg)

    def converge(
        self, family: FamilySpec, schedule: tuple[float, ...], cfg: SolverConfig
    ) -> tuple[TriMesh, list[ConvergenceReport]]:
        return converge_sequence(family, schedule, cfg)

    def conjugate(self, mesh: TriMesh, config: RunConfig | None = None) -> TriMesh:
        tolerances = config.tolerances if config else None
        return conjugate_mesh(mesh, tolerances)

    def kill_periods(
        self, family: P0 | Pg, config: RunConfig
    ) -> tuple[FamilySpec, PeriodResidual]:
        """
        Parameters of ``family`` at which its periods vanish.

        Returns:
            The family with the found parameters and the final residual
        """
        point, residual = kill_periods(
            family,
            config.search_box,
            config.schedule[0],
            config.solver,
            config.tolerances,
            config.search_samples,
        )
        return dataclasses.replace(family, **point), residual

    def scan_periods(self, family: P0 | Pg, config: RunConfig) -> ResidualTable:
        """
        Residuals along the first search segment, for export.

        For P0 the segment runs from (s, t) = (lo, hi) to (hi, lo); for Pg
        from (t, u) = (hi, lo) to (lo, hi) at s = lo.
        """
        lo, hi = config.search_box
        fractions = np.linspace(0.0, 1.0, config.search_samples)
        R = residual_radius(config.search_box, config.schedule[0])
        if isinstance(family, P0):
            points = [{"s": lo + f * (hi - lo), "t": hi - f * (hi - lo)} for f in fractions]

            def residual(point: dict[str, float]) -> PeriodResidual:
                return period_residual_P0(
                    family.n, family.theta, point["s"], point["t"], R,
                    config.solver, config.tolerances,
                )

        else:
            points = [
                {"s": lo, "t": hi - f * (hi - lo), "u": lo + f * (hi - lo)} for f in fractions
            ]

            def residual(point: dict[str, float]) -> PeriodResidual:
                return period_residual_Pg(
                    family.n, family.theta, point["s"], point["t"], point["u"], R,
                    config.solver, config.tolerances,
                )

        return scan_residuals(residual, points)

    def classify(
        self, ends: list[EndDescriptor], n: int, case_degrees: float
    ) -> ClassificationResult:
        return classify(ends, n, case_degrees)

    def flux(self, mesh: TriMesh, arc: str | None = None) -> np.ndarray:
        """Discrete flux of one arc, or of the whole boundary."""
        return discrete_flux(mesh, arc)

    def loop_fluxes(self, mesh: TriMesh) -> list[np.ndarray]:
        return [loop_flux(mesh, loop) for loop in mesh.boundary_loops()]


class PipelineApplicationService:
    """
    Application service running the whole construction of a family.

    Stages run in order: contour, periods, plateau, conjugate, extend,
    classify. The periods stage kills periods for P0 and Pg, checks
    feasibility for JMV and is skipped otherwise. The tetroid stops after
    the conjugate stage because its symmetry group is not dihedral.
    """

    def __init__(
        self,
        surface_service: SurfaceApplicationService,
        run_repository: RunRepository,
        artifact_store_factory: Callable[[Path], ArtifactStore],
    ) -> None:
        """
        Initialize pipeline application service.

        Args:
            surface_service: Single-stage operations
            run_repository: Run cache
            artifact_store_factory: Builds the store for a run directory
        """
        self._surface_service = surface_service
        self._run_repository = run_repository
        self._artifact_store_factory = artifact_store_factory

    def run_pipeline(self, config: RunConfig) -> RunRecord:
        """
        Run every stage applicable to the configured family.

        Returns:
            The finished run record; a cached one when the cache policy
            allows it and all of its artifacts still exist

        Raises:
            ConfigError: If the configuration is invalid
            StageFailed: With the stage tag, after the failed record is saved
        """
        config.validate()
        config_hash = config.config_hash()
        if config.cache_policy == CachePolicy.USE:
            cached = self._run_repository.get_by_hash(config_hash)
            if cached is not None and cached.passed and not cached.missing_artifacts():
                logger.info("Cache hit for run %s", config_hash[:12])
                return cached

        record = RunRecord(config_hash=config_hash, family=config.family.kind.value)
        store = self._artifact_store_factory(Path(config.output_directory) / config_hash[:12])
        run = _PipelineRun(self._surface_service, self._run_repository, store, config, record)
        try:
            passed = run.execute()
        except StageFailed:
            record.finish(None, passed=False)
            self._save(config, record)
            raise
        self._save(config, record)
        logger.info("Run %s finished: %s", config_hash[:12], record.verdict)
        if not passed:
            logger.warning("Run %s failed its verdict", config_hash[:12])
        return record

    def _save(self, config: RunConfig, record: RunRecord) -> None:
        if config.cache_policy != CachePolicy.OFF:
            self._run_repository.save(record)


class _PipelineRun:
    """State of one pipeline execution; one method per stage."""

    def __init__(
        self,
        surface_service: SurfaceApplicationService,
        run_repository: RunRepository,
        store: ArtifactStore,
        config: RunConfig,
        record: RunRecord,
    ) -> None:
        self.surface = surface_service
        self.repository = run_repository
        self.store = store
        self.config = config
        self.record = record
        self.family: FamilySpec = config.family
        self.plateau: TriMesh | None = None
        self.conjugate: TriMesh | None = None
        self.extended: TriMesh | None = None
        self.result: ClassificationResult | None = None

    def stage(self, name: str, action: Callable[[], dict[str, Any]]) -> None:
        """Run one stage, timing it and tagging its failures."""
        logger.info("Stage %s started", name)
        started = time.perf_counter()
        try:
            summary = action()
        except (DomainException, ValueError) as exc:
            seconds = time.perf_counter() - started
            message = getattr(exc, "message", str(exc))
            failure = {"error": type(exc).__name__, "message": message}
            self.record.add_stage(StageReport(name, False, seconds, failure))
            logger.error("Stage %s failed: %s", name, message)
            raise StageFailed(
                f"Stage {name} failed: {message}",
                {"stage": name, "cause": type(exc).__name__, **getattr(exc, "details", {})},
            ) from exc
        seconds = time.perf_counter() - started
        passed = bool(summary.pop("passed", True))
        self.record.add_stage(StageReport(name, passed, seconds, summary))
        logger.info("Stage %s finished in %.2fs", name, seconds)
        if not passed:
            raise StageFailed(f"Stage {name} did not pass", {"stage": name, **summary})

    def execute(self) -> bool:
        """Run the stages; True when the final verdict matches the family."""
        kind = self.family.kind
        self.stage("contour", self.contour_stage)
        if isinstance(self.family, P0 | Pg):
            self.stage("periods", self.periods_stage)
        elif isinstance(self.family, JMV):
            self.stage("periods", self.feasibility_stage)
        self.stage("plateau", self.plateau_stage)
        self.stage("conjugate", self.conjugate_stage)
        if kind not in EXPECTED_CLASSIFICATION:
            self.record.finish(f"VERDICT {kind.value} reason='conjugate piece only'", passed=True)
            return True
        self.stage("extend", self.extend_stage)
        self.stage("classify", self.classify_stage)
        assert self.result is not None
        passed = self.result.kind == EXPECTED_CLASSIFICATION[kind]
        self.record.finish(self.result.record(), passed=passed)
        return passed

    def contour_stage(self) -> dict[str, Any]:
        contour, report = self.surface.build_contour(self.family, self.config.schedule[-1])
        self.record.add_artifact("contour", self.store.write_contour("contour", contour))
        return {
            "passed": report.passed,
            "failures": list(report.failures),
            "agreement_radius": report.agreement_radius,
        }

    def periods_stage(self) -> dict[str, Any]:
        assert isinstance(self.family, P0 | Pg)
        config = self.config
        key = KilledPeriod(
            family=self.family.kind.value,
            n=self.family.n,
            angle_or_weight=self.family.theta,
            schedule=(config.schedule[0],),
            tolerances=dataclasses.asdict(config.tolerances),
            parameters={},
            residual=0.0,
        )
        if config.cache_policy == CachePolicy.USE:
            cached = self.repository.find_killed_period(key.cache_key)
            if cached is not None:
                logger.info("Reusing killed periods %s", cached.parameters)
                self.family = dataclasses.replace(self.family, **cached.parameters)
                return {"parameters": cached.parameters, "residual": cached.residual}
        family, residual = self.surface.kill_periods(self.family, config)
        self.family = family
        parameters = {
            name: float(getattr(family, name)) for name in ("s", "t", "u") if hasattr(family, name)
        }
        if config.cache_policy != CachePolicy.OFF:
            self.repository.save_killed_period(
                dataclasses.replace(key, parameters=parameters, residual=residual.norm)
            )
        return {
            "parameters": parameters,
            "residual": residual.norm,
            "passed": residual.within(config.tolerances.period_tolerance),
        }

    def feasibility_stage(self) -> dict[str, Any]:
        assert isinstance(self.family, JMV)
        report = jmv_feasibility(self.family.n, self.family.w, self.config.schedule[-1])
        return {"passed": report.feasible, "clearance": report.clearance}

    def plateau_stage(self) -> dict[str, Any]:
        mesh, reports = self.surface.converge(self.family, self.config.schedule, self.config.solver)
        self.plateau = mesh
        self.record.add_artifact("plateau", self.store.write_mesh("plateau", mesh))
        self.record.add_artifact("convergence", self.store.write_reports("convergence", reports))
        deviations = [r.cauchy_deviation for r in reports if r.cauchy_deviation is not None]
        return {
            "area": reports[-1].final.area,
            "deviations": deviations,
            "passed": all(b < a for a, b in zip(deviations, deviations[1:])),
        }

    def conjugate_stage(self) -> dict[str, Any]:
        assert self.plateau is not None
        self.conjugate = self.surface.conjugate(self.plateau, self.config)
        self.record.add_artifact("conjugate", self.store.write_mesh("conjugate", self.conjugate))
        planes = boundary_geodesic_planes(self.conjugate)
        return {"plane_rms": {fit.label: fit.rms for fit in planes}}

    def extend_stage(self) -> dict[str, Any]:
        assert self.conjugate is not None
        assert isinstance(self.family, JM | P0 | Pg | JMV | AW | AA)
        group = dihedral_group(self.family.n)
        contour = build_contour(self.family, self.config.schedule[-1])
        mirrors = limit_arcs(contour, limit_contour(self.family))
        free = [label for label in contour.segment_labels() if label not in mirrors]
        placed, mapping = place_on_mirrors(self.conjugate, group, mirrors)
        extended = reflect_extend(placed, group, self.config.weld_tolerance, free)
        self.extended = extended
        self.record.add_artifact("extended", self.store.write_mesh("extended", extended))
        edges = extended.edges()
        lengths = np.linalg.norm(
            extended.vertices[edges[:, 0]] - extended.vertices[edges[:, 1]], axis=1
        )
        residual = symmetry_residual(extended, group)
        fluxes = self.surface.loop_fluxes(extended)
        largest = max((float(np.linalg.norm(f)) for f in fluxes), default=0.0)
        imbalance = float(np.linalg.norm(np.sum(fluxes, axis=0))) if fluxes else 0.0
        return {
            "mirrors": mapping,
            "symmetry_residual": residual,
            "mean_edge": float(lengths.mean()),
            "flux_imbalance": imbalance,
            "passed": residual <= self.config.symmetry_tolerance * float(lengths.mean())
            and imbalance <= 1e-4 * max(largest, 1e-300),
        }

    def classify_stage(self) -> dict[str, Any]:
        assert self.extended is not None
        assert isinstance(self.family, JM | P0 | Pg | JMV | AW | AA)
        ends = ends_from_mesh(self.extended)
        self.record.add_artifact("ends", self.store.write_ends("ends", ends))
        self.result = self.surface.classify(ends, self.family.n, self.config.case_degrees)
        verdict = self.store.write_text("verdict.txt", self.result.record() + "\n")
        self.record.add_artifact("verdict", verdict)
        return {"kind": self.result.kind.value, "parameters": self.result.parameters}
