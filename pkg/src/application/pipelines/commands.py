"""
Pipeline application commands (use cases) for write operations.
"""
from dataclasses import dataclass

import numpy as np

from src.application.services import (
    PipelineApplicationService,
    SurfaceApplicationService,
)
from src.domain.conjugate.entities import PeriodResidual, ResidualTable
from src.domain.conjugate.feasibility import estimate_jmv_threshold
from src.domain.contours.entities import (
    P0,
    ContourReport,
    FamilySpec,
    Pg,
    PolyContour,
)
from src.domain.plateau.entities import ConvergenceReport, SolverConfig, TriMesh
from src.domain.runs.entities import KilledPeriod, RunConfig, RunRecord
from src.domain.runs.repositories import RunRepository
from src.domain.symmetry.entities import ClassificationResult, EndDescriptor


@dataclass
class RunPipelineCommand:
    """Command to run the full construction of a family."""

    config: RunConfig


@dataclass
class DescribeFamilyCommand:
    """Command to build and validate the limit contour of a family."""

    family: FamilySpec


@dataclass
class BuildContourCommand:
    """Command to build a truncated contour."""

    family: FamilySpec
    truncation: float


@dataclass
class SolvePlateauCommand:
    """Command to span a closed contour with a least-area disk."""

    contour: PolyContour
    solver: SolverConfig


@dataclass
class ConjugateMeshCommand:
    """Command to conjugate a discrete minimal surface."""

    mesh: TriMesh
    config: RunConfig | None = None


@dataclass
class KillPeriodsCommand:
    """Command to search the free parameters of P0 or Pg."""

    config: RunConfig


@dataclass
class ScanPeriodsCommand:
    """Command to tabulate the period residuals along the first search segment."""

    config: RunConfig


@dataclass
class ClassifyEndsCommand:
    """Command to classify an end configuration."""

    ends: list[EndDescriptor]
    n: int
    case_degrees: float = 0.5


@dataclass
class ComputeFluxCommand:
    """Command to compute the discrete flux of a mesh boundary."""

    mesh: TriMesh
    arc: str | None = None


@dataclass
class EstimateThresholdCommand:
    """Command to scan JMV feasibility over weights and record the threshold."""

    n: int
    weights: list[float]
    truncation: float


class RunPipelineUseCase:
    """
    Use case for running a pipeline.
    """

    def __init__(self, pipeline_application_service: PipelineApplicationService) -> None:
        """
        Initialize use case.

        Args:
            pipeline_application_service: Pipeline application service
        """
        self._pipeline_application_service = pipeline_application_service

    def execute(self, command: RunPipelineCommand) -> RunRecord:
        """
        Execute the use case.

        Args:
            command: Command containing the run configuration

        Returns:
            Finished run record

        Raises:
            ConfigError: If the configuration is invalid
            StageFailed: If a stage fails
        """
        return self._pipeline_application_service.run_pipeline(command.config)


class _SurfaceUseCase:
    def __init__(self, surface_application_service: SurfaceApplicationService) -> None:
        """
        Initialize use case.

        Args:
            surface_application_service: Single-stage surface operations
        """
        self._surface_application_service = surface_application_service


class DescribeFamilyUseCase(_SurfaceUseCase):
    def execute(self, command: DescribeFamilyCommand) -> tuple[PolyContour, ContourReport]:
        return self._surface_application_service.describe_family(command.family)


class BuildContourUseCase(_SurfaceUseCase):
    """
    Use case for building a truncated contour.
    """

    def execute(self, command: BuildContourCommand) -> tuple[PolyContour, ContourReport]:
        """
        Raises:
            ValueError: If the truncation radius is not positive
            InvalidParams: If the family parameters or the radius are invalid
        """
        if not command.truncation > 0:
            raise ValueError("Truncation radius must be positive")
        return self._surface_application_service.build_contour(
            command.family, command.truncation
        )


class SolvePlateauUseCase(_SurfaceUseCase):
    def execute(self, command: SolvePlateauCommand) -> tuple[TriMesh, ConvergenceReport]:
        """
        Raises:
            ValueError: If the contour is a limit contour
        """
        if not command.contour.closed:
            raise ValueError("Only closed contours can be spanned")
        command.solver.validate()
        return self._surface_application_service.solve_contour(command.contour, command.solver)


class ConjugateMeshUseCase(_SurfaceUseCase):
    def execute(self, command: ConjugateMeshCommand) -> TriMesh:
        return self._surface_application_service.conjugate(command.mesh, command.config)


class KillPeriodsUseCase(_SurfaceUseCase):
    """
    Use case for killing the periods of P0 and Pg.
    """

    def execute(self, command: KillPeriodsCommand) -> tuple[FamilySpec, PeriodResidual]:
        """
        Raises:
            ValueError: If the configured family has no period problem
            NoSignChange: If the scan finds no sign change
        """
        family = command.config.family
        if not isinstance(family, P0 | Pg):
            raise ValueError(f"Family {family.kind.value} has no period problem")
        command.config.validate()
        return self._surface_application_service.kill_periods(family, command.config)


class ScanPeriodsUseCase(_SurfaceUseCase):
    def execute(self, command: ScanPeriodsCommand) -> ResidualTable:
        family = command.config.family
        if not isinstance(family, P0 | Pg):
            raise ValueError(f"Family {family.kind.value} has no period problem")
        command.config.validate()
        return self._surface_application_service.scan_periods(family, command.config)


class ClassifyEndsUseCase(_SurfaceUseCase):
    def execute(self, command: ClassifyEndsCommand) -> ClassificationResult:
        """
        Raises:
            ValueError: If no ends are given
        """
        if not command.ends:
            raise ValueError("At least one end is required")
        return self._surface_application_service.classify(
            command.ends, command.n, command.case_degrees
        )


class ComputeFluxUseCase(_SurfaceUseCase):
    def execute(self, command: ComputeFluxCommand) -> np.ndarray:
        return self._surface_application_service.flux(command.mesh, command.arc)


class EstimateThresholdUseCase:
    """
    Use case for the empirical JMV weight threshold of one n.
    """

    def __init__(self, run_repository: RunRepository) -> None:
        """
        Initialize use case.

        Args:
            run_repository: Run cache where the threshold is recorded
        """
        self._run_repository = run_repository

    def execute(self, command: EstimateThresholdCommand) -> KilledPeriod | None:
        """
        Returns:
            The recorded threshold, or None when no weight was feasible

        Raises:
            ValueError: If no weights are given
        """
        if not command.weights:
            raise ValueError("At least one weight is required")
        threshold, reports = estimate_jmv_threshold(
            command.n, sorted(command.weights), command.truncation
        )
        if threshold is None:
            return None
        clearance = next(r.clearance for r in reports if r.w == threshold)
        return self._run_repository.save_killed_period(
            KilledPeriod(
                family="JMV",
                n=command.n,
                angle_or_weight=threshold,
                schedule=(command.truncation,),
                tolerances={},
                parameters={"w": threshold, "clearance": clearance},
                residual=0.0,
            )
        )
