"""
Use case dependency injection containers.
"""
from dependency_injector import containers, providers

from src.application.pipelines.commands import (
    BuildContourUseCase,
    ClassifyEndsUseCase,
    ComputeFluxUseCase,
    ConjugateMeshUseCase,
    DescribeFamilyUseCase,
    EstimateThresholdUseCase,
    KillPeriodsUseCase,
    RunPipelineUseCase,
    ScanPeriodsUseCase,
    SolvePlateauUseCase,
)
from src.application.pipelines.queries import (
    GetRunUseCase,
    ListKilledPeriodsUseCase,
    ListRunsUseCase,
)
from src.containers.repositories import RepositoryContainer
from src.containers.services import ServiceContainer


class UseCaseContainer(containers.DeclarativeContainer):
    """
    Use case dependency injection container.

    This container manages all use case dependencies for the application.
    """

    # Command Use Cases
    run_pipeline_use_case = providers.Factory(
        RunPipelineUseCase,
        pipeline_application_service=ServiceContainer.pipeline_application_service,
    )

    describe_family_use_case = providers.Factory(
        DescribeFamilyUseCase,
        surface_application_service=ServiceContainer.surface_application_service,
    )

    build_contour_use_case = providers.Factory(
        BuildContourUseCase,
        surface_application_service=ServiceContainer.surface_application_service,
    )

    solve_plateau_use_case = providers.Factory(
        SolvePlateauUseCase,
        surface_application_service=ServiceContainer.surface_application_service,
    )

    conjugate_mesh_use_case = providers.Factory(
        ConjugateMeshUseCase,
        surface_application_service=ServiceContainer.surface_application_service,
    )

    kill_periods_use_case = providers.Factory(
        KillPeriodsUseCase,
        surface_application_service=ServiceContainer.surface_application_service,
    )

    scan_periods_use_case = providers.Factory(
        ScanPeriodsUseCase,
        surface_application_service=ServiceContainer.surface_application_service,
    )

    classify_ends_use_case = providers.Factory(
        ClassifyEndsUseCase,
        surface_application_service=ServiceContainer.surface_application_service,
    )

    compute_flux_use_case = providers.Factory(
        ComputeFluxUseCase,
        surface_application_service=ServiceContainer.surface_application_service,
    )

    estimate_threshold_use_case = providers.Factory(
        EstimateThresholdUseCase,
        run_repository=RepositoryContainer.run_repository,
    )

    # Query Use Cases
    get_run_use_case = providers.Factory(
        GetRunUseCase,
        run_repository=RepositoryContainer.run_repository,
    )

    list_runs_use_case = providers.Factory(
        ListRunsUseCase,
        run_repository=RepositoryContainer.run_repository,
    )

    list_killed_periods_use_case = providers.Factory(
        ListKilledPeriodsUseCase,
        run_repository=RepositoryContainer.run_repository,
    )
