"""
Service dependency injection containers.
"""
from dependency_injector import containers, providers

from src.application.services import (
    PipelineApplicationService,
    SurfaceApplicationService,
)
from src.containers.repositories import RepositoryContainer


class ServiceContainer(containers.DeclarativeContainer):
    """
    Service dependency injection container.

    This container manages all service dependencies for the application.
    """

    # Application Layer - Services
    surface_application_service = providers.Factory(SurfaceApplicationService)

    pipeline_application_service = providers.Factory(
        PipelineApplicationService,
        surface_service=surface_application_service,
        run_repository=RepositoryContainer.run_repository,
        artifact_store_factory=RepositoryContainer.artifact_store.provider,
    )
