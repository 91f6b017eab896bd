"""
Repository dependency injection containers.
"""
from dependency_injector import containers, providers

from src.infrastructure.runs.repositories import DjangoRunRepository, FileArtifactStore


class RepositoryContainer(containers.DeclarativeContainer):
    """
    Repository dependency injection container.

    This container manages the run cache and the artifact store factory.
    """

    # Infrastructure Layer - Repositories
    run_repository = providers.Singleton(DjangoRunRepository)

    artifact_store = providers.Factory(FileArtifactStore)
