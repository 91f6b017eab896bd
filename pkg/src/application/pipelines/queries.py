"""
Run cache queries (use cases) for read operations.
"""
from dataclasses import dataclass

from src.domain.runs.entities import KilledPeriod, RunRecord
from src.domain.runs.repositories import RunRepository
from src.domain.shared.types import ConfigHash


@dataclass
class GetRunQuery:
    """Query to get the run recorded for a configuration hash."""

    config_hash: str


@dataclass
class ListRunsQuery:
    """Query to list recent runs."""

    family: str | None = None
    limit: int = 20


@dataclass
class ListKilledPeriodsQuery:
    """Query to list killed periods and JMV thresholds."""

    family: str | None = None


class GetRunUseCase:
    """
    Use case for getting a run record.
    """

    def __init__(self, run_repository: RunRepository) -> None:
        """
        Initialize use case.

        Args:
            run_repository: Run cache
        """
        self._run_repository = run_repository

    def execute(self, query: GetRunQuery) -> RunRecord | None:
        """
        Raises:
            ValueError: If the hash is not hexadecimal
        """
        try:
            int(query.config_hash, 16)
        except ValueError as err:
            raise ValueError("Invalid configuration hash") from err
        return self._run_repository.get_by_hash(ConfigHash(query.config_hash.lower()))


class ListRunsUseCase:
    def __init__(self, run_repository: RunRepository) -> None:
        self._run_repository = run_repository

    def execute(self, query: ListRunsQuery) -> list[RunRecord]:
        if query.limit <= 0:
            raise ValueError("Limit must be positive")
        return self._run_repository.list_runs(query.family, query.limit)


class ListKilledPeriodsUseCase:
    def __init__(self, run_repository: RunRepository) -> None:
        self._run_repository = run_repository

    def execute(self, query: ListKilledPeriodsQuery) -> list[KilledPeriod]:
        return self._run_repository.list_killed_periods(query.family)
