"""
Run domain entities: per-run configuration, run records and killed periods.

These are pure domain objects with no dependencies on Django.
"""
from __future__ import annotations

import dataclasses
import hashlib
from collections.abc import Mapping
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import StrEnum
from pathlib import Path
from typing import Any

from src.domain.conjugate.entities import ConjugateTolerances
from src.domain.contours.entities import FAMILY_TYPES, FamilyKind, FamilySpec
from src.domain.plateau.entities import SolverConfig
from src.domain.shared.exceptions import ConfigError, DomainException
from src.domain.shared.types import ConfigHash


class CachePolicy(StrEnum):
    USE = "use"
    REFRESH = "refresh"
    OFF = "off"


class RunStatus(StrEnum):
    RUNNING = "running"
    PASSED = "passed"
    FAILED = "failed"


def _format(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return "none"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, tuple):
        return ",".join(_format(v) for v in value)
    return str(value)


def _parse(key: str, raw: str, like: Any) -> Any:
    """Parse ``raw`` into the type of ``like``."""
    text = raw.strip()
    try:
        if isinstance(like, bool):
            if text.lower() not in ("true", "false"):
                raise ValueError(text)
            return text.lower() == "true"
        if isinstance(like, int):
            return int(text)
        if isinstance(like, float):
            return float(text)
        if isinstance(like, tuple) or like is None:
            if text.lower() == "none":
                return None
            return tuple(float(part) for part in text.split(","))
        return text
    except ValueError:
        raise ConfigError(f"Invalid value for {key}: {raw!r}", {"key": key, "value": raw})


@dataclass(frozen=True)
class RunConfig:
    """
    Everything a pipeline run needs.

    ``schedule`` holds the truncation radii of the convergence stage;
    ``search_box`` and ``search_samples`` drive the period search;
    ``symmetry_tolerance`` is relative to the mean edge length of the
    extended mesh.
    """

    family: FamilySpec
    schedule: tuple[float, ...]
    solver: SolverConfig = field(default_factory=SolverConfig)
    tolerances: ConjugateTolerances = field(default_factory=ConjugateTolerances)
    output_directory: str = "runs"
    cache_policy: CachePolicy = CachePolicy.USE
    seed: int = 0
    search_box: tuple[float, float] = (0.2, 3.0)
    search_samples: int = 9
    symmetry_tolerance: float = 1e-2
    case_degrees: float = 0.5
    weld_tolerance: float = 1e-6

    def validate(self) -> None:
        """
        Raises:
            ConfigError: If the family, schedule or a tolerance is invalid
        """
        try:
            self.family.validate()
            self.solver.validate()
        except (DomainException, ValueError) as exc:
            raise ConfigError(str(exc), {"key": "family" if isinstance(exc, DomainException) else "solver"})
        radii = self.schedule
        if len(radii) < 3 or any(b <= a for a, b in zip(radii, radii[1:])) or radii[0] <= 0:
            raise ConfigError(
                "schedule must hold at least three positive, strictly increasing radii",
                {"key": "schedule", "value": list(radii)},
            )
        for name, value in (
            *((f"tol.{k}", v) for k, v in dataclasses.asdict(self.tolerances).items()),
            ("tol.symmetry", self.symmetry_tolerance),
            ("tol.case_degrees", self.case_degrees),
            ("tol.weld", self.weld_tolerance),
            ("search.samples", self.search_samples),
        ):
            if not value > 0:
                raise ConfigError(f"{name} must be positive", {"key": name, "value": value})
        lo, hi = self.search_box
        if not 0 < lo < hi:
            raise ConfigError("search box must satisfy 0 < lo < hi", {"key": "search.lo"})

    # Flat key-value view

    def to_items(self) -> dict[str, str]:
        """Flat ``section.name`` to text mapping; inverse of ``from_items``."""
        items = {"family.kind": self.family.kind.value}
        for f in dataclasses.fields(self.family):
            items[f"family.{f.name}"] = _format(getattr(self.family, f.name))
        items["schedule"] = _format(self.schedule)
        for f in dataclasses.fields(self.solver):
            items[f"solver.{f.name}"] = _format(getattr(self.solver, f.name))
        for f in dataclasses.fields(self.tolerances):
            items[f"tol.{f.name}"] = _format(getattr(self.tolerances, f.name))
        items.update(
            {
                "tol.symmetry": _format(self.symmetry_tolerance),
                "tol.case_degrees": _format(self.case_degrees),
                "tol.weld": _format(self.weld_tolerance),
                "search.lo": _format(self.search_box[0]),
                "search.hi": _format(self.search_box[1]),
                "search.samples": _format(self.search_samples),
                "output.directory": self.output_directory,
                "cache.policy": self.cache_policy.value,
                "seed": _format(self.seed),
            }
        )
        return items

    @classmethod
    def from_items(
        cls, items: Mapping[str, str], defaults: Mapping[str, str] | None = None
    ) -> RunConfig:
        """
        Build and validate a config from flat items.

        Keys missing from ``items`` are looked up in ``defaults`` and then in
        the dataclass defaults.

        Raises:
            ConfigError: On unknown keys, unparsable values or invalid settings
        """
        merged = {**(defaults or {}), **items}
        known = set(RunConfig(family=_placeholder_family(merged), schedule=(1.0, 2.0, 3.0)).to_items())
        unknown = sorted(set(items) - known)
        if unknown:
            raise ConfigError(f"Unknown configuration key {unknown[0]!r}", {"key": unknown[0]})
        if "schedule" not in merged:
            raise ConfigError("Missing required key 'schedule'", {"key": "schedule"})

        def section(prefix: str, instance: Any) -> dict[str, Any]:
            values = {}
            for f in dataclasses.fields(instance):
                key = f"{prefix}.{f.name}"
                if key in merged:
                    values[f.name] = _parse(key, merged[key], getattr(instance, f.name))
            return values

        family_type = type(_placeholder_family(merged))
        family_values = {}
        for f in dataclasses.fields(family_type):
            key = f"family.{f.name}"
            if key not in merged and f.default is dataclasses.MISSING:
                raise ConfigError(f"Missing required key {key!r}", {"key": key})
            if key in merged:
                family_values[f.name] = _parse(key, merged[key], 0 if f.name == "n" else 0.0)
        schedule = _parse("schedule", merged["schedule"], ())
        base = cls(family=family_type(**family_values), schedule=schedule)
        try:
            policy = CachePolicy(merged.get("cache.policy", base.cache_policy.value))
        except ValueError:
            raise ConfigError("cache.policy must be use, refresh or off", {"key": "cache.policy"})

        def scalar(key: str, like: Any) -> Any:
            return _parse(key, merged[key], like) if key in merged else like

        config = dataclasses.replace(
            base,
            solver=dataclasses.replace(base.solver, **section("solver", base.solver)),
            tolerances=dataclasses.replace(base.tolerances, **section("tol", base.tolerances)),
            output_directory=merged.get("output.directory", base.output_directory),
            cache_policy=policy,
            seed=scalar("seed", base.seed),
            search_box=(
                scalar("search.lo", base.search_box[0]),
                scalar("search.hi", base.search_box[1]),
            ),
            search_samples=scalar("search.samples", base.search_samples),
            symmetry_tolerance=scalar("tol.symmetry", base.symmetry_tolerance),
            case_degrees=scalar("tol.case_degrees", base.case_degrees),
            weld_tolerance=scalar("tol.weld", base.weld_tolerance),
        )
        config.validate()
        return config

    def config_hash(self) -> ConfigHash:
        """Digest of everything that influences results."""
        items = self.to_items()
        for key in ("output.directory", "cache.policy"):
            items.pop(key)
        canonical = "\n".join(f"{k}={v}" for k, v in sorted(items.items()))
        return ConfigHash(hashlib.sha256(canonical.encode()).hexdigest())


def _placeholder_family(items: Mapping[str, str]) -> FamilySpec:
    """Family of the requested kind with throwaway parameters, for key discovery."""
    kind_text = items.get("family.kind")
    if kind_text is None:
        raise ConfigError("Missing required key 'family.kind'", {"key": "family.kind"})
    try:
        family_type = FAMILY_TYPES[FamilyKind(kind_text)]
    except ValueError:
        raise ConfigError(f"Unknown family {kind_text!r}", {"key": "family.kind"})
    values = {
        f.name: (2 if f.name == "n" else 0.5)
        for f in dataclasses.fields(family_type)
        if f.default is dataclasses.MISSING
    }
    return family_type(**values)


@dataclass
class StageReport:
    """Outcome of one pipeline stage."""

    stage: str
    passed: bool
    seconds: float = 0.0
    summary: dict[str, Any] = field(default_factory=dict)


@dataclass
class RunRecord:
    """
    Run record entity.

    ``manifest`` maps artifact names to file paths; a passed run guarantees
    that every manifest file exists.
    """

    config_hash: ConfigHash
    family: str
    started_at: datetime = field(default_factory=lambda: datetime.now(timezone.utc))
    finished_at: datetime | None = None
    status: RunStatus = RunStatus.RUNNING
    verdict: str | None = None
    stages: list[StageReport] = field(default_factory=list)
    manifest: dict[str, str] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == RunStatus.PASSED

    def add_stage(self, report: StageReport) -> None:
        self.stages.append(report)

    def add_artifact(self, name: str, path: str | Path) -> None:
        self.manifest[name] = str(path)

    def finish(self, verdict: str | None, passed: bool) -> None:
        """Close the record with the final verdict."""
        self.verdict = verdict
        self.status = RunStatus.PASSED if passed else RunStatus.FAILED
        self.finished_at = datetime.now(timezone.utc)

    def missing_artifacts(self) -> list[str]:
        return [name for name, path in self.manifest.items() if not Path(path).exists()]


@dataclass(frozen=True)
class KilledPeriod:
    """
    Parameters at which the period residuals vanish, or an empirical
    feasibility threshold when ``family`` is JMV.
    """

    family: str
    n: int
    angle_or_weight: float
    schedule: tuple[float, ...]
    tolerances: dict[str, float]
    parameters: dict[str, float]
    residual: float

    @property
    def cache_key(self) -> str:
        canonical = "|".join(
            [
                self.family,
                str(self.n),
                repr(float(self.angle_or_weight)),
                ",".join(repr(float(r)) for r in self.schedule),
                ",".join(f"{k}={v!r}" for k, v in sorted(self.tolerances.items())),
            ]
        )
        return hashlib.sha256(canonical.encode()).hexdigest()
