"""
Run configuration files: flat ``section.name = value`` lines.

Blank lines and ``#`` comments are ignored. Keys absent from the file fall
back to the Django settings, so the environment can move every default.
"""
from collections.abc import Mapping
from pathlib import Path

from django.conf import settings

from src.domain.runs.entities import RunConfig
from src.domain.shared.exceptions import ConfigError


def settings_defaults() -> dict[str, str]:
    """Config items backed by Django settings."""
    return {
        "solver.max_iterations": str(settings.SOLVER_MAX_ITERATIONS),
        "solver.displacement_tolerance": repr(settings.SOLVER_DISPLACEMENT_TOLERANCE),
        "solver.curvature_tolerance": repr(settings.SOLVER_CURVATURE_TOLERANCE),
        "solver.refinement_levels": str(settings.SOLVER_REFINEMENT_LEVELS),
        "solver.edge_length": repr(settings.SOLVER_EDGE_LENGTH),
        "solver.flip_interval": str(settings.SOLVER_FLIP_INTERVAL),
        "tol.residual_threshold": repr(settings.CONJUGATE_RESIDUAL_THRESHOLD),
        "tol.closure_tolerance": repr(settings.CONJUGATE_CLOSURE_TOLERANCE),
        "tol.period_tolerance": repr(settings.PERIOD_TOLERANCE),
        "tol.parallel_degrees": repr(settings.PLANE_PARALLEL_DEGREES),
        "tol.case_degrees": repr(settings.CASE_ANGLE_DEGREES),
        "tol.weld": repr(settings.WELD_TOLERANCE),
        "output.directory": str(settings.RUN_OUTPUT_DIR),
    }


def parse_items(text: str) -> tuple[dict[str, str], dict[str, int]]:
    """
    Items of a config text and the line number of each key.

    Raises:
        ConfigError: On a line without ``=`` or a repeated key
    """
    items: dict[str, str] = {}
    lines: dict[str, int] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep or not key:
            raise ConfigError(f"Line {number}: expected 'key = value'", {"line": number})
        if key in items:
            raise ConfigError(f"Line {number}: duplicate key {key!r}", {"line": number, "key": key})
        items[key] = value.strip()
        lines[key] = number
    return items, lines


def config_from_text(
    text: str,
    overrides: Mapping[str, str] | None = None,
    defaults: Mapping[str, str] | None = None,
) -> RunConfig:
    """
    Raises:
        ConfigError: Carrying the line number when the fault is in the file
    """
    items, lines = parse_items(text)
    items.update(overrides or {})
    try:
        return RunConfig.from_items(items, defaults)
    except ConfigError as exc:
        key = exc.details.get("key")
        line = lines.get(key) if key and key not in (overrides or {}) else None
        if line is None:
            raise
        raise ConfigError(f"Line {line}: {exc.message}", {**exc.details, "line": line})


def load_config(
    path: str | Path,
    overrides: Mapping[str, str] | None = None,
    defaults: Mapping[str, str] | None = None,
) -> RunConfig:
    """
    Load and validate a run configuration file.

    Args:
        path: Config file
        overrides: Items that replace file values, e.g. from ``--tol``
        defaults: Items used for keys the file omits; Django settings when None
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"Cannot read config {path}: {exc}", {"path": str(path)})
    return config_from_text(text, overrides, settings_defaults() if defaults is None else defaults)


def format_config(config: RunConfig) -> str:
    return "".join(f"{key} = {value}\n" for key, value in config.to_items().items())


def save_config(config: RunConfig, path: str | Path) -> Path:
    path = Path(path)
    path.write_text(format_config(config), encoding="utf-8")
    return path
