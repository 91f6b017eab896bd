"""
Base management command with the flags shared by every subcommand.
"""
import logging
from pathlib import Path
from typing import Any

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError, CommandParser

from src.domain.runs.entities import RunConfig
from src.domain.shared.exceptions import DomainException
from src.infrastructure.io.config_file import load_config

logger = logging.getLogger(__name__)


class RunCommand(BaseCommand):
    """
    Base command that provides common functionality for all subcommands.

    Features:
    - Shared ``--config``, ``--out``, ``--schedule``, ``--tol`` and ``--seed`` flags
    - Domain exception handling: every failure becomes a ``CommandError``
    - Config loading with command-line overrides
    """

    requires_config = False

    def add_arguments(self, parser: CommandParser) -> None:
        parser.add_argument("--config", help="Run configuration file")
        parser.add_argument("--out", help="Output directory")
        parser.add_argument("--schedule", help="Truncation radii, e.g. 4,8,16")
        parser.add_argument(
            "--tol",
            action="append",
            default=[],
            metavar="NAME=VALUE",
            help="Override a tolerance; dotted names address any config key",
        )
        parser.add_argument("--seed", type=int, help="Seed for randomized suites")
        self.add_command_arguments(parser)

    def add_command_arguments(self, parser: CommandParser) -> None:
        """Hook for subcommand-specific arguments."""

    def handle(self, *args: Any, **options: Any) -> None:
        try:
            self.run(**options)
        except (DomainException, ValueError, OSError) as exc:
            message = getattr(exc, "message", str(exc))
            logger.debug("Command failed", exc_info=True)
            raise CommandError(message) from exc

    def run(self, **options: Any) -> None:
        raise NotImplementedError

    def overrides(self, options: dict[str, Any]) -> dict[str, str]:
        """Config items given on the command line."""
        items: dict[str, str] = {}
        for entry in options.get("tol") or []:
            name, sep, value = entry.partition("=")
            if not sep or not name.strip():
                raise ValueError(f"--tol expects NAME=VALUE, got {entry!r}")
            name = name.strip()
            items[name if "." in name else f"tol.{name}"] = value.strip()
        if options.get("schedule"):
            items["schedule"] = options["schedule"]
        if options.get("seed") is not None:
            items["seed"] = str(options["seed"])
        if options.get("out"):
            items["output.directory"] = options["out"]
        return items

    def load_run_config(self, options: dict[str, Any]) -> RunConfig:
        """
        Raises:
            CommandError: If no config file was given
        """
        if not options.get("config"):
            raise CommandError("--config is required for this command")
        return load_config(options["config"], self.overrides(options))

    def output_directory(self, options: dict[str, Any], config: RunConfig | None = None) -> Path:
        if options.get("out"):
            directory = Path(options["out"])
        elif config is not None:
            directory = Path(config.output_directory)
        else:
            directory = Path(settings.RUN_OUTPUT_DIR)
        directory.mkdir(parents=True, exist_ok=True)
        return directory

    def verdict(self, passed: bool, record: str) -> None:
        """Print a verdict line; a failed verdict ends with a non-zero exit."""
        self.stdout.write(record)
        if not passed:
            raise CommandError(f"Verdict failed: {record}")
