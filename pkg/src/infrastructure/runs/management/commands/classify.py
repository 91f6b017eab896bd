"""
Classify an end configuration.
"""
from typing import Any

from django.core.management.base import CommandParser

from src.application.pipelines.commands import ClassifyEndsCommand
from src.containers import UseCaseContainer
from src.domain.symmetry.entities import Classification
from src.infrastructure.io.ends_file import read_ends
from src.infrastructure.runs.management.base import RunCommand


class Command(RunCommand):
    help = "Classify the ends listed in an end-configuration file"

    def add_command_arguments(self, parser: CommandParser) -> None:
        parser.add_argument("ends", help="End-configuration file")
        parser.add_argument("--n", type=int, required=True, help="Order of the dihedral group")

    def run(self, **options: Any) -> None:
        ends = read_ends(options["ends"])
        degrees = 0.5
        if options.get("config"):
            degrees = self.load_run_config(options).case_degrees
        use_case = UseCaseContainer.classify_ends_use_case()
        result = use_case.execute(ClassifyEndsCommand(ends=ends, n=options["n"], case_degrees=degrees))
        if result.added_ends:
            self.stderr.write(f"Completed the orbits with {result.added_ends} ends")
        rejected = {Classification.UNCLASSIFIABLE, Classification.CATENOID}
        self.verdict(result.kind not in rejected, result.record())
