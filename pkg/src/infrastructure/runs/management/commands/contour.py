"""
Build and validate a truncated contour.
"""
from typing import Any

from django.core.management.base import CommandParser

from src.application.pipelines.commands import BuildContourCommand
from src.containers import UseCaseContainer
from src.infrastructure.io.contour_file import write_contour
from src.infrastructure.runs.management.base import RunCommand


class Command(RunCommand):
    help = "Build the truncated contour of the configured family"

    def add_command_arguments(self, parser: CommandParser) -> None:
        parser.add_argument(
            "--radius", type=float, help="Truncation radius; the largest scheduled one by default"
        )

    def run(self, **options: Any) -> None:
        config = self.load_run_config(options)
        radius = options.get("radius") or config.schedule[-1]
        use_case = UseCaseContainer.build_contour_use_case()
        contour, report = use_case.execute(
            BuildContourCommand(family=config.family, truncation=radius)
        )
        path = write_contour(contour, self.output_directory(options, config) / f"contour_R{radius:g}.txt")
        self.stdout.write(f"Wrote {path}")
        self.stdout.write(
            f"jordan={report.jordan} orientation={report.orientation} "
            f"agreement_radius={report.agreement_radius}"
        )
        record = "VERDICT pass" if report.passed else "VERDICT fail " + "; ".join(report.failures)
        self.verdict(report.passed, record)
