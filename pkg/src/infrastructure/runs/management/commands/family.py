"""
Describe a family: parameters, limit contour and its validation.
"""
from typing import Any

from src.application.pipelines.commands import DescribeFamilyCommand
from src.containers import UseCaseContainer
from src.infrastructure.io.contour_file import format_contour, write_contour
from src.infrastructure.runs.management.base import RunCommand


class Command(RunCommand):
    help = "Print the parameters and the limit contour of the configured family"

    def run(self, **options: Any) -> None:
        config = self.load_run_config(options)
        use_case = UseCaseContainer.describe_family_use_case()
        limit, report = use_case.execute(DescribeFamilyCommand(family=config.family))
        self.stdout.write(f"FAMILY {config.family!r}")
        self.stdout.write(format_contour(limit), ending="")
        for label, angle in report.angles.items():
            self.stdout.write(f"ANGLE {label} {angle:.6f}")
        if options.get("out"):
            write_contour(limit, self.output_directory(options) / "limit_contour.txt")
        record = "VERDICT pass" if report.passed else "VERDICT fail " + "; ".join(report.failures)
        self.verdict(report.passed, record)
