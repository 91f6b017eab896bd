"""
Span a closed contour with a discrete least-area disk.
"""
from typing import Any

from django.core.management.base import CommandParser

from src.application.pipelines.commands import SolvePlateauCommand
from src.containers import UseCaseContainer
from src.domain.plateau.entities import SolverConfig
from src.infrastructure.io.contour_file import read_contour
from src.infrastructure.io.obj import export_obj
from src.infrastructure.io.reports import export_csv
from src.infrastructure.runs.management.base import RunCommand


class Command(RunCommand):
    help = "Solve the Plateau problem for a contour file"

    def add_command_arguments(self, parser: CommandParser) -> None:
        parser.add_argument("contour", help="Contour file")

    def run(self, **options: Any) -> None:
        contour = read_contour(options["contour"])
        config = self.load_run_config(options) if options.get("config") else None
        solver = config.solver if config else SolverConfig()
        use_case = UseCaseContainer.solve_plateau_use_case()
        mesh, report = use_case.execute(SolvePlateauCommand(contour=contour, solver=solver))
        directory = self.output_directory(options, config)
        export_obj(mesh, directory / "plateau.obj")
        export_csv([report], directory / "plateau.csv")
        final = report.final
        self.stdout.write(
            f"area={final.area:.10g} residual={final.residual:.3e} "
            f"graph={final.is_graph} embedded={final.is_embedded}"
        )
        self.verdict(report.area_monotone, f"VERDICT {'pass' if report.area_monotone else 'fail'}")
