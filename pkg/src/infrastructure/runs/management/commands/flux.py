"""
Discrete flux of a mesh boundary.
"""
from typing import Any

from django.core.management.base import CommandParser

from src.application.pipelines.commands import ComputeFluxCommand
from src.containers import UseCaseContainer
from src.infrastructure.io.obj import read_obj
from src.infrastructure.runs.management.base import RunCommand


class Command(RunCommand):
    help = "Print the discrete flux of a boundary arc, or of the whole boundary"

    def add_command_arguments(self, parser: CommandParser) -> None:
        parser.add_argument("mesh", help="OBJ file")
        parser.add_argument("--arc", help="Boundary arc label")

    def run(self, **options: Any) -> None:
        mesh = read_obj(options["mesh"])
        use_case = UseCaseContainer.compute_flux_use_case()
        flux = use_case.execute(ComputeFluxCommand(mesh=mesh, arc=options.get("arc")))
        self.stdout.write("FLUX " + " ".join(f"{v:.12g}" for v in flux))
