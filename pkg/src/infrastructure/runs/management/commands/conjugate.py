"""
Conjugate a minimal mesh and fit the planes of its boundary arcs.
"""
from typing import Any

from django.core.management.base import CommandParser

from src.application.pipelines.commands import ConjugateMeshCommand
from src.containers import UseCaseContainer
from src.domain.conjugate.transform import boundary_geodesic_planes
from src.infrastructure.io.obj import export_obj, read_obj
from src.infrastructure.runs.management.base import RunCommand


class Command(RunCommand):
    help = "Compute the discrete conjugate of an OBJ mesh"

    def add_command_arguments(self, parser: CommandParser) -> None:
        parser.add_argument("mesh", help="OBJ file of a minimal mesh")

    def run(self, **options: Any) -> None:
        mesh = read_obj(options["mesh"])
        config = self.load_run_config(options) if options.get("config") else None
        use_case = UseCaseContainer.conjugate_mesh_use_case()
        conjugate = use_case.execute(ConjugateMeshCommand(mesh=mesh, config=config))
        path = export_obj(conjugate, self.output_directory(options, config) / "conjugate.obj")
        self.stdout.write(f"Wrote {path}")
        for fit in boundary_geodesic_planes(conjugate):
            normal = " ".join(f"{v:.6f}" for v in fit.normal)
            self.stdout.write(f"PLANE {fit.label} {normal} {fit.offset:.6f} rms={fit.rms:.3e}")
