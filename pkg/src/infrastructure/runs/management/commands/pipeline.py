"""
Run the full construction of the configured family.
"""
from typing import Any

from src.application.pipelines.commands import RunPipelineCommand
from src.containers import UseCaseContainer
from src.infrastructure.runs.management.base import RunCommand


class Command(RunCommand):
    help = "Run contour, periods, plateau, conjugate, extend and classify stages"

    def run(self, **options: Any) -> None:
        config = self.load_run_config(options)
        use_case = UseCaseContainer.run_pipeline_use_case()
        record = use_case.execute(RunPipelineCommand(config=config))
        for stage in record.stages:
            self.stdout.write(f"STAGE {stage.stage} {'pass' if stage.passed else 'fail'} {stage.seconds:.2f}s")
        for name, path in sorted(record.manifest.items()):
            self.stdout.write(f"ARTIFACT {name} {path}")
        self.verdict(record.passed, record.verdict or "VERDICT fail")
