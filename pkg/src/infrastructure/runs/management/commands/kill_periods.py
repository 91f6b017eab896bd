"""
Kill the periods of P0 and Pg, or estimate the JMV weight threshold.
"""
from typing import Any

from django.core.management.base import CommandParser

from src.application.pipelines.commands import (
    EstimateThresholdCommand,
    KillPeriodsCommand,
    ScanPeriodsCommand,
)
from src.containers import UseCaseContainer
from src.domain.contours.entities import JMV
from src.infrastructure.io.reports import export_residual_csv
from src.infrastructure.runs.management.base import RunCommand


class Command(RunCommand):
    help = "Search the parameters at which the periods of the configured family vanish"

    def add_command_arguments(self, parser: CommandParser) -> None:
        parser.add_argument(
            "--weights",
            help="For JMV: comma-separated weights to scan for the feasibility threshold",
        )
        parser.add_argument(
            "--scan",
            action="store_true",
            help="Only tabulate the residuals along the search segment into residuals.csv",
        )

    def run(self, **options: Any) -> None:
        config = self.load_run_config(options)
        family = config.family
        if isinstance(family, JMV):
            if not options.get("weights"):
                raise ValueError("JMV needs --weights to scan")
            weights = [float(w) for w in options["weights"].split(",")]
            use_case = UseCaseContainer.estimate_threshold_use_case()
            killed = use_case.execute(
                EstimateThresholdCommand(n=family.n, weights=weights, truncation=config.schedule[-1])
            )
            if killed is None:
                self.verdict(False, f"VERDICT JMV n={family.n} reason='no feasible weight'")
                return
            self.verdict(True, f"VERDICT JMV n={family.n} w={killed.angle_or_weight:.12g}")
            return
        if options.get("scan"):
            table = UseCaseContainer.scan_periods_use_case().execute(
                ScanPeriodsCommand(config=config)
            )
            path = self.output_directory(options, config) / "residuals.csv"
            export_residual_csv(table, path)
            self.stdout.write(f"ARTIFACT {path}")
            return
        use_case = UseCaseContainer.kill_periods_use_case()
        found, residual = use_case.execute(KillPeriodsCommand(config=config))
        parameters = " ".join(f"{k}={v:.12g}" for k, v in sorted(residual.parameters.items()))
        passed = residual.within(config.tolerances.period_tolerance)
        self.stdout.write(f"PARAMETERS {parameters}")
        self.stdout.write(f"RESIDUAL {residual.norm:.6e} diameter={residual.diameter:.6g}")
        self.verdict(passed, f"VERDICT {found.kind.value} {'pass' if passed else 'fail'}")
