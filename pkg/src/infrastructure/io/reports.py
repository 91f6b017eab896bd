"""
CSV exports of solver reports and residual scans.
"""
import csv
from collections.abc import Sequence
from pathlib import Path

from src.domain.conjugate.entities import ResidualTable
from src.domain.plateau.entities import ConvergenceReport

CONVERGENCE_COLUMNS = (
    "level",
    "truncation",
    "area",
    "displacement",
    "residual",
    "iterations",
    "graph",
    "embedded",
    "cauchy_deviation",
)


def _cell(value: object) -> object:
    return "" if value is None else value


def export_csv(reports: Sequence[ConvergenceReport], path: str | Path) -> Path:
    """One row per report, taken from its finest level."""
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(CONVERGENCE_COLUMNS)
        for index, report in enumerate(reports):
            final = report.final
            writer.writerow(
                [
                    index,
                    _cell(report.truncation),
                    repr(final.area),
                    repr(final.displacement),
                    repr(final.residual),
                    final.iterations,
                    _cell(final.is_graph),
                    _cell(final.is_embedded),
                    _cell(report.cauchy_deviation),
                ]
            )
    return path


def export_residual_csv(table: ResidualTable, path: str | Path) -> Path:
    """Residual scan as CSV: parameters, residual components, contour diameter."""
    path = Path(path)
    records = table.as_records()
    components = max((len(row.components) for row in table.rows), default=0)
    columns = [*table.names, *(f"residual_{i}" for i in range(components)), "diameter"]
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.DictWriter(handle, fieldnames=columns, restval="")
        writer.writeheader()
        for record, row in zip(records, table.rows):
            writer.writerow({**record, "diameter": row.diameter})
    return path
