"""CSV formatter: one row per check, or per flow start."""

import csv
import io
from collections.abc import Iterable
from typing import Any

from weinstein_tube.formatters.base import BaseFormatter
from weinstein_tube.models import MoserReport, SuiteReport

CHECK_COLUMNS = (
    "check_id",
    "anchor",
    "verdict",
    "n_samples",
    "worst_margin",
    "worst_lhs",
    "worst_rhs",
    "hypothesis",
    "provenance",
    "seed",
)

FLOW_COLUMNS = (
    "x",
    "xi",
    "endpoint_x",
    "endpoint_xi",
    "method",
    "steps",
    "stayed_inside",
    "method_gap",
    "residual",
)


def _cell(value: Any) -> Any:
    if value is None:
        return ""
    if isinstance(value, list):
        return " ".join(repr(float(v)) for v in value)
    if isinstance(value, float):
        return repr(value)
    return value


def _table(columns: Iterable[str], rows: Iterable[dict[str, Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    columns = list(columns)
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(row.get(c)) for c in columns])
    return buffer.getvalue()


class CSVFormatter(BaseFormatter):
    """Plot-ready CSV with a fixed column order."""

    def format(self, report: SuiteReport) -> str:
        return _table(CHECK_COLUMNS, (c.model_dump(mode="json") for c in report.checks))

    def format_moser(self, report: MoserReport) -> str:
        return _table(FLOW_COLUMNS, (s.model_dump(mode="json") for s in report.samples))
