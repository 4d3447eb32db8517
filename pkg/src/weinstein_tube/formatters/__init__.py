"""Formatters for JSON, CSV and text output."""

from weinstein_tube.errors import InputError
from weinstein_tube.formatters.base import BaseFormatter
from weinstein_tube.formatters.csv_formatter import CSVFormatter
from weinstein_tube.formatters.json_formatter import JSONFormatter
from weinstein_tube.formatters.text_formatter import TextFormatter
from weinstein_tube.models import CheckReport, SuiteReport

FORMATTERS: dict[str, type[BaseFormatter]] = {
    "json": JSONFormatter,
    "csv": CSVFormatter,
    "text": TextFormatter,
}


def get_formatter(fmt: str) -> BaseFormatter:
    """Formatter instance for a format name."""
    try:
        return FORMATTERS[fmt]()
    except KeyError:
        raise InputError(
            f"unsupported format {fmt!r}; choose from {sorted(FORMATTERS)}"
        ) from None


def emit_report(reports: SuiteReport | list[CheckReport], fmt: str = "json") -> bytes:
    """Encode a suite report (or a bare list of checks) as UTF-8 bytes."""
    formatter = get_formatter(fmt)
    if not isinstance(reports, SuiteReport):
        reports = SuiteReport(checks=list(reports))
    return formatter.format(reports).encode("utf-8")


__all__ = [
    "BaseFormatter",
    "CSVFormatter",
    "FORMATTERS",
    "JSONFormatter",
    "TextFormatter",
    "emit_report",
    "get_formatter",
]
