"""JSON formatter for reports."""

import json

from weinstein_tube.formatters.base import BaseFormatter
from weinstein_tube.models import MoserReport, SuiteReport


class JSONFormatter(BaseFormatter):
    """Serialize reports as JSON; keys follow the model field order."""

    def format(self, report: SuiteReport) -> str:
        return json.dumps(report.model_dump(mode="json"), ensure_ascii=False)

    def format_moser(self, report: MoserReport) -> str:
        return json.dumps(report.model_dump(mode="json"), ensure_ascii=False)
