"""Abstract base formatter for suite and Moser reports."""

from abc import ABC, abstractmethod

from weinstein_tube.models import MoserReport, SuiteReport


class BaseFormatter(ABC):
    """Abstract base class for output formatters."""

    @abstractmethod
    def format(self, report: SuiteReport) -> str:
        """Format the checks and certificates of one suite run.

        Args:
            report: Suite report, possibly with no checks.

        Returns:
            Formatted string with a stable field order.
        """
        pass

    @abstractmethod
    def format_moser(self, report: MoserReport) -> str:
        """Format the per-start summary of a Moser run."""
        pass
