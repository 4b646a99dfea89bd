"""Observers notified whenever a check is recorded."""

from abc import ABC, abstractmethod
from app.audit import CheckResult


class CheckObserver(ABC):
    """Abstract observer for recorded checks."""

    @abstractmethod
    def on_check(self, result: CheckResult):
        """
        Called when a check has been recorded.

        Args:
            result: The recorded check
        """
        pass


class LoggingObserver(CheckObserver):
    """Logs passing checks as info and failing ones as discrepancies."""

    def __init__(self):
        from app.logger import Logger
        self.logger = Logger()

    def on_check(self, result: CheckResult):
        if result.passed:
            self.logger.log_info(str(result))
        else:
            self.logger.log_discrepancy(
                f"{result.check}({result.subject})",
                result.expected,
                result.observed
            )


class AutoSaveObserver(CheckObserver):
    """Persists the check table after every check."""

    def __init__(self, report_manager):
        """
        Initialize auto-save observer.

        Args:
            report_manager: ReportManager instance to use for saving
        """
        self.report_manager = report_manager

    def on_check(self, result: CheckResult):
        try:
            self.report_manager.save_to_csv()
        except Exception as e:
            from app.logger import Logger
            logger = Logger()
            logger.log_error(f"Auto-save failed: {e}")
