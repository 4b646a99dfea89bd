"""Check table and JSON report persistence with pandas."""

import json
import pandas as pd
from pathlib import Path
from typing import Optional
from app.audit import CheckResult
from app.layout_config import LayoutConfig
from app.exceptions import ReportError


class ReportManager:
    """Keeps the recorded checks and writes them out."""

    def __init__(self, config: LayoutConfig):
        """
        Initialize report manager.

        Args:
            config: Layout configuration
        """
        self.config = config
        self._checks: list[CheckResult] = []

    def add_check(self, result: CheckResult):
        """
        Record a check.

        Args:
            result: Check to record
        """
        self._checks.append(result)

        if len(self._checks) > self.config.max_checks:
            self._checks = self._checks[-self.config.max_checks:]

    def get_checks(self) -> list[CheckResult]:
        return self._checks.copy()

    def clear_checks(self):
        self._checks.clear()

    def set_checks(self, checks: list[CheckResult]):
        self._checks = checks.copy()

    def summary(self) -> dict:
        """Pass and fail counts."""
        passed = sum(1 for c in self._checks if c.passed)
        return {
            'total': len(self._checks),
            'passed': passed,
            'failed': len(self._checks) - passed,
        }

    def save_to_csv(self, file_path: Optional[Path] = None) -> bool:
        """
        Save the check table to CSV using pandas.

        Args:
            file_path: Optional custom file path

        Returns:
            True if save was successful

        Raises:
            ReportError: If save fails
        """
        if not self._checks:
            return True

        file_path = file_path or self.config.report_file

        try:
            df = pd.DataFrame([c.to_dict() for c in self._checks])
            df.to_csv(
                file_path,
                index=False,
                encoding=self.config.default_encoding
            )
            return True
        except Exception as e:
            raise ReportError(f"Failed to save checks to CSV: {e}")

    def load_from_csv(self, file_path: Optional[Path] = None) -> bool:
        """
        Load the check table from CSV using pandas.

        Args:
            file_path: Optional custom file path

        Returns:
            True if load was successful, False if the file does not exist

        Raises:
            ReportError: If load fails
        """
        file_path = Path(file_path or self.config.report_file)

        if not file_path.exists():
            return False

        try:
            df = pd.read_csv(
                file_path,
                dtype=str,
                keep_default_na=False,
                encoding=self.config.default_encoding
            )

            checks = []
            for _, row in df.iterrows():
                try:
                    checks.append(CheckResult.from_dict(row.to_dict()))
                except Exception as e:
                    raise ReportError(f"Failed to parse check from CSV: {e}")

            self._checks = checks
            return True
        except pd.errors.EmptyDataError:
            self._checks = []
            return True
        except ReportError:
            raise
        except Exception as e:
            raise ReportError(f"Failed to load checks from CSV: {e}")

    def save_json(self, payload: dict, file_path: Path) -> Path:
        """
        Write a machine-readable report with sorted keys.

        Raises:
            ReportError: If the report cannot be written
        """
        file_path = Path(file_path)
        try:
            file_path.write_text(
                json.dumps(payload, indent=2, sort_keys=True, default=str),
                encoding=self.config.default_encoding
            )
            return file_path
        except Exception as e:
            raise ReportError(f"Failed to write report {file_path}: {e}")

    def save_frame(self, frame: pd.DataFrame, file_path: Path) -> Path:
        """Write a metric table (e.g. MetricReport.to_frame()) as CSV."""
        try:
            frame.to_csv(file_path, index=False, encoding=self.config.default_encoding)
            return Path(file_path)
        except Exception as e:
            raise ReportError(f"Failed to save table to CSV: {e}")
