"""Configuration management for the dedup-layout application."""

import os
from pathlib import Path
from dotenv import load_dotenv
from app.exceptions import ConfigurationError


def _read_int(name: str, default: str) -> int:
    try:
        return int(os.getenv(name, default))
    except ValueError:
        raise ConfigurationError(f"{name} must be an integer")


def _read_bool(name: str, default: str) -> bool:
    return os.getenv(name, default).lower() in ('true', '1', 'yes')


class LayoutConfig:
    """Manages configuration settings from environment variables."""

    def __init__(self):
        """Initialize configuration by loading environment variables."""
        load_dotenv()
        self._load_config()

    def _load_config(self):
        """Load and validate configuration values."""
        # Base directories
        self.log_dir = Path(
            os.getenv('DEDUP_LAYOUT_LOG_DIR', 'logs')
        )
        self.report_dir = Path(
            os.getenv('DEDUP_LAYOUT_REPORT_DIR', 'reports')
        )

        # Report settings
        self.auto_save = _read_bool('DEDUP_LAYOUT_AUTO_SAVE', 'true')
        self.max_checks = _read_int('DEDUP_LAYOUT_MAX_CHECKS', '10000')

        # Oracle settings
        self.guard_override = _read_bool('DEDUP_LAYOUT_GUARD_OVERRIDE', 'false')
        self.jobs = _read_int('DEDUP_LAYOUT_JOBS', '1')
        if self.jobs < 1:
            raise ConfigurationError("DEDUP_LAYOUT_JOBS must be at least 1")
        self.bandwidth_guard = _read_int('DEDUP_LAYOUT_BANDWIDTH_GUARD', '10')
        self.metric_guard = _read_int('DEDUP_LAYOUT_METRIC_GUARD', '8')
        self.zerofrag_guard = _read_int('DEDUP_LAYOUT_ZEROFRAG_GUARD', '6')
        self.uf_guard = _read_int('DEDUP_LAYOUT_UF_GUARD', '8')

        # Search caps
        self.default_root = _read_int('DEDUP_LAYOUT_DEFAULT_ROOT', '1')
        self.max_recovery_combos = _read_int(
            'DEDUP_LAYOUT_MAX_RECOVERY_COMBOS', '65536'
        )
        self.fold_search_limit = _read_int(
            'DEDUP_LAYOUT_FOLD_SEARCH_LIMIT', '200000'
        )
        self.max_groupings = _read_int('DEDUP_LAYOUT_MAX_GROUPINGS', '2000')

        self.default_encoding = os.getenv(
            'DEDUP_LAYOUT_DEFAULT_ENCODING', 'utf-8'
        )

        # File paths
        self.log_dir.mkdir(exist_ok=True)
        self.report_dir.mkdir(exist_ok=True)

        self.log_file = self.log_dir / 'dedup_layout.log'
        self.report_file = self.report_dir / 'checks.csv'
