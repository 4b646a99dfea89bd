"""Logging functionality for layout construction and verification."""

import logging
from app.layout_config import LayoutConfig

LOGGER_NAME = 'dedup_layout'
LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


class Logger:
    """
    Process-wide logger for layout, metric and oracle events.

    Everything at INFO and above goes to the log file; discrepancies and
    errors also reach the console.
    """

    _instance = None
    _initialized = False

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __init__(self):
        if Logger._initialized:  # pragma: no cover
            return

        self.config = LayoutConfig()
        self.logger = logging.getLogger(LOGGER_NAME)
        self.logger.setLevel(logging.INFO)
        self.logger.handlers.clear()

        formatter = logging.Formatter(LOG_FORMAT)
        handlers = (
            (logging.FileHandler(self.config.log_file, encoding=self.config.default_encoding), logging.INFO),
            (logging.StreamHandler(), logging.WARNING),
        )
        for handler, level in handlers:
            handler.setLevel(level)
            handler.setFormatter(formatter)
            self.logger.addHandler(handler)
        Logger._initialized = True

    def log_metric(self, name: str, subject: str, value):
        """
        Log a computed value.

        Args:
            name: What was computed, e.g. 'exact_bandwidth'
            subject: Instance description
            value: Result
        """
        self.logger.info(f"Metric: {name}({subject}) = {value}")

    def log_discrepancy(self, topic: str, expected, observed):
        """Warn that a stated value and the computed one disagree."""
        self.logger.warning(
            f"Discrepancy [{topic}]: expected {expected}, observed {observed}"
        )

    def log_error(self, message: str):
        self.logger.error(message)

    def log_warning(self, message: str):
        self.logger.warning(message)

    def log_info(self, message: str):
        self.logger.info(message)
