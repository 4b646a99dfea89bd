"""Tests for the logger."""

from unittest.mock import patch
from app.logger import Logger


class TestLogger:
    """Tests for Logger class."""

    def test_singleton(self):
        """Test that Logger is a singleton."""
        assert Logger() is Logger()

    def test_log_metric(self):
        """Test metric messages."""
        logger = Logger()
        with patch.object(logger.logger, 'info') as info:
            logger.log_metric('exact_bandwidth', 'n=5', 2)
            info.assert_called_once_with("Metric: exact_bandwidth(n=5) = 2")

    def test_log_discrepancy(self):
        """Test discrepancies are warnings."""
        logger = Logger()
        with patch.object(logger.logger, 'warning') as warning:
            logger.log_discrepancy('zero-frag length', 4, 3)
            warning.assert_called_once_with(
                "Discrepancy [zero-frag length]: expected 4, observed 3"
            )

    def test_log_error(self):
        """Test error messages."""
        logger = Logger()
        with patch.object(logger.logger, 'error') as error:
            logger.log_error('boom')
            error.assert_called_once_with('boom')
