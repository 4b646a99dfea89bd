"""Tests for custom exceptions."""

import pytest
from app.exceptions import (
    LayoutError,
    GraphError,
    StoreError,
    FoldingError,
    ReductionError,
    ConsistencyError,
    SizeGuardError,
    ValidationError,
    ConfigurationError,
    ReportError,
)


class TestExceptions:
    """Tests for the exception hierarchy."""

    @pytest.mark.parametrize('error', [
        GraphError,
        StoreError,
        FoldingError,
        ReductionError,
        ConsistencyError,
        SizeGuardError,
        ValidationError,
        ConfigurationError,
        ReportError,
    ])
    def test_inherits_layout_error(self, error):
        """Test every error derives from LayoutError."""
        assert issubclass(error, LayoutError)

    def test_message(self):
        """Test the message is kept."""
        with pytest.raises(LayoutError, match="lossy"):
            raise StoreError("store is lossy")
