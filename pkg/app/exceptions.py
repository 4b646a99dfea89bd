"""Custom exceptions for the dedup-layout application."""


class LayoutError(Exception):
    """Base exception for chunk-store layout errors."""
    pass


class GraphError(LayoutError):
    """Exception raised for malformed graphs, trees or paths."""
    pass


class StoreError(LayoutError):
    """Exception raised for invalid or lossy chunk stores."""
    pass


class FoldingError(LayoutError):
    """Exception raised when a folding or fold plan is invalid."""
    pass


class ReductionError(LayoutError):
    """Exception raised when a coded-store reduction cannot proceed."""
    pass


class ConsistencyError(LayoutError):
    """Exception raised when a proven guarantee is observed violated."""
    pass


class SizeGuardError(LayoutError):
    """Exception raised when an oracle instance exceeds its size guard."""
    pass


class ValidationError(LayoutError):
    """Exception raised for input payload validation errors."""
    pass


class ConfigurationError(LayoutError):
    """Exception raised for configuration-related errors."""
    pass


class ReportError(LayoutError):
    """Exception raised for report persistence errors."""
    pass
