"""Validation of JSON payloads and command-line values."""

import json
from pathlib import Path
from app.exceptions import ValidationError
from app.layout_config import LayoutConfig

PAYLOAD_FORMATS = {
    'graph': "dedup-layout/graph-v1",
    'store': "dedup-layout/store-v1",
    'code': "dedup-layout/code-v1",
    'folding': "dedup-layout/folding-v1",
}

ORACLE_TARGETS = ('bandwidth', 'stretch', 'jump', 'zerofrag', 'uf')


class PayloadValidator:
    """Validates payloads before they reach the domain constructors."""

    def __init__(self, config: LayoutConfig):
        """Initialize validator with configuration."""
        self.config = config

    def load_json(self, file_path) -> dict:
        """
        Read a JSON object from disk.

        Raises:
            ValidationError: If the file is missing or not a JSON object
        """
        path = Path(file_path)
        try:
            data = json.loads(path.read_text(encoding=self.config.default_encoding))
        except FileNotFoundError:
            raise ValidationError(f"Input file not found: {path}")
        except json.JSONDecodeError as e:
            raise ValidationError(f"'{path}' is not valid JSON: {e}")
        if not isinstance(data, dict):
            raise ValidationError(f"'{path}' must hold a JSON object")
        return data

    def validate_format(self, payload: dict, kind: str) -> dict:
        """
        Check the payload's "format" tag against the expected kind.

        Args:
            payload: Decoded JSON object
            kind: One of graph, store, code, folding

        Returns:
            The payload, unchanged

        Raises:
            ValidationError: If the tag is missing or names another format
        """
        if kind not in PAYLOAD_FORMATS:
            raise ValidationError(f"Unknown payload kind: {kind}")
        expected = PAYLOAD_FORMATS[kind]
        found = payload.get('format')
        if found != expected:
            raise ValidationError(f"Expected format '{expected}', got {found!r}")
        return payload

    def validate_positive_int(self, value, name: str) -> int:
        try:
            number = int(value)
        except (TypeError, ValueError):
            raise ValidationError(f"{name} must be an integer, got {value!r}")
        if number < 1:
            raise ValidationError(f"{name} must be at least 1, got {number}")
        return number

    def validate_max_length(self, value) -> int:
        """Maximum file length t; must be at least 1."""
        return self.validate_positive_int(value, "t")

    def validate_what(self, value: str) -> str:
        what = str(value).strip().lower()
        if what not in ORACLE_TARGETS:
            raise ValidationError(
                f"Unknown oracle target: {value}. Available: {', '.join(ORACLE_TARGETS)}"
            )
        return what

    def validate_family(self, name: str) -> str:
        from app.graph_families import GraphFamilyFactory

        family = str(name).strip().lower()
        available = GraphFamilyFactory.get_available_families()
        if family not in available:
            raise ValidationError(
                f"Unknown family: {name}. Available: {', '.join(sorted(available))}"
            )
        return family
