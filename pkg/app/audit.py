"""Check record: one verified claim about a layout, store or bound."""

from datetime import datetime
from typing import Optional


def _truthy(value) -> bool:
    if isinstance(value, str):
        return value.strip().lower() in ('true', '1', 'yes')
    return bool(value)


class CheckResult:
    """Represents a single checked claim."""

    def __init__(
        self,
        check: str,
        subject: str,
        expected,
        observed,
        passed: bool,
        timestamp: Optional[datetime] = None
    ):
        """
        Initialize a check result.

        Args:
            check: Name of the claim, e.g. 'example1 coded stretch'
            subject: Instance the claim was checked on
            expected: Expected value or bound, as text
            observed: Computed value, as text
            passed: Whether the claim held
            timestamp: Time of the check (defaults to now)
        """
        self.check = check
        self.subject = subject
        self.expected = str(expected)
        self.observed = str(observed)
        self.passed = bool(passed)
        self.timestamp = timestamp or datetime.now()

    @classmethod
    def compare(cls, check: str, subject: str, expected, observed) -> 'CheckResult':
        """Result of an exact equality check."""
        return cls(check, subject, expected, observed, expected == observed)

    @classmethod
    def bound(cls, check: str, subject: str, limit, observed, strict: bool = False) -> 'CheckResult':
        """Result of an upper-bound check, observed <= limit (or < when strict)."""
        passed = observed < limit if strict else observed <= limit
        sign = '<' if strict else '<='
        return cls(check, subject, f"{sign} {limit}", observed, passed)

    def __str__(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.check}({self.subject}): expected {self.expected}, observed {self.observed}"

    def __repr__(self) -> str:
        return (
            f"CheckResult(check='{self.check}', subject='{self.subject}', "
            f"expected='{self.expected}', observed='{self.observed}', "
            f"passed={self.passed}, timestamp={self.timestamp})"
        )

    def to_dict(self) -> dict:
        """Convert to a dictionary for CSV and JSON reports."""
        return {
            'check': self.check,
            'subject': self.subject,
            'expected': self.expected,
            'observed': self.observed,
            'passed': self.passed,
            'timestamp': self.timestamp.isoformat()
        }

    @classmethod
    def from_dict(cls, data: dict) -> 'CheckResult':
        """Create a CheckResult from a dictionary (CSV deserialization)."""
        timestamp = datetime.fromisoformat(
            data['timestamp']
        ) if 'timestamp' in data else datetime.now()

        return cls(
            check=str(data['check']),
            subject=str(data['subject']),
            expected=data['expected'],
            observed=data['observed'],
            passed=_truthy(data['passed']),
            timestamp=timestamp
        )
