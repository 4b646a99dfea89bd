"""Tests for the fixture suite."""

from app.paper_examples import SuiteResult, run_paper_examples
from app.audit import CheckResult


class TestPaperExamples:
    """Tests for run_paper_examples."""

    def test_suite_passes_without_oracle(self):
        """Test every fixture check passes."""
        result = run_paper_examples(include_oracle=False)
        failed = [str(c) for c in result.checks if not c.passed]
        assert failed == []
        assert result.passed

    def test_suite_with_oracle(self):
        """Test the exact cross-checks on the smallest size."""
        result = run_paper_examples(sizes=(1,), include_oracle=True)
        assert result.passed
        names = {c.check for c in result.checks}
        assert {'cycle bandwidth', 'long arcs bandwidth', 'zero-frag optimal length'} <= names

    def test_payload(self):
        """Test the Example 1 stretch rows."""
        payload = run_paper_examples(sizes=(1, 2), include_oracle=False).to_dict()
        rows = payload['example1_stretch']
        assert [row['N'] for row in rows] == [1, 2]
        assert rows[0]['coded'] == "2/1"
        assert rows[1]['uncoded'] == "4/1"
        assert payload['summary']['failed'] == 0
        assert payload['oracle'] is False

    def test_on_check_callback(self):
        """Test every check reaches the callback."""
        seen = []
        result = run_paper_examples(sizes=(1,), include_oracle=False, on_check=seen.append)
        assert len(seen) == len(result.checks)

    def test_failed_suite(self):
        """Test a failing check fails the suite."""
        result = SuiteResult(checks=[CheckResult.compare("a", "s", 1, 2)])
        assert not result.passed
        assert result.to_dict()['summary'] == {'total': 1, 'passed': 0, 'failed': 1}
