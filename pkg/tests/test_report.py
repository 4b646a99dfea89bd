"""Tests for check table and report persistence."""

import json
from unittest.mock import patch

import pandas as pd
import pytest
from app.audit import CheckResult
from app.layout_config import LayoutConfig
from app.report import ReportManager
from app.exceptions import ReportError


class TestReportManager:
    """Tests for ReportManager class."""

    def setup_method(self):
        """Set up test fixtures."""
        self.config = LayoutConfig()
        self.manager = ReportManager(self.config)

    def teardown_method(self):
        """Clean up after tests."""
        self.manager.clear_checks()

    def test_add_check(self):
        """Test adding checks."""
        self.manager.add_check(CheckResult.compare("a", "s", 1, 1))
        self.manager.add_check(CheckResult.compare("b", "s", 1, 2))
        assert len(self.manager.get_checks()) == 2
        assert self.manager.summary() == {'total': 2, 'passed': 1, 'failed': 1}

    def test_max_checks(self, monkeypatch):
        """Test the table keeps the newest checks only."""
        monkeypatch.setenv('DEDUP_LAYOUT_MAX_CHECKS', '2')
        manager = ReportManager(LayoutConfig())
        for i in range(3):
            manager.add_check(CheckResult.compare(f"c{i}", "s", i, i))
        assert [c.check for c in manager.get_checks()] == ['c1', 'c2']

    def test_csv_round_trip(self, tmp_path):
        """Test saving and loading the check table."""
        path = tmp_path / 'checks.csv'
        self.manager.add_check(CheckResult.bound("displacement", "rainbow(3)", 2, 2))
        assert self.manager.save_to_csv(path)
        other = ReportManager(self.config)
        assert other.load_from_csv(path)
        loaded = other.get_checks()
        assert len(loaded) == 1
        assert loaded[0].expected == "<= 2"
        assert loaded[0].passed is True

    def test_save_empty(self, tmp_path):
        """Test that saving nothing writes nothing."""
        path = tmp_path / 'checks.csv'
        assert self.manager.save_to_csv(path)
        assert not path.exists()

    def test_load_missing(self, tmp_path):
        """Test loading a missing file."""
        assert not self.manager.load_from_csv(tmp_path / 'missing.csv')

    def test_load_empty_file(self, tmp_path):
        """Test loading an empty file."""
        path = tmp_path / 'empty.csv'
        path.write_text('')
        assert self.manager.load_from_csv(path)
        assert self.manager.get_checks() == []

    def test_load_malformed(self, tmp_path):
        """Test loading rows without the required columns."""
        path = tmp_path / 'bad.csv'
        path.write_text('foo,bar\n1,2\n')
        with pytest.raises(ReportError):
            self.manager.load_from_csv(path)

    def test_save_error(self, tmp_path):
        """Test that a failing write surfaces as ReportError."""
        self.manager.add_check(CheckResult.compare("a", "s", 1, 1))
        with patch('pandas.DataFrame.to_csv', side_effect=IOError("disk full")):
            with pytest.raises(ReportError, match="disk full"):
                self.manager.save_to_csv(tmp_path / 'checks.csv')

    def test_save_json(self, tmp_path):
        """Test JSON reports use sorted keys."""
        path = self.manager.save_json({'b': 1, 'a': 2}, tmp_path / 'out.json')
        text = path.read_text()
        assert text.index('"a"') < text.index('"b"')
        assert json.loads(text) == {'a': 2, 'b': 1}

    def test_save_json_error(self, tmp_path):
        """Test writing into a missing directory."""
        with pytest.raises(ReportError):
            self.manager.save_json({}, tmp_path / 'missing' / 'out.json')

    def test_save_frame(self, tmp_path):
        """Test writing a metric table."""
        frame = pd.DataFrame([{'path': '(1,2)', 'min_stretch': '1/1'}])
        path = self.manager.save_frame(frame, tmp_path / 'table.csv')
        assert pd.read_csv(path).shape == (1, 2)

    def test_save_frame_error(self, tmp_path):
        """Test a failing table write."""
        with patch('pandas.DataFrame.to_csv', side_effect=IOError("denied")):
            with pytest.raises(ReportError):
                self.manager.save_frame(pd.DataFrame(), tmp_path / 'table.csv')
