"""Tests for recovery sets and the stretch / jump metrics."""

from fractions import Fraction

import pandas as pd
import pytest
from hypothesis import given, settings, strategies as st
from app.coded_design import example1_stores, example2_chain
from app.graph_families import gen_example
from app.graph_model import FileGraph, Path
from app.layout_config import LayoutConfig
from app.metrics import (
    can_reconstruct,
    evaluate,
    format_fraction,
    jump_metric,
    jump_witness,
    max_edge_displacement,
    min_jump,
    min_stretch,
    minimal_recovery_sets,
    parse_fraction,
    stretch_from_displacement,
    stretch_metric,
    stretch_window,
)
from app.stores import CodedStore, RecoverySet, UncodedStore, extend_store
from app.exceptions import StoreError


LINE3 = FileGraph(3, [(1, 2), (2, 3)])


class TestFractions:
    """Tests for rational formatting."""

    def test_format(self):
        """Test p/q rendering keeps the denominator."""
        assert format_fraction(Fraction(4, 2)) == "2/1"
        assert format_fraction(Fraction(5, 2)) == "5/2"

    def test_parse(self):
        """Test parsing back."""
        assert parse_fraction("5/2") == Fraction(5, 2)


class TestRecoverySets:
    """Tests for recovery set enumeration."""

    def setup_method(self):
        """Set up x1, x1+x2, x2."""
        self.coded = CodedStore.from_columns(2, [[1], [1, 2], [2]])

    def test_can_reconstruct(self):
        """Test span membership of a unit vector."""
        assert can_reconstruct(self.coded, RecoverySet((1, 2)), 2)
        assert not can_reconstruct(self.coded, RecoverySet((1,)), 2)

    def test_can_reconstruct_out_of_range(self):
        """Test positions beyond the store."""
        with pytest.raises(StoreError):
            can_reconstruct(self.coded, RecoverySet((4,)), 1)

    def test_minimal_sets_coded(self):
        """Test both ways to read chunk 2."""
        sets = minimal_recovery_sets(self.coded, [2])
        assert [r.positions for r in sets] == [(1, 2), (3,)]

    def test_minimal_sets_uncoded(self):
        """Test one recovery set per choice of copies."""
        store = UncodedStore([1, 2, 1])
        sets = minimal_recovery_sets(store, [1, 2])
        assert [r.positions for r in sets] == [(1, 2), (2, 3)]

    def test_empty_chunk_set(self):
        """Test that an empty target set is rejected."""
        with pytest.raises(StoreError):
            minimal_recovery_sets(self.coded, [])

    def test_cap(self, monkeypatch):
        """Test the configured cap on combinations."""
        monkeypatch.setenv('DEDUP_LAYOUT_MAX_RECOVERY_COMBOS', '1')
        with pytest.raises(StoreError, match="exceed the cap"):
            minimal_recovery_sets(UncodedStore([1, 1, 2, 2]), [1, 2], LayoutConfig())


class TestPathMetrics:
    """Tests for MinS and MinJ."""

    def test_min_stretch_window(self):
        """Test the window convention max - min + 1."""
        store = UncodedStore([1, 3, 2])
        assert min_stretch(store, Path((1, 2))) == Fraction(3, 2)
        assert stretch_window(store, [1, 2])[0] == 3

    def test_min_stretch_uses_nearest_copy(self):
        """Test that a duplicate shortens the window."""
        store = UncodedStore([1, 3, 2, 1])
        assert min_stretch(store, Path((1, 2))) == Fraction(1)

    def test_min_jump(self):
        """Test run counting."""
        store = UncodedStore([1, 3, 2])
        assert min_jump(store, Path((1, 2))) == 2
        assert min_jump(store, Path((1, 3))) == 1

    def test_jump_with_duplicates(self):
        """Test jump picks the copies giving fewest runs."""
        store = UncodedStore([1, 3, 2, 1])
        runs, witness = jump_witness(store, [1, 2])
        assert runs == 1
        assert witness.positions == (3, 4)

    def test_coded_window(self):
        """Test a coded column counts toward a short window."""
        coded = CodedStore.from_columns(2, [[1], [1, 2], [2]])
        assert min_stretch(coded, Path((1, 2))) == Fraction(1)
        assert min_jump(coded, Path((2,))) == 1


class TestStoreMetrics:
    """Tests for evaluate and the store-level metrics."""

    def test_evaluate_report(self):
        """Test the metric report of a permutation store."""
        report = evaluate(UncodedStore([1, 3, 2]), LINE3, 2)
        assert report.stretch_metric == Fraction(3, 2)
        assert report.jump_metric == 2
        assert report.worst_stretch_path == Path((1, 2))
        assert len(report.per_path) == 5

    def test_report_to_dict(self):
        """Test the JSON form of a report."""
        data = evaluate(UncodedStore([1, 2, 3]), LINE3, 3).to_dict()
        assert data['stretch_metric'] == "1/1"
        assert data['jump_metric'] == 1
        assert data['t'] == 3

    def test_report_to_frame(self):
        """Test the per-file table."""
        frame = evaluate(UncodedStore([1, 2, 3]), LINE3, 2).to_frame()
        assert isinstance(frame, pd.DataFrame)
        assert list(frame.columns) == ['path', 'length', 'min_stretch', 'min_jump', 'witness']
        assert len(frame) == 5

    def test_chunk_count_mismatch(self):
        """Test store and graph must agree on n."""
        with pytest.raises(StoreError, match="mismatch"):
            evaluate(UncodedStore([1, 2]), LINE3, 2)

    def test_example1_stretch(self):
        """Test the documented Example 1 values for N = 1..3."""
        for N in (1, 2, 3):
            g = gen_example('example1', N=N)
            stores = example1_stores(N)
            assert stretch_metric(stores['example1_coded'], g, 2) == Fraction(2 * N + 2, 2)
            assert stretch_metric(stores['example1_uncoded_2dup'], g, 2) == Fraction(2 * N + 2, 2)
            assert stretch_metric(stores['example1_uncoded'], g, 2) == Fraction(3 * N + 2, 2)

    def test_example2_stretch(self):
        """Test the documented Example 2 values for N = 1..3."""
        for N in (1, 2, 3):
            g = gen_example('example2', N=N)
            assert stretch_metric(example2_chain(N).to_store(), g, 2) == Fraction(2 * N + 1, 2)

    def test_max_edge_displacement(self):
        """Test displacement of a permutation store."""
        store = UncodedStore([1, 3, 2])
        assert max_edge_displacement(store, LINE3) == 2
        assert stretch_from_displacement(2) == stretch_metric(store, LINE3, 2)

    def test_displacement_requires_permutation(self):
        """Test repeated chunks are rejected."""
        with pytest.raises(StoreError):
            max_edge_displacement(UncodedStore([1, 2, 3, 1]), LINE3)

    @given(st.permutations(list(range(1, 7))))
    @settings(max_examples=40, deadline=None)
    def test_stretch_matches_displacement(self, order):
        """Test stretch at t = 2 equals (B + 1) / 2 for permutation stores."""
        g = gen_example('cycle_odd', n=5).as_file_graph()
        g = FileGraph(6, g.edge_list() + [(5, 6)])
        store = UncodedStore(order)
        assert stretch_metric(store, g, 2) == stretch_from_displacement(max_edge_displacement(store, g))

    @given(st.permutations(list(range(1, 6))), st.integers(min_value=1, max_value=5))
    @settings(max_examples=40, deadline=None)
    def test_extension_never_hurts(self, order, chunk):
        """Test appending a chunk copy never increases either metric."""
        g = gen_example('cycle_odd', n=5)
        store = UncodedStore(order)
        extended = extend_store(store, chunk)
        assert stretch_metric(extended, g, 3) <= stretch_metric(store, g, 3)
        assert jump_metric(extended, g, 3) <= jump_metric(store, g, 3)
