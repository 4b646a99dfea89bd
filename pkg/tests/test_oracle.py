"""Tests for the exhaustive reference solvers."""

from fractions import Fraction

import numpy as np
import pytest
from app.graph_families import gen_example, random_connected_graph, random_tree
from app.graph_model import FileGraph
from app.jump_tree import linearize_decomposition, min_max_decomposition
from app.layout_config import LayoutConfig
from app.metrics import jump_metric
from app.oracle import (
    ExactSearch,
    bandwidth_lower_bounds,
    check_arrangement,
    chromatic_number,
    exact_bandwidth,
    exact_jump,
    exact_min_max_uf,
    exact_stretch,
    exact_zero_frag_length,
    find_arrangement,
)
from app.stores import UncodedStore
from app.zero_frag import zero_frag_t2
from app.exceptions import SizeGuardError, StoreError


LINE3 = FileGraph(3, [(1, 2), (2, 3)])
TRIANGLE = FileGraph(3, [(1, 2), (1, 3), (2, 3)])


class TestBandwidth:
    """Tests for the bandwidth oracle."""

    def test_small_graphs(self):
        """Test known bandwidths."""
        assert exact_bandwidth(gen_example('line', n=4)) == 1
        assert exact_bandwidth(gen_example('cycle_odd', n=5)) == 2
        assert exact_bandwidth(gen_example('complete', n=4)) == 3
        assert exact_bandwidth(gen_example('star', c=3)) == 2

    def test_edgeless(self):
        """Test a graph without edges has bandwidth 0."""
        assert exact_bandwidth(FileGraph(3)) == 0

    def test_guard(self):
        """Test the instance-size guard."""
        with pytest.raises(SizeGuardError, match="GUARD_OVERRIDE"):
            exact_bandwidth(gen_example('line', n=11))

    def test_guard_override(self, monkeypatch):
        """Test the guard can be lifted."""
        monkeypatch.setenv('DEDUP_LAYOUT_GUARD_OVERRIDE', 'true')
        assert exact_bandwidth(gen_example('line', n=11), LayoutConfig()) == 1

    def test_worker_pool(self):
        """Test the process pool gives the same answer."""
        assert exact_bandwidth(gen_example('cycle_odd', n=5), jobs=2) == 2

    def test_find_arrangement(self):
        """Test a found order respects the width."""
        g = gen_example('cycle_odd', n=5).as_file_graph()
        order = find_arrangement(g, 2)
        assert check_arrangement(g, order, 2)
        assert find_arrangement(g, 1) is None

    def test_node_limit(self):
        """Test the search node cap."""
        with pytest.raises(SizeGuardError):
            find_arrangement(gen_example('line', n=6).as_file_graph(), 1, node_limit=1)

    def test_check_arrangement_needs_permutation(self):
        """Test a partial order is rejected."""
        assert not check_arrangement(LINE3, [1, 2], 1)

    def test_lower_bounds(self):
        """Test degree and chromatic lower bounds."""
        assert chromatic_number(TRIANGLE) == 3
        assert bandwidth_lower_bounds(gen_example('cycle_odd', n=5)) == {'degree': 1, 'chromatic': 2}


class TestMetricOracles:
    """Tests for the stretch and jump oracles."""

    def test_stretch(self):
        """Test the best uncoded stretch."""
        assert exact_stretch(LINE3, 2, 3) == Fraction(1)
        assert exact_stretch(TRIANGLE, 2, 3) == Fraction(3, 2)
        assert exact_stretch(TRIANGLE, 2, 4) == Fraction(1)

    def test_jump(self):
        """Test the best uncoded jump."""
        assert exact_jump(TRIANGLE, 2, 3) == 2
        assert exact_jump(TRIANGLE, 2, 4) == 1

    def test_incumbent_keeps_optimum(self):
        """Test seeding with a known store gives the same optimum."""
        assert exact_jump(TRIANGLE, 2, 3, incumbent=UncodedStore([1, 2, 3])) == 2
        assert exact_jump(TRIANGLE, 2, 4, incumbent=UncodedStore([1, 2, 3, 1])) == 1
        assert exact_stretch(TRIANGLE, 2, 4, incumbent=UncodedStore([1, 2, 3, 2])) == Fraction(1)

    def test_incumbent_improved_with_workers(self):
        """Test a poor seed is beaten on the process pool."""
        assert exact_stretch(LINE3, 2, 3, jobs=2, incumbent=UncodedStore([1, 3, 2])) == Fraction(1)

    def test_incumbent_wrong_length(self):
        """Test a seed of the wrong length is rejected."""
        with pytest.raises(StoreError, match="incumbent"):
            exact_jump(TRIANGLE, 2, 3, incumbent=UncodedStore([1, 2, 3, 1]))

    def test_stretch_with_workers(self):
        """Test the process pool gives the same answer."""
        assert exact_stretch(TRIANGLE, 2, 3, jobs=2) == Fraction(3, 2)

    def test_short_store(self):
        """Test m below n is rejected."""
        with pytest.raises(StoreError):
            exact_stretch(LINE3, 2, 2)

    def test_two_duplicates_guarded(self):
        """Test more than one duplicate needs the override."""
        with pytest.raises(SizeGuardError):
            exact_jump(LINE3, 2, 5)

    def test_metric_guard(self):
        """Test the metric guard."""
        with pytest.raises(SizeGuardError):
            ExactSearch().stretch(gen_example('line', n=9), 2, 9)


class TestZeroFragOracle:
    """Tests for the zero-fragmentation length oracle."""

    def test_lengths(self):
        """Test known minimal lengths."""
        assert exact_zero_frag_length(LINE3, 2) == 3
        assert exact_zero_frag_length(TRIANGLE, 2) == 4
        assert exact_zero_frag_length(gen_example('star', c=3), 2) == 5

    def test_eulerian_matches_on_trees(self):
        """Test the Eulerian store is optimal on small random trees."""
        rng = np.random.default_rng(3)
        for _ in range(10):
            tree = random_tree(int(rng.integers(2, 6)), rng)
            assert zero_frag_t2(tree).length == exact_zero_frag_length(tree, 2)

    def test_eulerian_matches_on_graphs(self):
        """Test the Eulerian store is optimal on small random connected graphs."""
        rng = np.random.default_rng(29)
        for _ in range(100):
            g = random_connected_graph(int(rng.integers(2, 6)), int(rng.integers(0, 4)), rng)
            assert zero_frag_t2(g).length == exact_zero_frag_length(g, 2)


class TestMinMaxOracle:
    """Tests for the decomposition oracle."""

    def test_known_trees(self):
        """Test UF on small trees."""
        assert exact_min_max_uf(gen_example('path_tree', n=4)) == 1
        assert exact_min_max_uf(gen_example('star', c=3)) == 2
        assert exact_min_max_uf(gen_example('example1j')) == 2

    def test_matches_post_order_pass(self):
        """Test the post-order pass is optimal on random trees."""
        rng = np.random.default_rng(13)
        for _ in range(100):
            tree = random_tree(int(rng.integers(1, 9)), rng)
            assert exact_min_max_uf(tree) == min_max_decomposition(tree)[1]

    def test_guard(self):
        """Test the tree size guard."""
        with pytest.raises(SizeGuardError):
            exact_min_max_uf(gen_example('path_tree', n=9))

    def test_decomposition_layout_within_four(self, monkeypatch):
        """Test the linearized decomposition is within 4x the optimal jump."""
        monkeypatch.setenv('DEDUP_LAYOUT_GUARD_OVERRIDE', 'true')
        config = LayoutConfig()
        rng = np.random.default_rng(19)
        for _ in range(200):
            tree = random_tree(int(rng.integers(2, 10)), rng)
            store = linearize_decomposition(min_max_decomposition(tree)[0])
            best = exact_jump(tree, tree.n, tree.n, config, incumbent=store)
            assert best <= jump_metric(store, tree, tree.n) <= 4 * best
