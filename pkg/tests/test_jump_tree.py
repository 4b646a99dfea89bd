"""Tests for jump-metric tree layouts."""

import numpy as np
import pytest
from app.graph_families import gen_example, random_tree
from app.jump_tree import (
    UPathDecomposition,
    caterpillar_body,
    caterpillar_layout,
    decomposition_from_store,
    is_unidirectional,
    linearize_decomposition,
    max_unidirectional_jump,
    min_max_decomposition,
    path_number,
    two_hair_layout,
    unidirectional_paths,
)
from app.metrics import jump_metric
from app.stores import UncodedStore
from app.exceptions import GraphError, StoreError


class TestUnidirectionalPaths:
    """Tests for child-to-ancestor chains."""

    def test_is_unidirectional(self):
        """Test steps must go up the tree."""
        tree = gen_example('path_tree', n=3)
        assert is_unidirectional(tree, (3, 2, 1))
        assert not is_unidirectional(tree, (1, 2))

    def test_count(self):
        """Test a rooted path of 3 vertices has 6 chains."""
        assert len(unidirectional_paths(gen_example('path_tree', n=3))) == 6


class TestDecomposition:
    """Tests for UPathDecomposition and the min-max pass."""

    def test_path_tree(self):
        """Test a rooted path is one decomposition path."""
        d, uf = min_max_decomposition(gen_example('path_tree', n=4))
        assert d.paths == ((4, 3, 2, 1),)
        assert uf == 1
        assert linearize_decomposition(d).sequence == (4, 3, 2, 1)

    def test_star(self):
        """Test a star rooted at its center."""
        tree = gen_example('star', c=3)
        d, uf = min_max_decomposition(tree)
        assert d.paths == ((2, 1), (3,), (4,))
        assert uf == 2
        assert d.max_path_number() == 2
        assert path_number(d, (3, 1)) == 2

    def test_example1j(self):
        """Test the 8-node tree rooted at a."""
        d, uf = min_max_decomposition(gen_example('example1j'))
        assert uf == 2
        assert linearize_decomposition(d).sequence == (1, 2, 3, 4, 8, 7, 5, 6)

    def test_complete_binary(self):
        """Test the 16-leaf tree."""
        d, uf = min_max_decomposition(gen_example('complete_binary', depth=4))
        assert len(d) == 16
        assert uf == 5

    def test_not_unidirectional(self):
        """Test downward paths are rejected."""
        with pytest.raises(GraphError, match="unidirectional"):
            UPathDecomposition(gen_example('path_tree', n=3), [(1, 2), (3,)])

    def test_missing_vertex(self):
        """Test the paths must cover the tree."""
        with pytest.raises(GraphError, match="misses"):
            UPathDecomposition(gen_example('path_tree', n=3), [(2, 1)])

    def test_overlap(self):
        """Test the paths must be disjoint."""
        with pytest.raises(GraphError, match="two decomposition paths"):
            UPathDecomposition(gen_example('path_tree', n=3), [(2, 1), (3, 2)])

    def test_to_dict(self):
        """Test the JSON form."""
        d, _ = min_max_decomposition(gen_example('star', c=2))
        assert d.to_dict() == {'paths': [[2, 1], [3]]}

    def test_random_trees(self):
        """Test jump of the linearized store stays within 2 UF - 1."""
        rng = np.random.default_rng(5)
        for _ in range(40):
            tree = random_tree(int(rng.integers(1, 12)), rng)
            d, uf = min_max_decomposition(tree)
            assert d.max_path_number() == uf
            assert max_unidirectional_jump(tree, linearize_decomposition(d)) <= 2 * uf - 1


class TestStoreToDecomposition:
    """Tests for decomposition_from_store."""

    def test_star_store(self):
        """Test cutting a star store."""
        tree = gen_example('star', c=3)
        store = UncodedStore([2, 1, 3, 4])
        assert max_unidirectional_jump(tree, store) == 2
        d = decomposition_from_store(tree, store)
        assert d.paths == ((2, 1), (3,), (4,))

    def test_random_stores_give_decompositions(self):
        """Test any permutation store cuts into a decomposition within twice its jump."""
        rng = np.random.default_rng(9)
        for _ in range(200):
            tree = random_tree(int(rng.integers(2, 10)), rng)
            store = UncodedStore([int(v) + 1 for v in rng.permutation(tree.n)])
            d = decomposition_from_store(tree, store)
            assert sum(len(p) for p in d.paths) == tree.n
            assert d.max_path_number() >= min_max_decomposition(tree)[1]
            assert d.max_path_number() <= 2 * max_unidirectional_jump(tree, store)

    def test_non_permutation(self):
        """Test repeated chunks are rejected."""
        with pytest.raises(StoreError):
            decomposition_from_store(gen_example('path_tree', n=2), UncodedStore([1, 2, 1]))


class TestCaterpillars:
    """Tests for caterpillar layouts."""

    def setup_method(self):
        """Set up the two-hair caterpillar with body 1..5."""
        self.tree = gen_example('caterpillar_two_hair', h=2, q=2)

    def test_body(self):
        """Test the body is the longest path through the branching node."""
        assert caterpillar_body(self.tree) == [1, 2, 3, 4, 5]

    def test_caterpillar_layout(self):
        """Test hairs come before the body, tip first."""
        assert caterpillar_layout(self.tree).sequence == (7, 6, 9, 8, 1, 2, 3, 4, 5)

    def test_two_hair_layout(self):
        """Test the two hairs are threaded through the center."""
        store = two_hair_layout(self.tree, 3, range(1, 6))
        assert store.sequence == (7, 6, 3, 8, 9, 1, 2, 4, 5)
        assert jump_metric(store, self.tree, self.tree.n) == 2

    def test_two_hair_wrong_center(self):
        """Test a center without two hairs."""
        with pytest.raises(GraphError):
            two_hair_layout(self.tree, 2, range(1, 6))

    def test_figure_layout(self):
        """Test the 12-hair caterpillar layout reads every file in at most three runs."""
        tree = gen_example('caterpillar_figure')
        store = caterpillar_layout(tree)
        assert store.is_permutation()
        assert jump_metric(store, tree, tree.n) <= 3

    def test_not_a_caterpillar(self):
        """Test branching nodes off one path are rejected."""
        with pytest.raises(GraphError):
            caterpillar_body(gen_example('complete_binary', depth=3))
