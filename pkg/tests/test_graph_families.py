"""Tests for named and random graph families."""

import numpy as np
import pytest
from app.graph_families import (
    GraphFamilyFactory,
    gen_example,
    random_connected_graph,
    random_graph,
    random_sham,
    random_tree,
)
from app.graph_model import FileGraph, RootedTree, SparseHamiltonianGraph
from app.exceptions import GraphError


class TestGraphFamilyFactory:
    """Tests for GraphFamilyFactory."""

    def test_create_family(self):
        """Test creating a family by name."""
        family = GraphFamilyFactory.create_family('cycle_odd')
        assert family.get_name() == 'cycle_odd'

    def test_create_family_case_insensitive(self):
        """Test that family names are case-insensitive."""
        assert GraphFamilyFactory.create_family('RAINBOW').get_name() == 'rainbow'

    def test_unknown_family(self):
        """Test unknown family names."""
        with pytest.raises(GraphError, match="Unknown family"):
            GraphFamilyFactory.create_family('petersen')

    def test_available_families(self):
        """Test listing of families."""
        available = GraphFamilyFactory.get_available_families()
        for name in ('example1', 'example2', 'example1j', 'k3_figure', 'caterpillar_figure'):
            assert name in available

    def test_every_family_builds_with_defaults(self):
        """Test that every family builds with its default parameters."""
        for name in GraphFamilyFactory.get_available_families():
            graph = gen_example(name)
            assert graph.n >= 1

    def test_bad_parameter_name(self):
        """Test that an unknown parameter surfaces as GraphError."""
        with pytest.raises(GraphError, match="Invalid parameters"):
            gen_example('line', N=3)


class TestNamedFamilies:
    """Tests for the labelings of the named families."""

    def test_example1_n1(self):
        """Test Example 1 at N = 1."""
        g = gen_example('example1', N=1)
        assert isinstance(g, FileGraph)
        assert g.n == 10
        assert g.neighbors(9) == (1, 2, 3, 4, 5, 6, 10)
        assert g.neighbors(10) == (3, 4, 5, 6, 7, 8, 9)

    def test_example2_hubs(self):
        """Test Example 2 hub neighbourhoods."""
        g = gen_example('example2', N=2)
        assert g.n == 12
        assert g.has_edge(11, 12)
        assert [v for v in g.neighbors(11) if v <= 10] == list(range(1, 9))
        assert [v for v in g.neighbors(12) if v <= 10] == list(range(3, 11))

    def test_example1j(self):
        """Test the 8-node tree."""
        tree = gen_example('example1j')
        assert isinstance(tree, RootedTree)
        assert tree.root == 7
        assert tree.children(8) == (4, 5, 6)

    def test_cycle_odd(self):
        """Test the odd cycle arc."""
        g = gen_example('cycle_odd', n=7)
        assert g.arcs == ((1, 7),)

    def test_cycle_even_rejected(self):
        """Test that even cycles are rejected."""
        with pytest.raises(GraphError):
            gen_example('cycle_odd', n=6)

    def test_rainbow(self):
        """Test nested arcs."""
        g = gen_example('rainbow', k=3)
        assert g.n == 7
        assert g.arcs == ((1, 7), (2, 6), (3, 5))

    def test_multiply(self):
        """Test long arcs."""
        g = gen_example('multiply', n=8, k=2)
        assert g.arcs == ((1, 4), (2, 8))

    def test_multiply_requires_divisor(self):
        """Test that k must divide n."""
        with pytest.raises(GraphError):
            gen_example('multiply', n=9, k=2)

    def test_k3_figure(self):
        """Test the three-arc figure graph."""
        g = gen_example('k3_figure')
        assert isinstance(g, SparseHamiltonianGraph)
        assert g.feet() == [2, 4, 8, 10, 12, 16]

    def test_caterpillars(self):
        """Test caterpillar sizes."""
        assert gen_example('caterpillar_figure').n == 24
        two_hair = gen_example('caterpillar_two_hair', h=2, q=2)
        assert two_hair.n == 9
        assert two_hair.as_file_graph().degree(3) == 4

    def test_complete_binary(self):
        """Test the 16-leaf tree."""
        tree = gen_example('complete_binary', depth=4)
        assert tree.n == 31
        assert sum(1 for v in tree.vertices if tree.is_leaf(v)) == 16

    def test_star(self):
        """Test the star."""
        tree = gen_example('star', c=3)
        assert tree.children(1) == (2, 3, 4)


class TestRandomFamilies:
    """Tests for random generators."""

    def setup_method(self):
        """Set up a seeded generator."""
        self.rng = np.random.default_rng(7)

    def test_random_graph_range(self):
        """Test random graph vertex count."""
        g = random_graph(6, 0.5, self.rng)
        assert g.n == 6

    def test_random_tree_is_tree(self):
        """Test random trees have n - 1 edges and are connected."""
        for n in range(1, 10):
            tree = random_tree(n, self.rng)
            assert len(tree.edges()) == n - 1

    def test_random_connected_graph(self):
        """Test random connected graphs are connected."""
        for _ in range(10):
            g = random_connected_graph(6, 3, self.rng)
            assert g.is_connected()

    def test_random_sham(self):
        """Test random sparse Hamiltonian graphs have exactly k arcs."""
        for _ in range(10):
            g = random_sham(12, 3, self.rng)
            assert g.k == 3

    def test_random_sham_too_many_arcs(self):
        """Test impossible arc counts."""
        with pytest.raises(GraphError):
            random_sham(4, 3, self.rng)
