"""Integration tests across layouts, metrics and reporting."""

import numpy as np
from app.audit import CheckResult
from app.coded_design import (
    as_xor_chain,
    coded_to_uncoded_2approx,
    coded_to_uncoded_matching,
    random_full_rank_store,
    reduce_hk_canonical,
)
from app.graph_families import gen_example, random_connected_graph
from app.jump_tree import (
    decomposition_from_store,
    linearize_decomposition,
    max_unidirectional_jump,
    min_max_decomposition,
)
from app.layout_config import LayoutConfig
from app.metrics import (
    evaluate,
    format_fraction,
    max_edge_displacement,
    stretch_from_displacement,
    stretch_metric,
)
from app.observers import AutoSaveObserver
from app.paper_examples import reduction_figure_code
from app.report import ReportManager
from app.stretch_folding import layout_sham, folding_bound
from app.zero_frag import zero_frag_t2


class TestIntegration:
    """Integration tests for the layout pipelines."""

    def setup_method(self):
        """Set up test fixtures."""
        self.config = LayoutConfig()
        self.report_manager = ReportManager(self.config)

    def teardown_method(self):
        """Clean up test files."""
        if self.config.report_file.exists():
            self.config.report_file.unlink()

    def test_sham_layout_stretch(self):
        """Test the folded store's stretch follows its edge displacement."""
        g = gen_example('k3_figure')
        store = layout_sham(g)
        displacement = max_edge_displacement(store, g)
        assert displacement <= folding_bound(3)
        assert stretch_metric(store, g, 2) == stretch_from_displacement(displacement)

    def test_zero_frag_recorded(self):
        """Test zero-frag stores reach the check table and survive a reload."""
        observer = AutoSaveObserver(self.report_manager)
        rng = np.random.default_rng(41)
        for i in range(5):
            g = random_connected_graph(6, 3, rng)
            report = evaluate(zero_frag_t2(g).store, g, 2)
            check = CheckResult.compare("zero-frag stretch", f"graph {i}", "1/1", format_fraction(report.stretch_metric))
            self.report_manager.add_check(check)
            observer.on_check(check)

        reloaded = ReportManager(self.config)
        assert reloaded.load_from_csv()
        assert reloaded.summary() == {'total': 5, 'passed': 5, 'failed': 0}

    def test_tree_jump_pipeline(self):
        """Test decomposition, linearization and read-back agree on a binary tree."""
        tree = gen_example('complete_binary', depth=3)
        d, uf = min_max_decomposition(tree)
        store = linearize_decomposition(d)
        assert max_unidirectional_jump(tree, store) <= 2 * uf - 1
        recovered = decomposition_from_store(tree, store)
        assert sorted(v for p in recovered.paths for v in p) == list(tree.vertices)

    def test_reduction_to_permutation(self):
        """Test a reduced code decodes to a permutation store."""
        canonical = reduce_hk_canonical(reduction_figure_code())
        store = coded_to_uncoded_2approx(as_xor_chain(canonical))
        assert store.is_permutation()
        assert list(store.sequence) == [1, 2, 4, 5, 3]

    def test_full_rank_matching(self):
        """Test the matching store never stretches a file further than the coded store."""
        rng = np.random.default_rng(43)
        for _ in range(5):
            g = random_connected_graph(5, 2, rng)
            coded = random_full_rank_store(5, rng)
            store = coded_to_uncoded_matching(coded, g)
            assert store.is_permutation()
            assert evaluate(store, g, 2).stretch_metric <= evaluate(coded, g, 2).stretch_metric
