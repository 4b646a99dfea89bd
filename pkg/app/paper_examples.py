"""
Fixture suite: every documented example instance, checked against its
expected value.

Each check produces a CheckResult. The suite also reports two known
inconsistencies in the published values (the stretch normalization of
bandwidth layouts and the zero-fragmentation length formula on graphs that
already have an Eulerian path) as passing detection checks, with a
discrepancy line in the log.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

from app.audit import CheckResult
from app.coded_design import (
    HKCode,
    as_xor_chain,
    build_paper_store,
    coded_to_uncoded_2approx,
    domination_audit,
    example1_coding_gain,
    example1_stores,
    example1_uncoded_lower_bound,
    example2_chain,
    reduce_hk_canonical,
)
from app.graph_families import gen_example
from app.jump_tree import caterpillar_layout, min_max_decomposition, two_hair_layout
from app.layout_config import LayoutConfig
from app.logger import Logger
from app.metrics import (
    format_fraction,
    jump_metric,
    max_edge_displacement,
    stretch_from_displacement,
    stretch_metric,
)
from app.oracle import ExactSearch
from app.stores import CodedStore
from app.stretch_folding import plan_sham_layout, folding_bound
from app.zero_frag import zero_frag_t2

DEFAULT_SIZES = (1, 2, 3)

# [H; K] of the reduction walk-through; row i of K recovers chunk i.
REDUCTION_FIGURE_H = [0, 1, 0, 0, 1, 1]
REDUCTION_FIGURE_K = [
    [1, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 1, 1],
    [1, 0, 0, 0, 0, 1],
    [1, 0, 1, 0, 0, 0],
    [0, 0, 1, 1, 0, 0],
]
REDUCTION_FIGURE_STORE = [[1], [2], [4], [5], [2, 3], [3]]


def reduction_figure_code() -> HKCode:
    return HKCode([REDUCTION_FIGURE_H], REDUCTION_FIGURE_K)


@dataclass
class SuiteResult:
    """Checks of one suite run plus the machine-readable payload."""

    checks: list[CheckResult] = field(default_factory=list)
    payload: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        data = dict(self.payload)
        data['checks'] = [c.to_dict() for c in self.checks]
        data['summary'] = {
            'total': len(self.checks),
            'passed': sum(1 for c in self.checks if c.passed),
            'failed': sum(1 for c in self.checks if not c.passed),
        }
        return data


def _example1_checks(N: int, record: Callable, rows: list):
    g = gen_example('example1', N=N)
    stores = example1_stores(N)
    subject = f"example1(N={N})"
    coded = stretch_metric(stores['example1_coded'], g, 2)
    two_dup = stretch_metric(stores['example1_uncoded_2dup'], g, 2)
    uncoded = stretch_metric(stores['example1_uncoded'], g, 2)
    record(CheckResult.compare("example1 coded stretch", subject, Fraction(2 * N + 2, 2), coded))
    record(CheckResult.compare("example1 two-duplicate stretch", subject, Fraction(2 * N + 2, 2), two_dup))
    record(CheckResult.compare("example1 uncoded stretch", subject, Fraction(3 * N + 2, 2), uncoded))
    record(CheckResult.compare(
        "example1 one-duplicate lower bound", subject,
        Fraction(3 * N + 1, 2), example1_uncoded_lower_bound(N)
    ))
    record(CheckResult.compare("example1 coding gain", subject, example1_coding_gain(N), uncoded / coded))

    reduced = coded_to_uncoded_2approx(as_xor_chain(stores['example1_coded']), g, 2)
    record(CheckResult.bound(
        "example1 factor-2 reduction", subject, 2 * coded, stretch_metric(reduced, g, 2), strict=True
    ))
    rows.append({
        'N': N,
        'uncoded': format_fraction(uncoded),
        'coded': format_fraction(coded),
        'two_duplicate': format_fraction(two_dup),
    })


def _example2_checks(N: int, record: Callable):
    g = gen_example('example2', N=N)
    chain = example2_chain(N)
    subject = f"example2(N={N})"
    record(CheckResult.compare(
        "example2 coded stretch", subject, Fraction(2 * N + 1, 2), stretch_metric(chain.to_store(), g, 2)
    ))
    record(CheckResult.compare("example2 chain identities", subject, True, chain.chain_identities_hold()))


def _folding_checks(record: Callable, search: Optional[ExactSearch]):
    cycle = gen_example('cycle_odd', n=5)
    layout = plan_sham_layout(cycle)
    record(CheckResult.compare("cycle zig-zag displacement", "cycle_odd(5)", 2, layout.displacement))
    if search is not None:
        record(CheckResult.compare("cycle bandwidth", "cycle_odd(5)", 2, search.bandwidth(cycle)))

    rainbow = gen_example('rainbow', k=3)
    layout = plan_sham_layout(rainbow)
    record(CheckResult.compare("nested arcs thickness", "rainbow(3)", 2, layout.folding.thickness()))
    record(CheckResult.compare("nested arcs displacement", "rainbow(3)", 2, layout.displacement))

    multiply = gen_example('multiply', n=8, k=2)
    layout = plan_sham_layout(multiply)
    record(CheckResult.bound(
        "long arcs displacement", "multiply(8,2)", folding_bound(multiply.k), layout.displacement
    ))
    if search is not None:
        record(CheckResult.bound(
            "long arcs bandwidth", "multiply(8,2)", layout.displacement, search.bandwidth(multiply)
        ))

    figure = gen_example('k3_figure')
    layout = plan_sham_layout(figure)
    plan = layout.plan.to_dict() if layout.plan else {}
    record(CheckResult.compare("3-arc fold anchors", "k3_figure", [2, 8, 10, 14, 16], plan.get('r')))
    record(CheckResult.compare("3-arc fold breakpoints", "k3_figure", [5, 9, 12, 15], plan.get('d')))
    record(CheckResult.bound("3-arc layout displacement", "k3_figure", 5, layout.displacement))
    record(CheckResult.bound(
        "folding segment bound", "k3_figure", layout.segment_bound, layout.displacement
    ))


def _reduction_checks(record: Callable):
    code = reduction_figure_code()
    canonical = reduce_hk_canonical(code)
    expected = CodedStore.from_columns(5, REDUCTION_FIGURE_STORE)
    record(CheckResult.compare(
        "reduction figure store", "reduction_figure", str(expected), str(canonical.to_store())
    ))
    audit = domination_audit(code, canonical)
    record(CheckResult.compare(
        "reduction figure domination", "reduction_figure", True, all(a.holds for a in audit)
    ))


def _zero_frag_checks(record: Callable, search: Optional[ExactSearch]):
    for family, params, expected in (
        ('path_tree', {'n': 3}, 3),
        ('complete', {'n': 3}, 4),
        ('star', {'c': 3}, 5),
    ):
        g = gen_example(family, **params)
        subject = f"{family}({', '.join(str(v) for v in params.values())})"
        result = zero_frag_t2(g)
        record(CheckResult.compare("zero-frag length", subject, expected, result.length))
        record(CheckResult.compare("zero-frag stretch", subject, 1, stretch_metric(result.store, g, 2)))
        if search is not None:
            record(CheckResult.compare(
                "zero-frag optimal length", subject, search.zero_frag_length(g, 2), result.length
            ))


def _jump_checks(record: Callable, search: Optional[ExactSearch], include_slow: bool):
    tree = gen_example('example1j')
    coded = build_paper_store('example1j_coded')
    record(CheckResult.compare("example1j coded jump", "example1j", 2, jump_metric(coded, tree, tree.n)))
    if search is not None and include_slow:
        uncoded = search.jump(tree, tree.n, tree.n + 1)
        record(CheckResult(
            "example1j uncoded jump", "example1j", ">= 3", uncoded, uncoded >= 3
        ))

    caterpillar = gen_example('caterpillar_figure')
    record(CheckResult.bound(
        "caterpillar layout jump", "caterpillar_figure", 3,
        jump_metric(caterpillar_layout(caterpillar), caterpillar, caterpillar.n)
    ))
    two_hair = gen_example('caterpillar_two_hair', h=2, q=2)
    store = two_hair_layout(two_hair, 3, range(1, 6))
    record(CheckResult.compare(
        "two-hair layout jump", "caterpillar_two_hair(2,2)", 2, jump_metric(store, two_hair, two_hair.n)
    ))

    binary = gen_example('complete_binary', depth=4)
    decomposition, uf = min_max_decomposition(binary)
    record(CheckResult.compare("16-leaf decomposition paths", "complete_binary(4)", 16, len(decomposition)))
    record(CheckResult.compare("16-leaf decomposition uf", "complete_binary(4)", 5, uf))


def _discrepancy_checks(record: Callable):
    logger = Logger()

    cycle = gen_example('cycle_odd', n=5)
    layout = plan_sham_layout(cycle)
    displacement = max_edge_displacement(layout.store, cycle)
    observed = stretch_metric(layout.store, cycle, 2)
    stated = Fraction(displacement, 2)
    if observed != stated:
        logger.log_discrepancy("stretch normalization", format_fraction(stated), format_fraction(observed))
    record(CheckResult(
        "stretch normalization offset detected", "cycle_odd(5)",
        f"(B+1)/2 = {format_fraction(stretch_from_displacement(displacement))}",
        format_fraction(observed),
        observed == stretch_from_displacement(displacement) and observed != stated,
    ))

    line = gen_example('line', n=3)
    result = zero_frag_t2(line)
    record(CheckResult.bound(
        "zero-frag formula overcount detected", "line(3)",
        result.formula_upper_bound, result.length, strict=True
    ))


def run_paper_examples(
    config: Optional[LayoutConfig] = None,
    sizes: Sequence[int] = DEFAULT_SIZES,
    include_oracle: bool = True,
    include_slow: bool = False,
    on_check: Optional[Callable[[CheckResult], None]] = None,
) -> SuiteResult:
    """
    Run the fixture suite.

    Args:
        config: Layout configuration (defaults to the environment)
        sizes: Values of N for Examples 1 and 2
        include_oracle: Cross-check small instances with exact search
        include_slow: Also run the exact uncoded jump of Example 1j
        on_check: Called with every check as it is recorded

    Returns:
        SuiteResult with the checks and the report payload
    """
    config = config or LayoutConfig()
    search = ExactSearch(config, jobs=1) if include_oracle else None
    result = SuiteResult()

    def record(check: CheckResult):
        result.checks.append(check)
        if on_check is not None:
            on_check(check)

    example1_rows: list[dict] = []
    for N in sizes:
        _example1_checks(N, record, example1_rows)
    for N in sizes:
        _example2_checks(N, record)
    _folding_checks(record, search)
    _reduction_checks(record)
    _zero_frag_checks(record, search)
    _jump_checks(record, search, include_slow)
    _discrepancy_checks(record)

    result.payload = {
        'example1_stretch': example1_rows,
        'sizes': list(sizes),
        'oracle': include_oracle,
        'slow': include_slow,
    }
    return result
