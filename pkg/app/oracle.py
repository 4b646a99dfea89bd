"""Exhaustive reference solvers for small instances.

Every search here is exact and guarded by an instance-size limit from
LayoutConfig; exceeding a guard raises SizeGuardError unless the guard
override is set.
"""

from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from itertools import combinations_with_replacement, product
from math import ceil
from typing import Callable, Iterable, Optional, Sequence

from app.exceptions import SizeGuardError, StoreError
from app.graph_model import AnyGraph, FileGraph, RootedTree, enumerate_paths
from app.jump_tree import UPathDecomposition
from app.layout_config import LayoutConfig
from app.logger import Logger
from app.metrics import jump_metric, stretch_metric
from app.stores import UncodedStore


def find_arrangement(
    graph: FileGraph,
    width: int,
    node_limit: Optional[int] = None,
    first: Optional[int] = None,
    break_symmetry: bool = True,
) -> Optional[list[int]]:
    """
    Find a vertex order whose edges all span at most width positions.

    Depth-first placement, position by position. A vertex is rejected when
    one of its placed neighbours is already too far back, and a partial
    order is abandoned when some placed vertex has more unplaced neighbours
    than free slots before its deadline. Failed states are memoized on the
    placed set together with the last width placed vertices.

    Args:
        graph: Graph to arrange
        width: Maximum allowed edge displacement
        node_limit: Optional cap on expanded search nodes
        first: Optional vertex forced into position 1
        break_symmetry: Keep vertex 1 in the first half of the order; only
            sound when the caller covers every choice of first

    Returns:
        The order as a list of vertices, or None when none exists

    Raises:
        SizeGuardError: If the node limit is reached
    """
    n = graph.n
    if n == 0:
        return []
    if not graph.edges:
        rest = [v for v in graph.vertices if v != first]
        return ([first] if first is not None else []) + rest
    if width < 1:
        return None

    order: list[int] = []
    pos: dict[int, int] = {}
    pending = {v: graph.degree(v) for v in graph.vertices}
    failed: set = set()
    half = (n + 1) // 2
    expanded = 0

    def extend() -> bool:
        nonlocal expanded
        p = len(order)
        if p == n:
            return True
        key = (frozenset(order), tuple(order[-width:]))
        if key in failed:
            return False
        expanded += 1
        if node_limit is not None and expanded > node_limit:
            raise SizeGuardError(f"arrangement search exceeded {node_limit} nodes at width {width}")
        if break_symmetry and p >= half and 1 not in pos:
            failed.add(key)
            return False

        candidates = [first] if p == 0 and first is not None else graph.vertices
        for v in candidates:
            if v in pos:
                continue
            if any(p + 1 - pos[u] > width for u in graph.neighbors(v) if u in pos):
                continue
            pos[v] = p + 1
            order.append(v)
            for u in graph.neighbors(v):
                pending[u] -= 1
            feasible = all(
                pending[u] <= pos[u] + width - (p + 1)
                for u in order
                if pending[u]
            )
            if feasible and extend():
                return True
            for u in graph.neighbors(v):
                pending[u] += 1
            order.pop()
            del pos[v]
        failed.add(key)
        return False

    return list(order) if extend() else None


def _arrangement_task(args) -> Optional[list[int]]:
    graph, width, first = args
    return find_arrangement(graph, width, first=first)


def _window_length(seq: Sequence[int], targets: frozenset) -> int:
    """Shortest window of seq holding every target chunk."""
    counts: dict[int, int] = {}
    covered = 0
    best = len(seq) + 1
    lo = 0
    for hi, chunk in enumerate(seq):
        if chunk in targets:
            counts[chunk] = counts.get(chunk, 0) + 1
            if counts[chunk] == 1:
                covered += 1
        while covered == len(targets):
            best = min(best, hi - lo + 1)
            left = seq[lo]
            if left in targets:
                counts[left] -= 1
                if counts[left] == 0:
                    covered -= 1
            lo += 1
    return best


def _run_count(seq: Sequence[int], targets: Sequence[int]) -> int:
    """Fewest disjoint clean intervals of seq that together hold every target once."""
    index = {chunk: i for i, chunk in enumerate(targets)}
    full = (1 << len(targets)) - 1
    masks = set()
    for start in range(len(seq)):
        mask = 0
        for end in range(start, len(seq)):
            bit = 1 << index[seq[end]] if seq[end] in index else 0
            if not bit or mask & bit:
                break
            mask |= bit
            masks.add(mask)
    frontier = {0}
    seen = {0}
    runs = 0
    while full not in seen:
        runs += 1
        frontier = {
            state | mask
            for state in frontier
            for mask in masks
            if not state & mask and state | mask not in seen
        }
        seen |= frontier
    return runs


def _sequence_task(args) -> Optional[object]:
    """
    Minimize a store-level metric over sequences with fixed copy counts.

    A file's value is fixed once every copy of its chunks is placed, so the
    search prunes as soon as a settled file reaches the incumbent.
    """
    n, paths, copies, kind, first, bound = args
    m = sum(copies[1:])
    remaining = list(copies)
    touching: dict[int, list[int]] = {c: [] for c in range(1, n + 1)}
    for idx, p in enumerate(paths):
        for c in set(p):
            touching[c].append(idx)
    target_sets = [frozenset(p) for p in paths]
    half = (m + 1) // 2
    seq: list[int] = []
    best = bound

    def value(idx: int):
        if kind == 'stretch':
            return Fraction(_window_length(seq, target_sets[idx]), len(paths[idx]))
        return _run_count(seq, paths[idx])

    def place(current) -> None:
        nonlocal best
        p = len(seq)
        if p == m:
            if best is None or current < best:
                best = current
            return
        if p >= half and remaining[1] == copies[1]:
            return
        choices = [first] if p == 0 else range(1, n + 1)
        for c in choices:
            if not remaining[c]:
                continue
            seq.append(c)
            remaining[c] -= 1
            worst = current
            pruned = False
            if not remaining[c]:
                for idx in touching[c]:
                    if all(not remaining[x] for x in target_sets[idx]):
                        score = value(idx)
                        if worst is None or score > worst:
                            worst = score
                        if best is not None and score >= best:
                            pruned = True
                            break
            if not pruned:
                place(worst)
            remaining[c] += 1
            seq.pop()

    place(None)
    if best is not None and bound is not None and best >= bound:
        return None
    return best


class ExactSearch:
    """Guarded exhaustive searches with optional process-pool fan-out."""

    def __init__(self, config: Optional[LayoutConfig] = None, jobs: Optional[int] = None):
        """
        Initialize the search driver.

        Args:
            config: Configuration providing guards and the default worker count
            jobs: Worker processes; overrides config.jobs when given
        """
        self.config = config or LayoutConfig()
        self.jobs = jobs if jobs is not None else self.config.jobs
        self.logger = Logger()

    def _guard(self, size: int, limit: int, what: str) -> None:
        if size > limit and not self.config.guard_override:
            raise SizeGuardError(
                f"{what} oracle limited to n <= {limit}, got n = {size} "
                f"(set DEDUP_LAYOUT_GUARD_OVERRIDE=true to lift)"
            )

    def _map(self, fn: Callable, items: list) -> list:
        """Apply fn to items in order, in worker processes when jobs > 1."""
        if self.jobs > 1 and len(items) > 1:
            with ProcessPoolExecutor(max_workers=self.jobs) as executor:
                return list(executor.map(fn, items))
        return [fn(item) for item in items]

    def bandwidth(self, g: AnyGraph) -> int:
        """Exact bandwidth: smallest width admitting an arrangement."""
        graph = g.as_file_graph()
        self._guard(graph.n, self.config.bandwidth_guard, "bandwidth")
        if not graph.edges:
            return 0
        width = max(ceil(max(graph.degree(v) for v in graph.vertices) / 2), 1)
        while True:
            found = self._map(_arrangement_task, [(graph, width, v) for v in graph.vertices])
            if any(order is not None for order in found):
                self.logger.log_metric("exact_bandwidth", f"n={graph.n}", width)
                return width
            width += 1

    def _metric(self, g: AnyGraph, t: int, m: int, kind: str, incumbent: Optional[UncodedStore] = None):
        graph = g.as_file_graph()
        self._guard(graph.n, self.config.metric_guard, kind)
        if m < graph.n:
            raise StoreError(f"a lossless uncoded store needs m >= {graph.n}, got {m}")
        if m - graph.n > 1 and not self.config.guard_override:
            raise SizeGuardError(f"{kind} oracle allows at most one duplicate, got m - n = {m - graph.n}")
        seed = None
        if incumbent is not None:
            if incumbent.m != m or incumbent.n != graph.n:
                raise StoreError(f"incumbent store must have n = {graph.n} and m = {m}, got n = {incumbent.n}, m = {incumbent.m}")
            seed = stretch_metric(incumbent, graph, t) if kind == 'stretch' else jump_metric(incumbent, graph, t)
        paths = tuple(p.vertices for p in enumerate_paths(graph, t))
        tasks = []
        for extra in combinations_with_replacement(range(1, graph.n + 1), m - graph.n):
            copies = [0] + [1] * graph.n
            for c in extra:
                copies[c] += 1
            tasks += [(graph.n, paths, tuple(copies), kind, c, seed) for c in range(1, graph.n + 1)]

        if self.jobs > 1:
            results = [r for r in self._map(_sequence_task, tasks) if r is not None]
            best = min(results + ([seed] if seed is not None else []))
        else:
            best = seed
            for task in tasks:
                found = _sequence_task(task[:-1] + (best,))
                if found is not None:
                    best = found
        self.logger.log_metric(f"exact_{kind}", f"n={graph.n} t={t} m={m}", best)
        return best

    def stretch(self, g: AnyGraph, t: int, m: int, incumbent: Optional[UncodedStore] = None) -> Fraction:
        """Best stretch metric over uncoded stores of length m, optionally seeded with a known store."""
        return self._metric(g, t, m, 'stretch', incumbent)

    def jump(self, g: AnyGraph, t: int, m: int, incumbent: Optional[UncodedStore] = None) -> int:
        """Best jump metric over uncoded stores of length m, optionally seeded with a known store."""
        return self._metric(g, t, m, 'jump', incumbent)

    def zero_frag_length(self, g: AnyGraph, t: int) -> int:
        """Smallest m admitting an uncoded store with stretch metric 1."""
        graph = g.as_file_graph()
        self._guard(graph.n, self.config.zerofrag_guard, "zero-fragmentation")
        targets = {frozenset(p.vertices) for p in enumerate_paths(graph, t) if p.length > 1}
        m = graph.n
        while not _zero_frag_exists(graph.n, targets, t, m):
            m += 1
        self.logger.log_metric("exact_zero_frag_length", f"n={graph.n} t={t}", m)
        return m

    def min_max_uf(self, tree: RootedTree) -> int:
        """Exact UF(T, r) by enumerating every unidirectional path decomposition."""
        self._guard(tree.n, self.config.uf_guard, "min-max decomposition")
        vertices = tree.vertices
        options = [[None] + list(tree.children(v)) for v in vertices]
        best = None
        for choice in product(*options):
            chosen = dict(zip(vertices, choice))
            continued = {c for c in choice if c is not None}
            paths = []
            for top in vertices:
                if top in continued:
                    continue
                chain = [top]
                while chosen[chain[-1]] is not None:
                    chain.append(chosen[chain[-1]])
                paths.append(list(reversed(chain)))
            value = UPathDecomposition(tree, paths).max_path_number()
            if best is None or value < best:
                best = value
        self.logger.log_metric("exact_min_max_uf", f"n={tree.n}", best)
        return best


def _zero_frag_exists(n: int, targets: set, t: int, m: int) -> bool:
    """Search sequences of length m covering every target set with a tight window."""
    seq: list[int] = []
    covered: dict[frozenset, int] = {}
    seen = [0] * (n + 1)

    def windows_ending_here() -> list[frozenset]:
        found = []
        for size in range(2, min(t, len(seq)) + 1):
            window = seq[-size:]
            key = frozenset(window)
            if len(key) == size and key in targets:
                found.append(key)
        return found

    def extend() -> bool:
        left = m - len(seq)
        uncovered = len(targets) - len(covered)
        missing = sum(1 for c in range(1, n + 1) if not seen[c])
        if left == 0:
            return uncovered == 0 and missing == 0
        if uncovered > (t - 1) * left or missing > left:
            return False
        for c in range(1, n + 1):
            if seq and seq[-1] == c:
                continue
            seq.append(c)
            seen[c] += 1
            new = windows_ending_here()
            for key in new:
                covered[key] = covered.get(key, 0) + 1
            if extend():
                return True
            for key in new:
                covered[key] -= 1
                if not covered[key]:
                    del covered[key]
            seen[c] -= 1
            seq.pop()
        return False

    return extend()


def chromatic_number(g: AnyGraph) -> int:
    """Smallest colour count of a proper vertex colouring, by backtracking."""
    graph = g.as_file_graph()
    if graph.n == 0:
        return 0
    colour: dict[int, int] = {}

    def colourable(k: int, idx: int) -> bool:
        if idx == graph.n:
            return True
        v = graph.vertices[idx]
        used = {colour[u] for u in graph.neighbors(v) if u in colour}
        for c in range(min(k, idx + 1)):
            if c in used:
                continue
            colour[v] = c
            if colourable(k, idx + 1):
                return True
            del colour[v]
        return False

    k = 1
    while not colourable(k, 0):
        k += 1
    return k


def exact_bandwidth(g: AnyGraph, config: Optional[LayoutConfig] = None, jobs: Optional[int] = None) -> int:
    return ExactSearch(config, jobs).bandwidth(g)


def exact_stretch(g: AnyGraph, t: int, m: int, config: Optional[LayoutConfig] = None,
                  jobs: Optional[int] = None, incumbent: Optional[UncodedStore] = None) -> Fraction:
    return ExactSearch(config, jobs).stretch(g, t, m, incumbent)


def exact_jump(g: AnyGraph, t: int, m: int, config: Optional[LayoutConfig] = None,
               jobs: Optional[int] = None, incumbent: Optional[UncodedStore] = None) -> int:
    return ExactSearch(config, jobs).jump(g, t, m, incumbent)


def exact_zero_frag_length(g: AnyGraph, t: int, config: Optional[LayoutConfig] = None) -> int:
    return ExactSearch(config).zero_frag_length(g, t)


def exact_min_max_uf(tree: RootedTree, config: Optional[LayoutConfig] = None) -> int:
    return ExactSearch(config).min_max_uf(tree)


def bandwidth_lower_bounds(g: AnyGraph) -> dict[str, int]:
    """Lower bounds on the bandwidth: half the max degree and chromatic number minus one."""
    graph = g.as_file_graph()
    degree = max((graph.degree(v) for v in graph.vertices), default=0)
    return {
        'degree': ceil(degree / 2),
        'chromatic': max(chromatic_number(graph) - 1, 0),
    }


def check_arrangement(graph: FileGraph, order: Iterable[int], width: int) -> bool:
    """True when order is a permutation of the vertices within width."""
    order = list(order)
    if sorted(order) != list(graph.vertices):
        return False
    pos = {v: i for i, v in enumerate(order)}
    return all(abs(pos[u] - pos[v]) <= width for u, v in graph.edge_list())
