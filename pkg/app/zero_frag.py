"""Zero-fragmentation stores: every file recoverable from a window of its own length."""

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil
from typing import Optional

import networkx as nx

from app.exceptions import ConsistencyError, GraphError, StoreError
from app.graph_model import AnyGraph, FileGraph, enumerate_paths
from app.logger import Logger
from app.metrics import stretch_metric
from app.stores import CodedStore, Store, UncodedStore


@dataclass
class ZeroFragResult:
    """Eulerian zero-fragmentation store for two-chunk files."""

    store: UncodedStore
    length: int
    formula_upper_bound: int
    added_edges: list[tuple[int, int]] = field(default_factory=list)
    lower_bound: int = 0

    def __iter__(self):
        yield self.store
        yield self.length

    def to_dict(self) -> dict:
        return {
            'store': self.store.to_dict(),
            'length': self.length,
            'formula_upper_bound': self.formula_upper_bound,
            'added_edges': [list(e) for e in self.added_edges],
            'lower_bound': self.lower_bound,
        }


def classify_eulerian(multigraph: nx.MultiGraph) -> str:
    """'circuit', 'trail' or 'none' for a connected multigraph."""
    if nx.is_eulerian(multigraph):
        return 'circuit'
    if nx.has_eulerian_path(multigraph):
        return 'trail'
    return 'none'


def eulerian_trail(multigraph: nx.MultiGraph, start: int) -> list[int]:
    """
    Eulerian trail of a connected multigraph as a vertex sequence.

    Edges must have been added in sorted order so that the walk always
    leaves a vertex through its smallest remaining neighbour.

    Args:
        multigraph: Connected multigraph
        start: Start vertex; must be odd when the graph has odd vertices

    Returns:
        Vertex sequence with one entry more than the edge count
    """
    trail = [start]
    trail += [v for _, v in nx.eulerian_path(multigraph, source=start)]
    return trail


def _component_trail(graph: FileGraph, component: list[int]) -> tuple[list[int], list[tuple[int, int]]]:
    if len(component) == 1:
        return [component[0]], []
    odd = sorted(v for v in component if graph.degree(v) % 2)
    # the first odd pair stays as the trail's endpoints
    added = list(zip(odd[2::2], odd[3::2]))
    members = set(component)
    edges = [e for e in graph.edge_list() if e[0] in members] + added
    multigraph = nx.MultiGraph()
    multigraph.add_nodes_from(component)
    multigraph.add_edges_from(sorted(edges))
    start = odd[0] if odd else component[0]
    if classify_eulerian(multigraph) == 'none':
        raise ConsistencyError(f"augmented component {component} has no Eulerian trail")
    return eulerian_trail(multigraph, start), added


def zero_frag_t2(g: AnyGraph) -> ZeroFragResult:
    """
    Shortest uncoded store in which every edge occupies two adjacent positions.

    Odd-degree vertices beyond the first pair are joined by virtual edges in
    ascending order, then an Eulerian trail is traced per component and the
    trails are concatenated.

    Args:
        g: File graph

    Returns:
        ZeroFragResult; unpacks as (store, length)

    Raises:
        GraphError: If the graph has no vertices
    """
    graph = g.as_file_graph()
    if graph.n == 0:
        raise GraphError("zero-fragmentation store needs a non-empty graph")
    sequence: list[int] = []
    added: list[tuple[int, int]] = []
    for component in graph.components():
        trail, extra = _component_trail(graph, sorted(component))
        sequence += trail
        added += extra

    store = UncodedStore(sequence, graph.n)
    odd_count = len(graph.odd_vertices())
    formula = len(graph.edges) + 1 + ceil(odd_count / 2)
    result = ZeroFragResult(
        store=store,
        length=store.m,
        formula_upper_bound=formula,
        added_edges=added,
        lower_bound=len(graph.edges) + len(graph.components()),
    )
    logger = Logger()
    logger.log_metric("zero_frag_t2_length", f"n={graph.n}", store.m)
    if store.m != formula:
        logger.log_info(f"Zero-frag store length {store.m} differs from closed-form length {formula}")
    return result


@dataclass
class GeneralZeroFrag:
    """Concatenated-path store together with its length envelope."""

    store: UncodedStore
    path_count: int
    lower_bound: Fraction
    upper_bound: int

    @property
    def within_envelope(self) -> bool:
        return self.lower_bound <= self.store.m <= self.upper_bound

    def to_dict(self) -> dict:
        return {
            'store': self.store.to_dict(),
            'length': self.store.m,
            'path_count': self.path_count,
            'lower_bound': str(self.lower_bound),
            'upper_bound': self.upper_bound,
        }


def maximal_paths(g: AnyGraph, t: int) -> list[tuple[int, ...]]:
    """Files of P(G, <= t) that are not a proper contiguous piece of another file."""
    paths = [p.vertices for p in enumerate_paths(g.as_file_graph(), t)]
    pieces = set()
    for q in paths:
        for i in range(len(q)):
            for j in range(i + 1, len(q) + 1):
                if j - i < len(q):
                    piece = q[i:j]
                    pieces.add(min(piece, piece[::-1]))
    return [p for p in paths if min(p, p[::-1]) not in pieces]


def zero_frag_general_report(g: AnyGraph, t: int) -> GeneralZeroFrag:
    """Concatenate the maximal files and report |P|/t <= m <= t|P|."""
    if t < 1:
        raise GraphError(f"maximum file length must be at least 1, got {t}")
    graph = g.as_file_graph()
    path_count = len(enumerate_paths(graph, t))
    sequence = [v for p in maximal_paths(graph, t) for v in p]
    report = GeneralZeroFrag(
        store=UncodedStore(sequence, graph.n),
        path_count=path_count,
        lower_bound=Fraction(path_count, t),
        upper_bound=t * path_count,
    )
    if not report.within_envelope:
        Logger().log_discrepancy("zero-fragmentation envelope", f"[{report.lower_bound}, {report.upper_bound}]", report.store.m)
    return report


def zero_frag_general(g: AnyGraph, t: int) -> UncodedStore:
    return zero_frag_general_report(g, t).store


def _try_columns(n: int, columns: list[int]) -> Optional[CodedStore]:
    try:
        return CodedStore.from_columns(n, [_support(col) for col in columns])
    except StoreError:
        return None


def _support(bits: int) -> list[int]:
    return [i + 1 for i in range(bits.bit_length()) if bits >> i & 1]


def decode_zero_frag_coded_t2(c: Store, g: AnyGraph) -> UncodedStore:
    """
    Replace every coded column of a zero-fragmentation store by a plain chunk.

    Columns combining more than two chunks are dropped first. Each remaining
    two-chunk column s_i becomes s_{i-1} xor s_i (or s_i xor s_{i+1}) when
    that is a unit vector, otherwise one of its two chunks, keeping the
    first replacement that leaves the stretch metric at 1; a column no
    replacement can fix is dropped.

    Raises:
        StoreError: If c does not have stretch metric 1 for files of two chunks
        ConsistencyError: If a coded column can be neither replaced nor dropped
    """
    graph = g.as_file_graph()
    if stretch_metric(c, graph, 2) != 1:
        raise StoreError("store is not zero-fragmentation for files of two chunks")
    if isinstance(c, UncodedStore):
        return c

    def zero_frag(store: Optional[CodedStore]) -> bool:
        return store is not None and stretch_metric(store, graph, 2) == 1

    columns = list(c.columns)
    for j in reversed(range(len(columns))):
        if bin(columns[j]).count('1') > 2:
            trial = columns[:j] + columns[j + 1:]
            if zero_frag(_try_columns(c.n, trial)):
                columns = trial

    j = 0
    while j < len(columns):
        col = columns[j]
        if col == 0:
            del columns[j]
            continue
        if bin(col).count('1') == 1:
            j += 1
            continue
        candidates = []
        for k in (j - 1, j + 1):
            if 0 <= k < len(columns) and bin(columns[k] ^ col).count('1') == 1:
                candidates.append(columns[k] ^ col)
        candidates += [1 << (chunk - 1) for chunk in _support(col)]
        for unit in candidates:
            trial = columns[:j] + [unit] + columns[j + 1:]
            if zero_frag(_try_columns(c.n, trial)):
                columns = trial
                j += 1
                break
        else:
            trial = columns[:j] + columns[j + 1:]
            if not zero_frag(_try_columns(c.n, trial)):
                raise ConsistencyError(f"coded column {j + 1} cannot be decoded")
            columns = trial

    decoded = CodedStore.from_columns(c.n, [_support(col) for col in columns]).as_uncoded()
    Logger().log_metric("decoded_zero_frag_length", f"n={c.n}", decoded.m)
    return decoded
