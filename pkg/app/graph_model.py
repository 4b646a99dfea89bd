"""Graph-structured file models: plain graphs, sparse Hamiltonian graphs and rooted trees.

Vertices are labeled 1..n. A file is a simple (self-avoiding) path of the
graph; single vertices count as length-1 files.
"""

from dataclasses import dataclass
from typing import Iterable, Optional, Union

import networkx as nx

from app.exceptions import GraphError

GRAPH_FORMAT = "dedup-layout/graph-v1"


def _edge_key(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


def _check_vertex_count(n) -> int:
    if isinstance(n, bool) or not isinstance(n, int) or n < 0:
        raise GraphError(f"vertex count must be a non-negative integer, got {n!r}")
    return n


@dataclass(frozen=True)
class Path:
    """An ordered sequence of distinct vertices.

    Files are stored in canonical orientation (first label < last label);
    unidirectional tree paths keep their child-to-parent orientation.
    """

    vertices: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, 'vertices', tuple(int(v) for v in self.vertices))
        if not self.vertices:
            raise GraphError("a path needs at least one vertex")
        if len(set(self.vertices)) != len(self.vertices):
            raise GraphError(f"path {self.vertices} repeats a vertex")

    @property
    def length(self) -> int:
        """Number of vertices, written l(p)."""
        return len(self.vertices)

    @property
    def chunks(self) -> frozenset[int]:
        return frozenset(self.vertices)

    @property
    def first(self) -> int:
        return self.vertices[0]

    @property
    def last(self) -> int:
        return self.vertices[-1]

    def is_canonical(self) -> bool:
        return self.length == 1 or self.first < self.last

    def canonical(self) -> 'Path':
        """Return the orientation with the smaller endpoint first."""
        if self.is_canonical():
            return self
        return Path(tuple(reversed(self.vertices)))

    def reversed(self) -> 'Path':
        return Path(tuple(reversed(self.vertices)))

    def __str__(self) -> str:
        return "(" + ",".join(str(v) for v in self.vertices) + ")"


class FileGraph:
    """Undirected simple graph whose simple paths are the files."""

    def __init__(self, n: int, edges: Iterable[Iterable[int]] = ()):
        """
        Initialize a file graph.

        Args:
            n: Vertex count (vertices are 1..n)
            edges: Unordered vertex pairs

        Raises:
            GraphError: On self-loops, duplicate edges or out-of-range endpoints
        """
        self.n = _check_vertex_count(n)
        keys = []
        for edge in edges:
            pair = tuple(edge)
            if len(pair) != 2:
                raise GraphError(f"edge {pair} must have exactly two endpoints")
            u, v = int(pair[0]), int(pair[1])
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            for w in (u, v):
                if not 1 <= w <= self.n:
                    raise GraphError(f"edge endpoint {w} outside [1,{self.n}]")
            keys.append(_edge_key(u, v))
        if len(set(keys)) != len(keys):
            raise GraphError("duplicate edge in edge list")
        self.edges = frozenset(keys)
        adjacency: dict[int, list[int]] = {v: [] for v in range(1, self.n + 1)}
        for u, v in keys:
            adjacency[u].append(v)
            adjacency[v].append(u)
        self._adj = {v: tuple(sorted(ns)) for v, ns in adjacency.items()}

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return _edge_key(u, v) in self.edges

    def edge_list(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def odd_vertices(self) -> list[int]:
        return [v for v in self.vertices if self.degree(v) % 2 == 1]

    def components(self) -> list[list[int]]:
        """Connected components, each sorted, ordered by smallest vertex."""
        return sorted((sorted(c) for c in nx.connected_components(self.to_networkx())), key=lambda c: c[0])

    def is_connected(self) -> bool:
        return self.n > 0 and len(self.components()) == 1

    def is_path(self, vertices: Iterable[int]) -> bool:
        """Check that the sequence is a simple path of this graph."""
        seq = list(vertices)
        if not seq or len(set(seq)) != len(seq):
            return False
        if any(not 1 <= v <= self.n for v in seq):
            return False
        return all(self.has_edge(a, b) for a, b in zip(seq, seq[1:]))

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(self.vertices)
        graph.add_edges_from(self.edge_list())
        return graph

    def as_file_graph(self) -> 'FileGraph':
        return self

    def to_dict(self) -> dict:
        return {
            'format': GRAPH_FORMAT,
            'kind': 'graph',
            'n': self.n,
            'edges': [list(e) for e in self.edge_list()],
        }

    @classmethod
    def from_dict(cls, data: dict) -> 'FileGraph':
        try:
            return cls(int(data['n']), data.get('edges', []))
        except (KeyError, TypeError, ValueError) as e:
            raise GraphError(f"Malformed graph payload: {e}")

    def __eq__(self, other) -> bool:
        return isinstance(other, FileGraph) and (self.n, self.edges) == (other.n, other.edges)

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    def __repr__(self) -> str:
        return f"FileGraph(n={self.n}, edges={self.edge_list()})"


class SparseHamiltonianGraph:
    """A Hamiltonian line 1-2-...-n plus arcs, no two arcs sharing a foot."""

    def __init__(self, n: int, arcs: Iterable[Iterable[int]] = ()):
        """
        Initialize a sparse Hamiltonian graph.

        Args:
            n: Vertex count
            arcs: Unordered pairs (j1, j2) with |j1 - j2| > 1

        Raises:
            GraphError: On short arcs, shared feet or out-of-range feet
        """
        self.n = _check_vertex_count(n)
        normalized = []
        seen_feet: set[int] = set()
        for arc in arcs:
            pair = tuple(arc)
            if len(pair) != 2:
                raise GraphError(f"arc {pair} must have exactly two feet")
            u, v = _edge_key(int(pair[0]), int(pair[1]))
            if not (1 <= u and v <= self.n):
                raise GraphError(f"arc ({u},{v}) outside [1,{self.n}]")
            if v - u <= 1:
                raise GraphError(f"arc ({u},{v}) must span more than one line step")
            if u in seen_feet or v in seen_feet:
                raise GraphError(f"arc ({u},{v}) shares a foot with another arc")
            seen_feet.update((u, v))
            normalized.append((u, v))
        self.arcs = tuple(sorted(normalized))
        self._partner = {}
        for u, v in self.arcs:
            self._partner[u] = v
            self._partner[v] = u

    @property
    def k(self) -> int:
        """Number of arcs."""
        return len(self.arcs)

    def feet(self) -> list[int]:
        """Sorted arc feet c_1 < ... < c_2k."""
        return sorted(self._partner)

    def partner(self, foot: int) -> Optional[int]:
        return self._partner.get(foot)

    def is_arc(self, u: int, v: int) -> bool:
        return self._partner.get(u) == v

    def line_edges(self) -> list[tuple[int, int]]:
        return [(i, i + 1) for i in range(1, self.n)]

    def as_file_graph(self) -> FileGraph:
        return FileGraph(self.n, self.line_edges() + list(self.arcs))

    def to_dict(self) -> dict:
        return {
            'format': GRAPH_FORMAT,
            'kind': 'sham',
            'n': self.n,
            'arcs': [list(a) for a in self.arcs],
        }

    @classmethod
    def from_dict(cls, data: dict) -> 'SparseHamiltonianGraph':
        try:
            return cls(int(data['n']), data.get('arcs', []))
        except (KeyError, TypeError, ValueError) as e:
            raise GraphError(f"Malformed sparse Hamiltonian payload: {e}")

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SparseHamiltonianGraph)
            and (self.n, self.arcs) == (other.n, other.arcs)
        )

    def __hash__(self) -> int:
        return hash((self.n, self.arcs))

    def __repr__(self) -> str:
        return f"SparseHamiltonianGraph(n={self.n}, arcs={list(self.arcs)})"


class RootedTree:
    """A tree on 1..n given by a child-to-parent map and a root."""

    def __init__(self, n: int, parent: dict[int, int], root: int):
        """
        Initialize a rooted tree.

        Args:
            n: Vertex count
            parent: Map child -> parent for every non-root vertex
            root: Root vertex

        Raises:
            GraphError: If the map is not a single tree rooted at root
        """
        self.n = _check_vertex_count(n)
        if self.n == 0:
            raise GraphError("a rooted tree needs at least one vertex")
        self.root = int(root)
        if not 1 <= self.root <= self.n:
            raise GraphError(f"root {self.root} outside [1,{self.n}]")
        self.parent = {int(c): int(p) for c, p in parent.items()}
        if self.root in self.parent:
            raise GraphError("the root cannot have a parent")
        expected = set(range(1, self.n + 1)) - {self.root}
        if set(self.parent) != expected:
            raise GraphError("every non-root vertex needs exactly one parent")
        for p in self.parent.values():
            if not 1 <= p <= self.n:
                raise GraphError(f"parent {p} outside [1,{self.n}]")

        kids: dict[int, list[int]] = {v: [] for v in range(1, self.n + 1)}
        for c, p in self.parent.items():
            kids[p].append(c)
        self._children = {v: tuple(sorted(cs)) for v, cs in kids.items()}

        down = nx.DiGraph()
        down.add_nodes_from(range(1, self.n + 1))
        down.add_edges_from((p, c) for c, p in self.parent.items())
        self._depth = dict(nx.single_source_shortest_path_length(down, self.root))
        if len(self._depth) != self.n:
            raise GraphError("parent map is cyclic or disconnected from the root")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Iterable[int]], root: int = 1) -> 'RootedTree':
        """Orient an undirected tree away from root."""
        graph = FileGraph(n, edges)
        if len(graph.edges) != n - 1 or not graph.is_connected():
            raise GraphError("edge list does not describe a tree")
        if not 1 <= root <= n:
            raise GraphError(f"root {root} outside [1,{n}]")
        parent = dict(nx.bfs_predecessors(graph.to_networkx(), root))
        return cls(n, parent, root)

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    def children(self, v: int) -> tuple[int, ...]:
        return self._children[v]

    def depth(self, v: int) -> int:
        return self._depth[v]

    def is_leaf(self, v: int) -> bool:
        return not self._children[v]

    def edges(self) -> list[tuple[int, int]]:
        return sorted(_edge_key(c, p) for c, p in self.parent.items())

    def ancestors(self, v: int) -> list[int]:
        """v followed by its ancestors up to the root."""
        chain = [v]
        while chain[-1] != self.root:
            chain.append(self.parent[chain[-1]])
        return chain

    def lca(self, u: int, v: int) -> int:
        """Lowest common ancestor."""
        while self._depth[u] > self._depth[v]:
            u = self.parent[u]
        while self._depth[v] > self._depth[u]:
            v = self.parent[v]
        while u != v:
            u, v = self.parent[u], self.parent[v]
        return u

    def path_between(self, u: int, v: int) -> tuple[int, ...]:
        """The unique tree path from u to v."""
        z = self.lca(u, v)
        up = []
        while u != z:
            up.append(u)
            u = self.parent[u]
        down = []
        while v != z:
            down.append(v)
            v = self.parent[v]
        return tuple(up + [z] + list(reversed(down)))

    def post_order(self) -> list[int]:
        """Vertices with every child before its parent."""
        order = []
        stack = [(self.root, False)]
        while stack:
            v, expanded = stack.pop()
            if expanded:
                order.append(v)
                continue
            stack.append((v, True))
            for c in reversed(self._children[v]):
                stack.append((c, False))
        return order

    def reroot(self, root: int) -> 'RootedTree':
        return RootedTree.from_edges(self.n, self.edges(), root)

    def as_file_graph(self) -> FileGraph:
        return FileGraph(self.n, self.edges())

    def to_dict(self) -> dict:
        return {
            'format': GRAPH_FORMAT,
            'kind': 'tree',
            'n': self.n,
            'root': self.root,
            'parent': {str(c): p for c, p in sorted(self.parent.items())},
        }

    @classmethod
    def from_dict(cls, data: dict) -> 'RootedTree':
        try:
            parent = {int(c): int(p) for c, p in data.get('parent', {}).items()}
            return cls(int(data['n']), parent, int(data['root']))
        except (KeyError, TypeError, ValueError) as e:
            raise GraphError(f"Malformed rooted tree payload: {e}")

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, RootedTree)
            and (self.n, self.root, self.parent) == (other.n, other.root, other.parent)
        )

    def __hash__(self) -> int:
        return hash((self.n, self.root, tuple(sorted(self.parent.items()))))

    def __repr__(self) -> str:
        return f"RootedTree(n={self.n}, root={self.root}, parent={self.parent})"


AnyGraph = Union[FileGraph, SparseHamiltonianGraph, RootedTree]


def graph_from_dict(data: dict) -> AnyGraph:
    """Rebuild any graph type from its JSON form, dispatching on "kind"."""
    kinds = {
        'graph': FileGraph,
        'sham': SparseHamiltonianGraph,
        'tree': RootedTree,
    }
    kind = data.get('kind', 'graph')
    if kind not in kinds:
        raise GraphError(f"Unknown graph kind: {kind}")
    return kinds[kind].from_dict(data)


def enumerate_paths(g: AnyGraph, t: int) -> list[Path]:
    """
    Enumerate the file model P(G, <= t).

    Args:
        g: Any graph type
        t: Maximum number of vertices per path

    Returns:
        Every canonical simple path with 1..t vertices, once, in
        lexicographic order of vertex sequences

    Raises:
        GraphError: If t < 1
    """
    if t < 1:
        raise GraphError(f"maximum path length must be at least 1, got {t}")
    graph = g.as_file_graph()
    found: list[tuple[int, ...]] = []

    def extend(path: list[int], on_path: set[int]):
        if len(path) == 1 or path[0] < path[-1]:
            found.append(tuple(path))
        if len(path) == t:
            return
        for w in graph.neighbors(path[-1]):
            if w not in on_path:
                path.append(w)
                on_path.add(w)
                extend(path, on_path)
                on_path.discard(w)
                path.pop()

    for start in graph.vertices:
        extend([start], {start})
    return [Path(p) for p in sorted(found)]


def double_graph(g: SparseHamiltonianGraph) -> SparseHamiltonianGraph:
    """Split every line edge in two: vertex i becomes 2i-1, arcs follow their feet."""
    n_doubled = max(2 * g.n - 1, 0)
    arcs = [(2 * u - 1, 2 * v - 1) for u, v in g.arcs]
    return SparseHamiltonianGraph(n_doubled, arcs)


def split_unidirectional(tree: RootedTree, p: Path) -> tuple[Path, Path]:
    """
    Split a tree path at the lowest common ancestor of its endpoints.

    Args:
        tree: Rooted tree
        p: A path of the tree

    Returns:
        (p_xz, p_yz), each oriented child to parent and sharing only z

    Raises:
        GraphError: If p is not a path of the tree
    """
    if any(not 1 <= v <= tree.n for v in p.vertices):
        raise GraphError(f"{p} leaves the vertex range of the tree")
    if tree.path_between(p.first, p.last) != p.vertices:
        raise GraphError(f"{p} is not a path of the tree")
    z = tree.lca(p.first, p.last)
    cut = p.vertices.index(z)
    left = Path(p.vertices[:cut + 1])
    right = Path(tuple(reversed(p.vertices[cut:])))
    return left, right
