"""Named and random graph families, built through a factory.

Labelings are fixed per family so that fixtures are reproducible.
"""

from abc import ABC, abstractmethod
from typing import Optional

import numpy as np

from app.exceptions import GraphError
from app.graph_model import (
    AnyGraph,
    FileGraph,
    RootedTree,
    SparseHamiltonianGraph,
)


def _require(condition: bool, message: str):
    if not condition:
        raise GraphError(message)


class GraphFamily(ABC):
    """Abstract base class for named graph families."""

    @abstractmethod
    def build(self, **params) -> AnyGraph:
        """
        Build one member of the family.

        Args:
            params: Family parameters

        Returns:
            The graph with its documented labeling
        """
        pass

    @abstractmethod
    def get_name(self) -> str:
        """Get the name of the family."""
        pass


class LineFamily(GraphFamily):
    """Path graph 1-2-...-n with no arcs."""

    def build(self, n: int = 5) -> AnyGraph:
        _require(n >= 1, "line needs n >= 1")
        return SparseHamiltonianGraph(n, [])

    def get_name(self) -> str:
        return "line"


class CycleOddFamily(GraphFamily):
    """Odd cycle: line 1..n plus the arc {1, n}."""

    def build(self, n: int = 5) -> AnyGraph:
        _require(n >= 3 and n % 2 == 1, f"cycle_odd needs an odd length >= 3, got {n}")
        return SparseHamiltonianGraph(n, [(1, n)])

    def get_name(self) -> str:
        return "cycle_odd"


class RainbowFamily(GraphFamily):
    """Nested arcs {i, 2k+2-i} for i = 1..k on a line of n >= 2k+1 vertices."""

    def build(self, k: int = 3, n: Optional[int] = None) -> AnyGraph:
        _require(k >= 1, "rainbow needs k >= 1")
        n = 2 * k + 1 if n is None else n
        _require(n >= 2 * k + 1, f"rainbow with k={k} needs n >= {2 * k + 1}")
        return SparseHamiltonianGraph(n, [(i, 2 * k + 2 - i) for i in range(1, k + 1)])

    def get_name(self) -> str:
        return "rainbow"


class MultiplyFamily(GraphFamily):
    """Long arcs {i, i*n/k} for i = 1..k; n/k must be an integer."""

    def build(self, n: int = 8, k: int = 2) -> AnyGraph:
        _require(k >= 1 and n % k == 0, f"multiply needs k | n, got n={n}, k={k}")
        step = n // k
        return SparseHamiltonianGraph(n, [(i, i * step) for i in range(1, k + 1)])

    def get_name(self) -> str:
        return "multiply"


class ThreeArcFigureFamily(GraphFamily):
    """Three arcs {2,10}, {4,12}, {8,16} on a line of n >= 16 vertices."""

    def build(self, n: int = 16) -> AnyGraph:
        _require(n >= 16, "k3_figure needs n >= 16")
        return SparseHamiltonianGraph(n, [(2, 10), (4, 12), (8, 16)])

    def get_name(self) -> str:
        return "k3_figure"


class Example1Family(GraphFamily):
    """Line 1..8N; a = 8N+1 joins 1..6N and b; b = 8N+2 joins 2N+1..8N."""

    def build(self, N: int = 1) -> AnyGraph:
        _require(N >= 1, "example1 needs N >= 1")
        line = 8 * N
        a, b = line + 1, line + 2
        edges = [(i, i + 1) for i in range(1, line)]
        edges += [(i, a) for i in range(1, 6 * N + 1)]
        edges += [(i, b) for i in range(2 * N + 1, line + 1)]
        edges.append((a, b))
        return FileGraph(line + 2, edges)

    def get_name(self) -> str:
        return "example1"


class Example2Family(GraphFamily):
    """Line 1..5N; b_i = 5N+i joins 2i-1..3N+2i; the b_i form a clique."""

    def build(self, N: int = 1) -> AnyGraph:
        _require(N >= 1, "example2 needs N >= 1")
        line = 5 * N
        edges = [(i, i + 1) for i in range(1, line)]
        hubs = [line + i for i in range(1, N + 1)]
        for i, hub in enumerate(hubs, start=1):
            edges += [(j, hub) for j in range(2 * i - 1, 3 * N + 2 * i + 1)]
        edges += [
            (hubs[i], hubs[j])
            for i in range(N)
            for j in range(i + 1, N)
        ]
        return FileGraph(6 * N, edges)

    def get_name(self) -> str:
        return "example2"


class Example1jFamily(GraphFamily):
    """8-node tree: leaves 1,2,3 on a = 7, leaves 4,5,6 on b = 8, edge a-b."""

    def build(self, root: int = 7) -> AnyGraph:
        edges = [(1, 7), (2, 7), (3, 7), (4, 8), (5, 8), (6, 8), (7, 8)]
        return RootedTree.from_edges(8, edges, root)

    def get_name(self) -> str:
        return "example1j"


class StarFamily(GraphFamily):
    """Star with center 1 and leaves 2..c+1, rooted at the center."""

    def build(self, c: int = 3) -> AnyGraph:
        _require(c >= 1, "star needs c >= 1")
        return RootedTree(c + 1, {leaf: 1 for leaf in range(2, c + 2)}, 1)

    def get_name(self) -> str:
        return "star"


class CompleteFamily(GraphFamily):
    """Complete graph K_n."""

    def build(self, n: int = 4) -> AnyGraph:
        _require(n >= 1, "complete needs n >= 1")
        return FileGraph(n, [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)])

    def get_name(self) -> str:
        return "complete"


class PathTreeFamily(GraphFamily):
    """Path 1-2-...-n rooted at vertex 1."""

    def build(self, n: int = 5) -> AnyGraph:
        _require(n >= 1, "path_tree needs n >= 1")
        return RootedTree(n, {v: v - 1 for v in range(2, n + 1)}, 1)

    def get_name(self) -> str:
        return "path_tree"


class CaterpillarFigureFamily(GraphFamily):
    """
    Caterpillar with 12 hairs.

    Body 1..6; every body vertex carries a one-vertex hair and a two-vertex
    hair. Hair vertices are numbered from 7 on, body vertex by body vertex,
    the short hair first and the long hair root-side first.
    """

    def build(self, body: int = 6) -> AnyGraph:
        _require(body >= 1, "caterpillar_figure needs a body")
        edges = [(i, i + 1) for i in range(1, body)]
        label = body
        for j in range(1, body + 1):
            label += 1
            edges.append((j, label))
            label += 2
            edges += [(j, label - 1), (label - 1, label)]
        return RootedTree.from_edges(label, edges, 1)

    def get_name(self) -> str:
        return "caterpillar_figure"


class CaterpillarTwoHairFamily(GraphFamily):
    """
    Caterpillar with two hairs sharing one branching node.

    Body 1..2q+1 with the branching node c = q+1; hair one takes labels
    2q+2..2q+1+h and hair two the next h labels, each numbered from the
    vertex next to c outwards.
    """

    def build(self, h: int = 2, q: int = 2) -> AnyGraph:
        _require(h >= 1 and q >= 1, "caterpillar_two_hair needs h >= 1 and q >= 1")
        body = 2 * q + 1
        center = q + 1
        edges = [(i, i + 1) for i in range(1, body)]
        label = body
        for _ in range(2):
            previous = center
            for _ in range(h):
                label += 1
                edges.append((previous, label))
                previous = label
        return RootedTree.from_edges(label, edges, 1)

    def get_name(self) -> str:
        return "caterpillar_two_hair"


class CompleteBinaryFamily(GraphFamily):
    """Complete binary tree in heap order: parent(v) = v // 2, root 1."""

    def build(self, depth: int = 4) -> AnyGraph:
        _require(depth >= 0, "complete_binary needs depth >= 0")
        n = 2 ** (depth + 1) - 1
        return RootedTree(n, {v: v // 2 for v in range(2, n + 1)}, 1)

    def get_name(self) -> str:
        return "complete_binary"


class GraphFamilyFactory:
    """Factory for creating graph family instances."""

    _families = {
        'line': LineFamily,
        'cycle_odd': CycleOddFamily,
        'rainbow': RainbowFamily,
        'multiply': MultiplyFamily,
        'k3_figure': ThreeArcFigureFamily,
        'example1': Example1Family,
        'example2': Example2Family,
        'example1j': Example1jFamily,
        'star': StarFamily,
        'complete': CompleteFamily,
        'path_tree': PathTreeFamily,
        'caterpillar_figure': CaterpillarFigureFamily,
        'caterpillar_two_hair': CaterpillarTwoHairFamily,
        'complete_binary': CompleteBinaryFamily,
    }

    @classmethod
    def create_family(cls, family_name: str) -> GraphFamily:
        """
        Create a graph family by name.

        Args:
            family_name: Name of the family

        Returns:
            GraphFamily instance

        Raises:
            GraphError: If the family name is unknown
        """
        family_name = family_name.lower()
        if family_name not in cls._families:
            raise GraphError(
                f"Unknown family: {family_name}. "
                f"Available families: {', '.join(cls._families.keys())}"
            )
        return cls._families[family_name]()

    @classmethod
    def get_available_families(cls) -> list[str]:
        """Get list of available family names."""
        return list(cls._families.keys())


def gen_example(name: str, **params) -> AnyGraph:
    """Build a named example graph; parameter errors surface as GraphError."""
    family = GraphFamilyFactory.create_family(name)
    try:
        return family.build(**params)
    except TypeError as e:
        raise GraphError(f"Invalid parameters for {name}: {e}")


def random_graph(n: int, p: float, rng: np.random.Generator) -> FileGraph:
    """Erdos-Renyi graph on 1..n."""
    edges = [
        (u, v)
        for u in range(1, n + 1)
        for v in range(u + 1, n + 1)
        if rng.random() < p
    ]
    return FileGraph(n, edges)


def random_tree(n: int, rng: np.random.Generator, root: int = 1) -> RootedTree:
    """Uniform random recursive tree with shuffled labels."""
    labels = rng.permutation(n) + 1
    edges = [
        (int(labels[v]), int(labels[rng.integers(0, v)]))
        for v in range(1, n)
    ]
    return RootedTree.from_edges(n, edges, root)


def random_connected_graph(n: int, extra_edges: int, rng: np.random.Generator) -> FileGraph:
    """Random spanning tree plus up to extra_edges further random edges."""
    edges = set(random_tree(n, rng).edges())
    missing = [
        (u, v)
        for u in range(1, n + 1)
        for v in range(u + 1, n + 1)
        if (u, v) not in edges
    ]
    if missing and extra_edges > 0:
        picks = rng.choice(len(missing), size=min(extra_edges, len(missing)), replace=False)
        edges.update(missing[int(i)] for i in picks)
    return FileGraph(n, sorted(edges))


def random_sham(n: int, k: int, rng: np.random.Generator, attempts: int = 200) -> SparseHamiltonianGraph:
    """
    Random sparse Hamiltonian graph with exactly k arcs.

    Raises:
        GraphError: If no valid arc set was found within the attempts
    """
    _require(2 * k <= n, f"cannot place {k} arcs with distinct feet on {n} vertices")
    for _ in range(attempts):
        feet = [int(f) + 1 for f in rng.choice(n, size=2 * k, replace=False)]
        rng.shuffle(feet)
        arcs = [tuple(sorted(feet[2 * i:2 * i + 2])) for i in range(k)]
        if all(v - u > 1 for u, v in arcs):
            return SparseHamiltonianGraph(n, arcs)
    raise GraphError(f"no random arc set found for n={n}, k={k}")
