"""Jump-metric layouts for rooted trees built from unidirectional path decompositions."""

from typing import Iterable, Optional, Sequence

from app.exceptions import GraphError, StoreError
from app.graph_model import Path, RootedTree
from app.stores import UncodedStore


def is_unidirectional(tree: RootedTree, vertices: Sequence[int]) -> bool:
    """True when every step goes from a child to its parent."""
    return all(tree.parent.get(a) == b for a, b in zip(vertices, vertices[1:]))


def unidirectional_paths(tree: RootedTree) -> list[tuple[int, ...]]:
    """Every child-to-ancestor chain of the tree, single vertices included."""
    found = []
    for v in tree.vertices:
        chain = tree.ancestors(v)
        found += [tuple(chain[:i]) for i in range(1, len(chain) + 1)]
    return found


class UPathDecomposition:
    """Vertex-disjoint unidirectional paths covering a rooted tree."""

    def __init__(self, tree: RootedTree, paths: Iterable[Sequence[int]]):
        """
        Initialize a decomposition.

        Args:
            tree: Rooted tree being decomposed
            paths: Vertex sequences, each listed bottom to top

        Raises:
            GraphError: If a path is not unidirectional or the paths do not
                cover every vertex exactly once
        """
        self.tree = tree
        self.paths = tuple(tuple(int(v) for v in p) for p in paths)
        owner: dict[int, int] = {}
        for idx, p in enumerate(self.paths):
            if not p:
                raise GraphError("decomposition paths cannot be empty")
            if not is_unidirectional(tree, p):
                raise GraphError(f"path {p} is not unidirectional")
            for v in p:
                if v in owner:
                    raise GraphError(f"vertex {v} lies on two decomposition paths")
                owner[v] = idx
        if set(owner) != set(tree.vertices):
            missing = sorted(set(tree.vertices) - set(owner))
            raise GraphError(f"decomposition misses vertices {missing}")
        self._owner = owner

    def path_index(self, v: int) -> int:
        return self._owner[v]

    def max_path_number(self) -> int:
        """Largest path number over all unidirectional paths."""
        return max(path_number(self, p) for p in unidirectional_paths(self.tree))

    def __len__(self) -> int:
        return len(self.paths)

    def to_dict(self) -> dict:
        return {'paths': [list(p) for p in self.paths]}

    def __repr__(self) -> str:
        return f"UPathDecomposition(paths={[list(p) for p in self.paths]})"


def path_number(d: UPathDecomposition, p) -> int:
    """Number of decomposition paths meeting p."""
    vertices = p.vertices if isinstance(p, Path) else p
    return len({d.path_index(v) for v in vertices})


def min_max_decomposition(tree: RootedTree) -> tuple[UPathDecomposition, int]:
    """
    Optimal unidirectional path decomposition by a post-order pass.

    Every vertex extends the path of the child whose subtree has the largest
    min-max path number (ties to the smallest label); its own value is
    max(UF of that child, UF of the runner-up + 1), and 1 at leaves.

    Args:
        tree: Rooted tree

    Returns:
        (decomposition, UF(T, r))
    """
    uf: dict[int, int] = {}
    heavy: dict[int, Optional[int]] = {}
    for v in tree.post_order():
        kids = sorted(tree.children(v), key=lambda c: (-uf[c], c))
        if not kids:
            uf[v], heavy[v] = 1, None
            continue
        heavy[v] = kids[0]
        uf[v] = uf[kids[0]]
        if len(kids) > 1:
            uf[v] = max(uf[v], uf[kids[1]] + 1)

    # A path ends at its top vertex: the root or a vertex that is not its parent's heavy child.
    paths = []
    for top in tree.vertices:
        if top != tree.root and heavy[tree.parent[top]] == top:
            continue
        chain = [top]
        while heavy[chain[-1]] is not None:
            chain.append(heavy[chain[-1]])
        paths.append(tuple(reversed(chain)))
    paths.sort(key=min)
    return UPathDecomposition(tree, paths), uf[tree.root]


def linearize_decomposition(d: UPathDecomposition) -> UncodedStore:
    """Concatenate the paths, smallest label first, each bottom to top."""
    ordered = sorted(d.paths, key=min)
    return UncodedStore([v for p in ordered for v in p], d.tree.n)


def _covering_chain(tree: RootedTree, vertices: Iterable[int]) -> Optional[tuple[int, ...]]:
    """Shortest unidirectional path holding all vertices, or None."""
    ordered = sorted(set(vertices), key=lambda v: (-tree.depth(v), v))
    bottom, top = ordered[0], ordered[-1]
    chain = tree.ancestors(bottom)
    if top not in chain:
        return None
    chain = chain[:chain.index(top) + 1]
    members = set(chain)
    if not all(v in members for v in ordered):
        return None
    return tuple(chain)


def decomposition_from_store(tree: RootedTree, s: UncodedStore) -> UPathDecomposition:
    """
    Decomposition whose path number is at most twice the store's
    unidirectional jump number.

    The store is cut greedily wherever the next chunk would leave every
    unidirectional path; each piece is covered by its shortest chain; shared
    vertices are then peeled off the top of one of the two overlapping
    chains until the chains are disjoint.

    Raises:
        StoreError: If s is not a permutation of the tree's vertices
    """
    if s.n != tree.n or not s.is_permutation():
        raise StoreError(f"expected a permutation store of the {tree.n} tree vertices")
    chains: list[list[int]] = []
    piece: list[int] = []
    for v in s.sequence:
        if piece and _covering_chain(tree, piece + [v]) is None:
            chains.append(list(_covering_chain(tree, piece)))
            piece = []
        piece.append(v)
    chains.append(list(_covering_chain(tree, piece)))

    while True:
        conflict = None
        for i in range(len(chains)):
            for j in range(i + 1, len(chains)):
                shared = set(chains[i]) & set(chains[j])
                if shared:
                    conflict = (i, j, min(shared, key=tree.depth))
                    break
            if conflict:
                break
        if conflict is None:
            break
        i, j, c = conflict
        # c tops at least one of the two chains
        victim = j if chains[j][-1] == c else i
        chains[victim].pop()
        if not chains[victim]:
            del chains[victim]
    return UPathDecomposition(tree, chains)


def max_unidirectional_jump(tree: RootedTree, s: UncodedStore) -> int:
    """Largest run count of a unidirectional path in a permutation store."""
    pos = {v: s.position_of(v) for v in tree.vertices}
    worst = 0
    for p in unidirectional_paths(tree):
        spots = sorted(pos[v] for v in p)
        runs = 1 + sum(1 for a, b in zip(spots, spots[1:]) if b != a + 1)
        worst = max(worst, runs)
    return worst


def _branching(tree: RootedTree) -> list[int]:
    graph = tree.as_file_graph()
    return [v for v in tree.vertices if graph.degree(v) >= 3]


def _hair(graph, start: int, came_from: int) -> list[int]:
    """Walk a pendant path from start away from came_from, root side first."""
    hair = [start]
    previous = came_from
    while True:
        onward = [w for w in graph.neighbors(hair[-1]) if w != previous]
        if not onward:
            return hair
        if len(onward) > 1:
            raise GraphError(f"vertex {hair[-1]} branches off the caterpillar body")
        previous = hair[-1]
        hair.append(onward[0])


def caterpillar_body(tree: RootedTree) -> list[int]:
    """
    Body of a caterpillar: the longest path through all branching vertices.

    Raises:
        GraphError: If the branching vertices do not lie on one path
    """
    graph = tree.as_file_graph()
    branching = _branching(tree)
    if not branching:
        leaves = [v for v in tree.vertices if graph.degree(v) <= 1]
        start = min(leaves)
        if tree.n == 1:
            return [start]
        return [start] + _hair(graph, graph.neighbors(start)[0], start)

    first, last = branching[0], branching[0]
    best = -1
    for u in branching:
        for v in branching:
            span = len(tree.path_between(u, v))
            if span > best or (span == best and (u, v) < (first, last)):
                best, first, last = span, u, v
    core = list(tree.path_between(first, last))
    if not set(branching) <= set(core):
        raise GraphError("branching vertices do not lie on one path; not a caterpillar")

    def extension(end: int, inner: Optional[int]) -> list[int]:
        options = [
            _hair(graph, w, end)
            for w in graph.neighbors(end)
            if w != inner and w not in core
        ]
        if not options:
            return []
        return max(options, key=lambda h: (len(h), -h[0]))

    left = extension(first, core[1] if len(core) > 1 else None)
    right = extension(last, core[-2] if len(core) > 1 else None) if len(core) > 1 else []
    if len(core) == 1:
        others = [
            _hair(graph, w, first)
            for w in graph.neighbors(first)
            if not left or w != left[0]
        ]
        right = max(others, key=lambda h: (len(h), -h[0])) if others else []
    return list(reversed(left)) + core + right


def caterpillar_layout(tree: RootedTree) -> UncodedStore:
    """
    Hairs left to right, each from its tip down to (not including) its
    body vertex, followed by the body.

    Raises:
        GraphError: If the tree is not a caterpillar
    """
    graph = tree.as_file_graph()
    body = caterpillar_body(tree)
    on_body = set(body)
    sequence = []
    for v in body:
        hairs = [
            _hair(graph, w, v)
            for w in graph.neighbors(v)
            if w not in on_body
        ]
        for hair in sorted(hairs, key=lambda h: h[0]):
            sequence += reversed(hair)
    sequence += body
    return UncodedStore(sequence, tree.n)


def two_hair_layout(tree: RootedTree, center: int, body: Sequence[int]) -> UncodedStore:
    """
    Two hairs meeting the body at center: first hair tip to center, the
    second hair from center to its tip, then the rest of the body in order.

    Raises:
        GraphError: If center does not carry exactly two hairs covering
            every non-body vertex
    """
    graph = tree.as_file_graph()
    body = [int(v) for v in body]
    if center not in body:
        raise GraphError(f"center {center} is not on the body")
    if not graph.is_path(body):
        raise GraphError("body is not a path of the tree")
    on_body = set(body)
    hairs = [_hair(graph, w, center) for w in graph.neighbors(center) if w not in on_body]
    if len(hairs) != 2:
        raise GraphError(f"center {center} carries {len(hairs)} hairs, expected 2")
    first, second = sorted(hairs, key=lambda h: h[0])
    if len(on_body) + len(first) + len(second) != tree.n:
        raise GraphError("vertices outside the body and the two hairs")
    sequence = list(reversed(first)) + [center] + second
    sequence += [v for v in body if v != center]
    return UncodedStore(sequence, tree.n)
