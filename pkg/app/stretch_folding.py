"""Line folding layouts for sparse Hamiltonian graphs.

A folding h assigns every vertex of the line a height so that neighbours on
the line differ by one (P1) and both feet of every arc share a height (P2).
Reading the heights bottom-up gives a permutation store whose edge
displacement is at most the number of linear segments of h.
"""

from bisect import bisect_left
from dataclasses import dataclass
from typing import Iterable, Optional

from app.exceptions import ConsistencyError, FoldingError, StoreError
from app.graph_model import SparseHamiltonianGraph, double_graph
from app.layout_config import LayoutConfig
from app.logger import Logger
from app.metrics import max_edge_displacement
from app.stores import UncodedStore

FOLDING_FORMAT = "dedup-layout/folding-v1"


class Folding:
    """Heights h(1..n) of a folded line."""

    def __init__(self, h: Iterable[int]):
        self.h = tuple(int(v) for v in h)
        if not self.h:
            raise FoldingError("a folding needs at least one vertex")

    @property
    def n(self) -> int:
        return len(self.h)

    def height(self, v: int) -> int:
        return self.h[v - 1]

    def levels(self) -> dict[int, tuple[int, ...]]:
        """Vertices grouped by height, ascending within each level."""
        grouped: dict[int, list[int]] = {}
        for v, level in enumerate(self.h, start=1):
            grouped.setdefault(level, []).append(v)
        return {level: tuple(grouped[level]) for level in sorted(grouped)}

    def breakpoints(self) -> list[int]:
        """Vertices where the slope reverses."""
        return [
            v for v in range(2, self.n)
            if self.height(v) - self.height(v - 1) != self.height(v + 1) - self.height(v)
        ]

    def segment_count(self) -> int:
        return len(self.breakpoints()) + 1

    def thickness(self) -> int:
        """Largest number of vertices sharing one height."""
        return max(len(vs) for vs in self.levels().values())

    def satisfies_p1(self) -> bool:
        return all(abs(self.h[i + 1] - self.h[i]) == 1 for i in range(self.n - 1))

    def satisfies_p2(self, g: SparseHamiltonianGraph) -> bool:
        return all(self.height(a) == self.height(b) for a, b in g.arcs)

    def validate(self, g: Optional[SparseHamiltonianGraph] = None):
        """
        Check the folding properties.

        Args:
            g: Graph whose arcs must be aligned; None checks P1 only

        Raises:
            FoldingError: Naming the first violated property and its location
        """
        for i in range(1, self.n):
            if abs(self.height(i + 1) - self.height(i)) != 1:
                raise FoldingError(
                    f"P1 violated on line edge ({i},{i + 1}): "
                    f"heights {self.height(i)} and {self.height(i + 1)}"
                )
        if g is None:
            return
        if g.n != self.n:
            raise FoldingError(f"folding covers {self.n} vertices, graph has {g.n}")
        for a, b in g.arcs:
            if self.height(a) != self.height(b):
                raise FoldingError(
                    f"P2 violated on arc ({a},{b}): heights {self.height(a)} and {self.height(b)}"
                )

    def to_dict(self) -> dict:
        return {'format': FOLDING_FORMAT, 'h': list(self.h)}

    @classmethod
    def from_dict(cls, data: dict) -> 'Folding':
        try:
            return cls(data['h'])
        except (KeyError, TypeError, ValueError) as e:
            raise FoldingError(f"Malformed folding payload: {e}")

    def __eq__(self, other) -> bool:
        return isinstance(other, Folding) and self.h == other.h

    def __hash__(self) -> int:
        return hash(self.h)

    def __repr__(self) -> str:
        return f"Folding(h={list(self.h)})"


@dataclass(frozen=True)
class FoldPlan:
    """Groups of arc feet, one per segment, with anchors r and breakpoints d."""

    groups: tuple[tuple[int, ...], ...]
    r: tuple[int, ...]
    d: tuple[int, ...]

    def __post_init__(self):
        if len(self.r) != len(self.groups):
            raise FoldingError("a fold plan needs one anchor per group")
        if len(self.d) != max(len(self.r) - 1, 0):
            raise FoldingError("a fold plan needs one breakpoint between consecutive anchors")
        for i, d in enumerate(self.d):
            if 2 * d != self.r[i] + self.r[i + 1]:
                raise FoldingError(f"breakpoint d_{i + 1}={d} is not (r_{i + 1}+r_{i + 2})/2")

    @property
    def segment_count(self) -> int:
        return max(len(self.groups), 1)

    def to_dict(self) -> dict:
        return {
            'groups': [list(g) for g in self.groups],
            'r': list(self.r),
            'd': list(self.d),
        }


def folding_bound(k: int) -> int:
    """Displacement guarantee floor((9k+1)/5) of the folding construction."""
    return max(1, (9 * k + 1) // 5)


def group_count_bound(k: int) -> int:
    """Ceiling form ceil((9k+1)/5) used for the grouping size."""
    return -(-(9 * k + 1) // 5)


def _check_feet_parity(g: SparseHamiltonianGraph) -> list[int]:
    feet = g.feet()
    if len({f % 2 for f in feet}) > 1:
        raise FoldingError(
            f"arc feet {feet} mix parities; double the graph first"
        )
    return feet


def group_arc_feet(g: SparseHamiltonianGraph) -> list[tuple[int, ...]]:
    """
    Group the sorted arc feet into pairs and singletons.

    Repeatedly takes the closest adjacent pair of feet that is not itself an
    arc (ties go to the smaller left foot), then retires every adjacent pair
    touching an arc partner of the chosen feet and every pair overlapping
    the chosen one.

    Args:
        g: Sparse Hamiltonian graph whose feet share a parity

    Returns:
        Groups sorted by their smallest foot

    Raises:
        FoldingError: If the feet mix parities
    """
    feet = _check_feet_parity(g)
    index = {c: i for i, c in enumerate(feet)}
    open_pairs = set(range(len(feet) - 1))
    chosen: list[int] = []

    while True:
        candidates = [
            i for i in sorted(open_pairs)
            if not g.is_arc(feet[i], feet[i + 1])
        ]
        if not candidates:
            break
        best = min(candidates, key=lambda i: (feet[i + 1] - feet[i], i))
        chosen.append(best)
        retired = {best - 1, best, best + 1}
        for foot in (feet[best], feet[best + 1]):
            j = index[g.partner(foot)]
            retired.update((j - 1, j))
        open_pairs -= retired

    paired = set()
    groups = []
    for i in chosen:
        groups.append((feet[i], feet[i + 1]))
        paired.update(groups[-1])
    groups += [(c,) for c in feet if c not in paired]
    return sorted(groups)


def _normalize_groups(g: SparseHamiltonianGraph, groups) -> list[tuple[int, ...]]:
    ordered = sorted(tuple(sorted(int(c) for c in grp)) for grp in groups)
    flat = [c for grp in ordered for c in grp]
    if sorted(flat) != g.feet():
        raise FoldingError("groups must partition the arc feet exactly")
    for grp in ordered:
        if len(grp) not in (1, 2):
            raise FoldingError(f"group {grp} must hold one or two feet")
    for left, right in zip(ordered, ordered[1:]):
        if left[-1] > right[0]:
            raise FoldingError(f"groups {left} and {right} interleave on the line")
    return ordered


def _segment_expressions(g, groups):
    """Express every anchor as sign * y_component + offset from the arc equations."""
    segment = {c: i for i, grp in enumerate(groups) for c in grp}
    links: dict[int, list[tuple[int, int, int, tuple[int, int]]]] = {i: [] for i in range(len(groups))}
    for a, b in g.arcs:
        ia, ib = segment[a], segment[b]
        if ia == ib:
            raise FoldingError(f"arc ({a},{b}) has both feet in segment {ia + 1}")
        if (ia - ib) % 2 == 0:
            sign, const = 1, b - a
        else:
            sign, const = -1, a + b
        # r_ib = sign * r_ia + const and, inverted, r_ia = sign * r_ib - sign * const
        links[ia].append((ib, sign, const, (a, b)))
        links[ib].append((ia, sign, -sign * const, (a, b)))

    expr: dict[int, tuple[int, int, int]] = {}
    forced: dict[int, int] = {}
    roots = []
    for start in range(len(groups)):
        if start in expr:
            continue
        comp = len(roots)
        roots.append(start)
        expr[start] = (1, 0, comp)
        stack = [start]
        while stack:
            cur = stack.pop()
            s_cur, o_cur, _ = expr[cur]
            for nxt, sign, const, arc in links[cur]:
                candidate = (sign * s_cur, sign * o_cur + const, comp)
                if nxt not in expr:
                    expr[nxt] = candidate
                    stack.append(nxt)
                    continue
                s_old, o_old, _ = expr[nxt]
                if s_old == candidate[0]:
                    if o_old != candidate[1]:
                        raise FoldingError(f"arc {arc} contradicts the anchors of its cycle")
                    continue
                diff = candidate[1] - o_old
                if diff % (s_old - candidate[0]) != 0:
                    raise FoldingError(f"arc {arc} forces a non-integral anchor")
                y = diff // (s_old - candidate[0])
                if forced.get(comp, y) != y:
                    raise FoldingError(f"arc {arc} forces two different anchors")
                forced[comp] = y
    return expr, forced, roots


def compute_fold_plan(
    g: SparseHamiltonianGraph,
    groups,
    config: Optional[LayoutConfig] = None
) -> FoldPlan:
    """
    Solve for segment anchors r and breakpoints d of a grouping.

    Anchors linked by an arc are tied by the alignment equation; the free
    anchor of each linked component is searched outward from the smallest
    foot of its first group, even offsets before odd ones. A breakpoint may
    sit on a foot of either neighbouring group.

    Args:
        g: Sparse Hamiltonian graph with same-parity feet
        groups: Partition of the feet, one group per segment
        config: Supplies the search node cap

    Returns:
        FoldPlan with d_i = (r_i + r_{i+1}) / 2

    Raises:
        FoldingError: If no anchors satisfy the segment constraints; the
            message names the constraint that blocked the search
    """
    config = config or LayoutConfig()
    _check_feet_parity(g)
    ordered = _normalize_groups(g, groups)
    if not ordered:
        return FoldPlan((), (), ())
    expr, forced, roots = _segment_expressions(g, ordered)
    count = len(ordered)
    n = g.n

    def violation(r: dict[int, int], i: int) -> Optional[str]:
        left, right = r[i], r[i + 1]
        if left >= right:
            return f"anchors r_{i + 1}={left} and r_{i + 2}={right} are not increasing"
        if (left + right) % 2:
            return f"breakpoint d_{i + 1} between r={left} and r={right} is not integral"
        d = (left + right) // 2
        if d < ordered[i][-1]:
            return f"breakpoint d_{i + 1}={d} does not reach foot {ordered[i][-1]}"
        if d > ordered[i + 1][0]:
            return f"breakpoint d_{i + 1}={d} passes foot {ordered[i + 1][0]}"
        if i == 0 and d <= 1:
            return f"breakpoint d_1={d} is not above vertex 1"
        if i == count - 2 and d >= n:
            return f"breakpoint d_{i + 1}={d} is not below vertex {n}"
        return None

    def out_of_window(seg: int, value: int) -> Optional[str]:
        # r_i < d_i <= first foot of the next group, r_i > d_{i-1} >= last foot of the previous one
        if seg < count - 1 and value >= ordered[seg + 1][0]:
            return f"anchor r_{seg + 1}={value} reaches the next group at {ordered[seg + 1][0]}"
        if seg > 0 and value <= ordered[seg - 1][-1]:
            return f"anchor r_{seg + 1}={value} falls behind the previous group at {ordered[seg - 1][-1]}"
        return None

    def candidates(comp: int) -> list[int]:
        if comp in forced:
            return [forced[comp]]
        default = ordered[roots[comp]][0]
        values = [default]
        # same parity as the feet first, then the other parity
        for first in (2, 1):
            for step in range(first, 2 * n + 1, 2):
                values += [default - step, default + step]
        return values

    members: dict[int, list[int]] = {}
    for seg, (_, _, comp) in expr.items():
        members.setdefault(comp, []).append(seg)

    nodes = 0
    last_violation = "no anchors tried"
    assignment: dict[int, int] = {}

    def search(comp: int) -> bool:
        nonlocal nodes, last_violation
        if comp == len(roots):
            return True
        for y in candidates(comp):
            nodes += 1
            if nodes > config.fold_search_limit:
                raise FoldingError(
                    f"fold plan search exceeded {config.fold_search_limit} nodes; "
                    f"last blocked by: {last_violation}"
                )
            for seg in members[comp]:
                sign, offset, _ = expr[seg]
                assignment[seg] = sign * y + offset
            blocked = None
            for seg in members[comp]:
                blocked = out_of_window(seg, assignment[seg])
                if blocked:
                    break
            for seg in members[comp] if not blocked else ():
                for i in (seg - 1, seg):
                    if 0 <= i < count - 1 and i in assignment and i + 1 in assignment:
                        blocked = violation(assignment, i)
                        if blocked:
                            break
                if blocked:
                    break
            if blocked:
                last_violation = blocked
            elif search(comp + 1):
                return True
            for seg in members[comp]:
                del assignment[seg]
        return False

    if not search(0):
        raise FoldingError(f"infeasible fold plan: {last_violation}")
    r = tuple(assignment[i] for i in range(count))
    d = tuple((r[i] + r[i + 1]) // 2 for i in range(count - 1))
    return FoldPlan(tuple(ordered), r, d)


def plan_to_folding(plan: FoldPlan, n: int) -> Folding:
    """
    Build the piecewise linear folding of a plan.

    Segment i (1-based) runs up to d_i with slope +1 for odd i and -1 for
    even i, passing through height 0 at r_i; heights are then shifted so the
    lowest is 1. A plan without groups gives the identity folding.

    Raises:
        FoldingError: If the breakpoints do not split [1, n] into segments
    """
    if not plan.r:
        return Folding(range(1, n + 1))
    d = list(plan.d)
    bounds = [1] + d + [n]
    if any(a >= b for a, b in zip(bounds, bounds[1:])):
        raise FoldingError(f"breakpoints {d} do not split [1,{n}] into segments")
    raw = []
    for x in range(1, n + 1):
        i = bisect_left(d, x)
        sign = 1 if i % 2 == 0 else -1
        raw.append(sign * (x - plan.r[i]))
    low = min(raw)
    folding = Folding(v - low + 1 for v in raw)
    if folding.breakpoints() != d:
        raise FoldingError(f"folding breakpoints {folding.breakpoints()} differ from plan {d}")
    return folding


def center_folding(n: int, center: int) -> Folding:
    """Zig-zag fold at one vertex: h(u) = H - |u - center|."""
    if not 1 <= center <= n:
        raise FoldingError(f"fold center {center} outside [1,{n}]")
    top = 1 + max(center - 1, n - center)
    return Folding(top - abs(u - center) for u in range(1, n + 1))


def linearize_from_folding(h: Folding, g: SparseHamiltonianGraph) -> UncodedStore:
    """
    Read a folding level by level into a permutation store.

    Args:
        h: Folding of g
        g: Sparse Hamiltonian graph

    Returns:
        Vertices ordered by height, then by index

    Raises:
        FoldingError: If h violates P1 or P2 for g
    """
    h.validate(g)
    sequence = [v for level in h.levels().values() for v in level]
    return UncodedStore(sequence, g.n)


def undouble_store(store: UncodedStore, n: int) -> UncodedStore:
    """Drop split vertices (even labels) and map 2i-1 back to i."""
    return UncodedStore([(v + 1) // 2 for v in store.sequence if v % 2 == 1], n)


def alternative_groupings(g: SparseHamiltonianGraph, limit: int) -> list[list[tuple[int, ...]]]:
    """Groupings from disjoint adjacent non-arc pairs, most pairs first."""
    feet = g.feet()
    options: list[tuple[int, ...]] = []

    def pick(i: int, taken: tuple[int, ...]):
        if len(options) >= limit:
            return
        if i >= len(feet) - 1:
            options.append(taken)
            return
        if not g.is_arc(feet[i], feet[i + 1]):
            pick(i + 2, taken + (i,))
        pick(i + 1, taken)

    pick(0, ())
    options.sort(key=lambda t: (-len(t), t))
    groupings = []
    for taken in options:
        paired = {c for i in taken for c in (feet[i], feet[i + 1])}
        groups = [(feet[i], feet[i + 1]) for i in taken]
        groups += [(c,) for c in feet if c not in paired]
        groupings.append(sorted(groups))
    return groupings


@dataclass(frozen=True)
class ShamLayout:
    """Outcome of the sparse Hamiltonian layout pipeline.

    segment_bound is the segment count of the folding, doubled when the
    folding was taken on the doubled graph.
    """

    store: UncodedStore
    strategy: str
    doubled: bool
    folding: Optional[Folding]
    plan: Optional[FoldPlan]
    displacement: int
    segment_bound: int
    folding_bound: int

    def to_dict(self) -> dict:
        return {
            'store': self.store.to_dict(),
            'strategy': self.strategy,
            'doubled': self.doubled,
            'folding': self.folding.to_dict() if self.folding else None,
            'plan': self.plan.to_dict() if self.plan else None,
            'displacement': self.displacement,
            'segment_bound': self.segment_bound,
            'folding_bound': self.folding_bound,
        }


def _fold_grouped(work: SparseHamiltonianGraph, config: LayoutConfig):
    first = group_arc_feet(work)
    if len(first) > group_count_bound(work.k):
        Logger().log_discrepancy("grouping size", f"<= {group_count_bound(work.k)}", len(first))
    tried = []
    for strategy, groups in [('grouped', first)] + [
        ('alternative', alt) for alt in alternative_groupings(work, config.max_groupings)
    ]:
        if groups in tried:
            continue
        tried.append(groups)
        try:
            plan = compute_fold_plan(work, groups, config)
        except FoldingError:
            continue
        if all(len(grp) == 1 for grp in groups) and strategy != 'grouped':
            strategy = 'singletons'
        return strategy, plan, plan_to_folding(plan, work.n)
    raise ConsistencyError("no grouping admits a fold plan, not even singletons")


def plan_sham_layout(g: SparseHamiltonianGraph, config: Optional[LayoutConfig] = None) -> ShamLayout:
    """
    Run the full folding pipeline and report every intermediate.

    Lines are laid out as is. When all arcs share the same foot sum the
    line is folded once at its center. Otherwise feet are grouped, a plan
    is solved and folded, doubling the graph first when the feet mix
    parities. A layout above floor((9k+1)/5) is logged as a discrepancy.

    Raises:
        ConsistencyError: If a folding layout exceeds its segment bound
    """
    config = config or LayoutConfig()
    bound = folding_bound(g.k)
    plan = None

    if g.k == 0:
        work, doubled, strategy = g, False, 'identity'
        folding = Folding(range(1, g.n + 1))
    elif len({a + b for a, b in g.arcs}) == 1:
        doubled = (g.arcs[0][0] + g.arcs[0][1]) % 2 == 1
        work = double_graph(g) if doubled else g
        a, b = work.arcs[0]
        strategy = 'center'
        folding = center_folding(work.n, (a + b) // 2)
    else:
        doubled = len({f % 2 for f in g.feet()}) > 1
        work = double_graph(g) if doubled else g
        strategy, plan, folding = _fold_grouped(work, config)

    store = linearize_from_folding(folding, work)
    if doubled:
        store = undouble_store(store, g.n)
    displacement = max_edge_displacement(store, g)
    segments = folding.segment_count()
    limit = 2 * segments if doubled else segments
    if displacement > limit:
        raise ConsistencyError(
            f"folding layout displacement {displacement} exceeds its segment bound {limit}"
        )

    if displacement > bound:
        Logger().log_discrepancy("folding layout width", f"<= {bound}", displacement)

    return ShamLayout(
        store=store,
        strategy=strategy,
        doubled=doubled,
        folding=folding,
        plan=plan,
        displacement=displacement,
        segment_bound=limit,
        folding_bound=bound,
    )


def layout_sham(g: SparseHamiltonianGraph, config: Optional[LayoutConfig] = None) -> UncodedStore:
    """Low-bandwidth permutation store for a sparse Hamiltonian graph."""
    return plan_sham_layout(g, config).store


def _undouble_graph(g_doubled: SparseHamiltonianGraph) -> SparseHamiltonianGraph:
    if g_doubled.n % 2 == 0:
        raise FoldingError(f"a doubled graph has an odd vertex count, got {g_doubled.n}")
    if any(f % 2 == 0 for f in g_doubled.feet()):
        raise FoldingError("a doubled graph keeps its arc feet on odd labels")
    return SparseHamiltonianGraph(
        (g_doubled.n + 1) // 2,
        [((a + 1) // 2, (b + 1) // 2) for a, b in g_doubled.arcs],
    )


def fold_from_store(g_doubled: SparseHamiltonianGraph, s: UncodedStore) -> Folding:
    """
    Turn a store of the original graph into a folding of the doubled graph.

    The store is cut into blocks of B positions (B its edge displacement).
    Arc feet pointing to the previous block (L) or the next block (R) are
    regrouped so that every arc ends up inside one merged block; merged
    block indices give the heights of the original vertices and split
    vertices take the midpoint. A line without arcs gets the identity folding.

    Args:
        g_doubled: Output of double_graph
        s: Permutation store of the original graph

    Returns:
        A folding of g_doubled with thickness at most 3B

    Raises:
        StoreError: If s is not a permutation of the original vertices
        FoldingError: If the result violates P1 or P2
    """
    original = _undouble_graph(g_doubled)
    if s.n != original.n or not s.is_permutation():
        raise StoreError(f"expected a permutation store of {original.n} chunks")
    if original.k == 0:
        return Folding(range(1, g_doubled.n + 1))
    width = max(max_edge_displacement(s, original), 1)
    block = {v: (s.position_of(v) - 1) // width + 1 for v in range(1, original.n + 1)}

    merged = {}
    for v, j in block.items():
        partner = original.partner(v)
        goes_right = partner is not None and block[partner] == j + 1
        if j % 2 == 1:
            merged[v] = (j + 1) // 2
        elif goes_right:
            merged[v] = j // 2 + 1
        else:
            merged[v] = j // 2

    heights = [0] * g_doubled.n
    for i in range(1, original.n + 1):
        heights[2 * i - 2] = 2 * merged[i] - 1
    for i in range(1, original.n):
        left, right = heights[2 * i - 2], heights[2 * i]
        heights[2 * i - 1] = (left + right) // 2 if left != right else left + 1
    folding = Folding(heights)
    folding.validate(g_doubled)

    if folding.thickness() > 3 * width:
        Logger().log_discrepancy("fold thickness", f"<= {3 * width}", folding.thickness())
    return folding


@dataclass(frozen=True)
class FoldCertificate:
    """Thickness and relinearized displacement of a store-derived folding."""

    folding: Folding
    width: int
    thickness: int
    displacement: int

    @property
    def thickness_bound(self) -> int:
        return 3 * self.width

    @property
    def displacement_bound(self) -> int:
        return 6 * self.width

    @property
    def holds(self) -> bool:
        return self.thickness <= self.thickness_bound and self.displacement <= self.displacement_bound

    def to_dict(self) -> dict:
        return {
            'folding': self.folding.to_dict(),
            'width': self.width,
            'thickness': self.thickness,
            'thickness_bound': self.thickness_bound,
            'displacement': self.displacement,
            'displacement_bound': self.displacement_bound,
            'holds': self.holds,
        }


def fold_certificate(g_doubled: SparseHamiltonianGraph, s: UncodedStore) -> FoldCertificate:
    """Fold a store, relinearize it and compare against 3B and 6B."""
    original = _undouble_graph(g_doubled)
    folding = fold_from_store(g_doubled, s)
    relinearized = undouble_store(linearize_from_folding(folding, g_doubled), original.n)
    return FoldCertificate(
        folding=folding,
        width=max(max_edge_displacement(s, original), 1),
        thickness=folding.thickness(),
        displacement=max_edge_displacement(relinearized, original),
    )
