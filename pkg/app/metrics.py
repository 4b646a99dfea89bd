"""Recovery sets and the stretch / jump fragmentation metrics.

Stretch of a file p in a store: the shortest store window (max - min + 1)
that holds a recovery set for p's chunks, divided by l(p). Jump: the
fewest maximal runs of consecutive positions over the inclusion-minimal
recovery sets. Values are exact; stretch is a Fraction.
"""

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterable, Optional

import numpy as np
import pandas as pd

from app.exceptions import StoreError
from app.gf2 import XorBasis, gf2_nullspace_basis, gf2_solve, vector_to_int
from app.graph_model import AnyGraph, FileGraph, Path, enumerate_paths
from app.layout_config import LayoutConfig
from app.stores import CodedStore, RecoverySet, Store, UncodedStore, as_coded


def format_fraction(value: Fraction) -> str:
    """Render a rational as "p/q"."""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def parse_fraction(text: str) -> Fraction:
    return Fraction(text)


def _plain(store: Store) -> Optional[UncodedStore]:
    """The uncoded view of a store, when every column is a plain copy."""
    if isinstance(store, UncodedStore):
        return store
    if store.is_uncoded():
        return store.as_uncoded()
    return None


def _check_chunks(store: Store, chunks: Iterable[int]) -> list[int]:
    targets = sorted(set(int(c) for c in chunks))
    if not targets:
        raise StoreError("at least one target chunk is required")
    bad = [c for c in targets if not 1 <= c <= store.n]
    if bad:
        raise StoreError(f"chunks {bad} outside [1,{store.n}]")
    return targets


class _CosetTable:
    """Per-chunk recovery cosets K(i) + null(G), as position bitsets."""

    def __init__(self, store: CodedStore, max_combos: int):
        gen = store.gen
        null = gf2_nullspace_basis(gen)
        self.dimension = null.shape[0]
        if 2 ** self.dimension > max_combos:
            raise StoreError(
                f"store redundancy {self.dimension} gives cosets of size "
                f"2^{self.dimension}, above the cap {max_combos}"
            )
        self.max_combos = max_combos
        self._null = [vector_to_int(row) for row in null]
        self._minimal: dict[int, tuple[int, ...]] = {}
        self._particular = {}
        for chunk in range(1, store.n + 1):
            e = np.zeros(store.n, dtype=np.uint8)
            e[chunk - 1] = 1
            self._particular[chunk] = vector_to_int(gf2_solve(gen, e))

    def coset(self, chunk: int) -> list[int]:
        elements = [self._particular[chunk]]
        for basis_vector in self._null:
            elements += [value ^ basis_vector for value in elements]
        return elements

    def minimal_supports(self, chunk: int) -> tuple[int, ...]:
        """Inclusion-minimal supports among the chunk's coset."""
        if chunk not in self._minimal:
            self._minimal[chunk] = _inclusion_minimal(self.coset(chunk))
        return self._minimal[chunk]


def _inclusion_minimal(candidates: Iterable[int]) -> tuple[int, ...]:
    kept: list[int] = []
    for value in sorted(set(candidates), key=lambda v: (bin(v).count('1'), v)):
        if not any(k & value == k for k in kept):
            kept.append(value)
    return tuple(kept)


@lru_cache(maxsize=128)
def _coset_table(store: CodedStore, max_combos: int) -> _CosetTable:
    return _CosetTable(store, max_combos)


def _bits_to_set(bits: int) -> RecoverySet:
    positions = []
    pos = 1
    while bits:
        if bits & 1:
            positions.append(pos)
        bits >>= 1
        pos += 1
    return RecoverySet(tuple(positions))


def can_reconstruct(c: Store, r: RecoverySet, chunk: int) -> bool:
    """
    Check whether the columns at r span the unit vector of chunk.

    Raises:
        StoreError: If a position or the chunk is out of range
    """
    coded = as_coded(c)
    if r.positions[-1] > coded.m:
        raise StoreError(f"position {r.positions[-1]} outside [1,{coded.m}]")
    _check_chunks(coded, [chunk])
    basis = XorBasis()
    for pos in r:
        basis.add(coded.column(pos))
    return basis.contains(1 << (chunk - 1))


def minimal_recovery_sets(
    c: Store,
    chunks: Iterable[int],
    config: Optional[LayoutConfig] = None
) -> list[RecoverySet]:
    """
    Enumerate the inclusion-minimal recovery sets of a chunk set.

    Args:
        c: Coded or uncoded store
        chunks: Non-empty set of chunk ids
        config: Supplies the cap on coset combinations

    Returns:
        Minimal recovery sets in lexicographic order of positions

    Raises:
        StoreError: On empty or out-of-range chunks, or when the
            enumeration would exceed the configured cap
    """
    targets = _check_chunks(c, chunks)
    cap = (config or LayoutConfig()).max_recovery_combos
    plain = _plain(c)
    if plain is not None:
        choices = [plain.positions(chunk) for chunk in targets]
        total = int(np.prod([len(p) for p in choices], dtype=np.int64))
        if total > cap:
            raise StoreError(f"{total} occurrence combinations exceed the cap {cap}")
        sets = {tuple(sorted(pick)) for pick in product(*choices)}
        return [RecoverySet(s) for s in sorted(sets)]

    table = _coset_table(as_coded(c), cap)
    options = [table.minimal_supports(chunk) for chunk in targets]
    total = int(np.prod([len(o) for o in options], dtype=np.int64))
    if total > cap:
        raise StoreError(f"{total} recovery combinations exceed the cap {cap}")
    unions = set()
    for pick in product(*options):
        bits = 0
        for value in pick:
            bits |= value
        unions.add(bits)
    minimal = [_bits_to_set(b) for b in _inclusion_minimal(unions)]
    return sorted(minimal, key=lambda r: r.positions)


def _plain_window(store: UncodedStore, targets: list[int]) -> tuple[int, RecoverySet]:
    """Shortest window holding every target chunk (two-pointer scan)."""
    wanted = set(targets)
    counts: dict[int, int] = {}
    covered = 0
    best: Optional[tuple[int, int]] = None
    lo = 0
    seq = store.sequence
    for hi, chunk in enumerate(seq):
        if chunk in wanted:
            counts[chunk] = counts.get(chunk, 0) + 1
            if counts[chunk] == 1:
                covered += 1
        while covered == len(wanted):
            if best is None or hi - lo < best[1] - best[0]:
                best = (lo, hi)
            left = seq[lo]
            if left in wanted:
                counts[left] -= 1
                if counts[left] == 0:
                    covered -= 1
            lo += 1
    start, end = best
    witness = []
    for chunk in targets:
        witness.append(next(p for p in store.positions(chunk) if p >= start + 1))
    return end - start + 1, RecoverySet(tuple(witness))


def _coded_window(store: CodedStore, targets: list[int]) -> tuple[int, RecoverySet]:
    """Shortest window whose columns span every target unit vector."""
    units = [1 << (chunk - 1) for chunk in targets]
    best: Optional[tuple[int, int]] = None
    for start in range(1, store.m + 1):
        basis = XorBasis()
        limit = store.m if best is None else min(store.m, start + best[1] - best[0] - 1)
        for end in range(start, limit + 1):
            basis.add(store.column(end))
            if all(basis.contains(u) for u in units):
                best = (start, end)
                break
    if best is None:
        raise StoreError("store cannot reconstruct the requested chunks")
    start, end = best
    kept = list(range(start, end + 1))
    for pos in reversed(range(start, end + 1)):
        trial = [p for p in kept if p != pos]
        if trial and all(can_reconstruct(store, RecoverySet(tuple(trial)), c) for c in targets):
            kept = trial
    return end - start + 1, RecoverySet(tuple(kept))


def stretch_window(c: Store, chunks: Iterable[int]) -> tuple[int, RecoverySet]:
    """Unnormalized minimal window length and a minimal recovery set inside it."""
    targets = _check_chunks(c, chunks)
    plain = _plain(c)
    if plain is not None:
        return _plain_window(plain, targets)
    return _coded_window(as_coded(c), targets)


def min_stretch(c: Store, p: Path) -> Fraction:
    """
    Minimal recovery window of a file divided by its length.

    Args:
        c: Lossless store over the file graph's chunks
        p: File

    Returns:
        MinS(c, p) as an exact rational
    """
    window, _ = stretch_window(c, p.vertices)
    return Fraction(window, p.length)


def _plain_jump(store: UncodedStore, targets: list[int]) -> tuple[int, RecoverySet]:
    """Fewest disjoint clean intervals covering the targets, by BFS over masks."""
    if all(len(store.positions(c)) == 1 for c in targets):
        witness = RecoverySet(tuple(store.positions(c)[0] for c in targets))
        return witness.runs(), witness

    index = {chunk: i for i, chunk in enumerate(targets)}
    full = (1 << len(targets)) - 1
    seq = store.sequence
    intervals = []
    for start in range(len(seq)):
        mask = 0
        for end in range(start, len(seq)):
            bit = 1 << index[seq[end]] if seq[end] in index else 0
            if not bit or mask & bit:
                break
            mask |= bit
            intervals.append((start + 1, end + 1, mask))

    parent: dict[int, tuple[int, tuple[int, int]]] = {0: (-1, (0, 0))}
    queue = deque([0])
    while queue and full not in parent:
        state = queue.popleft()
        for start, end, mask in intervals:
            if state & mask:
                continue
            nxt = state | mask
            if nxt not in parent:
                parent[nxt] = (state, (start, end))
                queue.append(nxt)
    positions = []
    state = full
    while state:
        previous, (start, end) = parent[state]
        positions.extend(range(start, end + 1))
        state = previous
    witness = RecoverySet(tuple(positions))
    return witness.runs(), witness


def jump_witness(c: Store, chunks: Iterable[int], config: Optional[LayoutConfig] = None) -> tuple[int, RecoverySet]:
    """Minimal run count and the lexicographically first set attaining it."""
    targets = _check_chunks(c, chunks)
    plain = _plain(c)
    if plain is not None:
        return _plain_jump(plain, targets)
    sets = minimal_recovery_sets(c, targets, config)
    best = min(sets, key=lambda r: (r.runs(), r.positions))
    return best.runs(), best


def min_jump(c: Store, p: Path) -> int:
    """
    Fewest store fragments whose chunks reconstruct a file.

    Args:
        c: Lossless store over the file graph's chunks
        p: File

    Returns:
        MinJ(c, p): minimal run count over inclusion-minimal recovery sets
    """
    runs, _ = jump_witness(c, p.vertices)
    return runs


@dataclass(frozen=True)
class PathMetrics:
    """Per-file minima with their witness recovery sets."""

    min_stretch: Fraction
    min_jump: int
    witness: RecoverySet
    jump_witness: RecoverySet


class MetricReport:
    """Per-file metrics plus the store-level stretch and jump metrics."""

    def __init__(self, per_path: dict[Path, PathMetrics], t: int):
        """
        Initialize a metric report.

        Args:
            per_path: Metrics for every file, in enumeration order
            t: Maximum file length of the file model
        """
        self.per_path = dict(per_path)
        self.t = t
        if self.per_path:
            self.stretch_metric = max(m.min_stretch for m in self.per_path.values())
            self.jump_metric = max(m.min_jump for m in self.per_path.values())
        else:
            self.stretch_metric = Fraction(0)
            self.jump_metric = 0

    @property
    def worst_stretch_path(self) -> Optional[Path]:
        return next(
            (p for p, m in self.per_path.items() if m.min_stretch == self.stretch_metric),
            None,
        )

    @property
    def worst_jump_path(self) -> Optional[Path]:
        return next(
            (p for p, m in self.per_path.items() if m.min_jump == self.jump_metric),
            None,
        )

    def to_dict(self) -> dict:
        return {
            't': self.t,
            'stretch_metric': format_fraction(self.stretch_metric),
            'jump_metric': self.jump_metric,
            'per_path': [
                {
                    'path': list(p.vertices),
                    'min_stretch': format_fraction(m.min_stretch),
                    'min_jump': m.min_jump,
                    'witness': list(m.witness.positions),
                    'jump_witness': list(m.jump_witness.positions),
                }
                for p, m in self.per_path.items()
            ],
        }

    def to_frame(self) -> pd.DataFrame:
        """Per-file rows for CSV export."""
        return pd.DataFrame([
            {
                'path': str(p),
                'length': p.length,
                'min_stretch': format_fraction(m.min_stretch),
                'min_jump': m.min_jump,
                'witness': str(m.witness),
            }
            for p, m in self.per_path.items()
        ])

    def __repr__(self) -> str:
        return (
            f"MetricReport(t={self.t}, stretch_metric={self.stretch_metric}, "
            f"jump_metric={self.jump_metric}, files={len(self.per_path)})"
        )


def _check_sizes(c: Store, g: AnyGraph) -> FileGraph:
    graph = g.as_file_graph()
    if c.n != graph.n:
        raise StoreError(f"chunk-count mismatch: store has {c.n} chunks, graph has {graph.n}")
    return graph


def evaluate(c: Store, g: AnyGraph, t: int, config: Optional[LayoutConfig] = None) -> MetricReport:
    """
    Evaluate a store against the file model P(G, <= t).

    Args:
        c: Coded or uncoded store
        g: File graph (any graph type)
        t: Maximum file length
        config: Optional configuration for recovery-set caps

    Returns:
        MetricReport with per-file minima and the two maxima

    Raises:
        StoreError: If the store and graph disagree on the chunk count
    """
    graph = _check_sizes(c, g)
    per_path = {}
    for p in enumerate_paths(graph, t):
        window, witness = stretch_window(c, p.vertices)
        runs, run_witness = jump_witness(c, p.vertices, config)
        per_path[p] = PathMetrics(Fraction(window, p.length), runs, witness, run_witness)
    return MetricReport(per_path, t)


def stretch_metric(c: Store, g: AnyGraph, t: int) -> Fraction:
    """Store-level stretch metric only."""
    graph = _check_sizes(c, g)
    return max(min_stretch(c, p) for p in enumerate_paths(graph, t))


def jump_metric(c: Store, g: AnyGraph, t: int) -> int:
    """Store-level jump metric only."""
    graph = _check_sizes(c, g)
    return max(min_jump(c, p) for p in enumerate_paths(graph, t))


def max_edge_displacement(store: UncodedStore, g: AnyGraph) -> int:
    """
    Largest |pos(u) - pos(v)| over the graph's edges.

    Raises:
        StoreError: If the store is not a permutation of the graph's vertices
    """
    graph = _check_sizes(store, g)
    if not store.is_permutation():
        raise StoreError("edge displacement needs a permutation store")
    pos = {chunk: i for i, chunk in enumerate(store.sequence, start=1)}
    return max((abs(pos[u] - pos[v]) for u, v in graph.edge_list()), default=0)


def stretch_from_displacement(displacement: int) -> Fraction:
    """Window-convention stretch of the worst edge at a given displacement."""
    return Fraction(displacement + 1, 2)
