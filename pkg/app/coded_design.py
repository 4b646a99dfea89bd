"""Coded chunk stores with one redundant chunk, and their reductions to uncoded stores.

A code is carried either as a generator (CodedStore) or as a parity row H
plus decoding rows K with G K^T = I and G H^T = 0. Bit rows are handled as
integers whose bit j-1 stands for store position j.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import ceil
from typing import Iterable, Optional, Sequence

import networkx as nx
import numpy as np

from app.exceptions import ConsistencyError, ReductionError, StoreError, ValidationError
from app.gf2 import (
    XorBasis,
    gf2_inverse,
    gf2_nullspace_basis,
    gf2_rank,
    gf2_solve,
    int_to_vector,
    support,
    to_gf2,
    vector_to_int,
)
from app.graph_model import AnyGraph, enumerate_paths
from app.logger import Logger
from app.metrics import evaluate, jump_metric, minimal_recovery_sets, stretch_window
from app.stores import CodedStore, Store, UncodedStore, as_coded

CODE_FORMAT = "dedup-layout/code-v1"


def _bitrow(bits: int, m: int) -> str:
    return "".join('1' if bits >> j & 1 else '0' for j in range(m))


def _parse_bitrow(text: str) -> list[int]:
    if not text or set(text) - {'0', '1'}:
        raise ValidationError(f"bit rows must be non-empty 0/1 strings, got {text!r}")
    return [int(ch) for ch in text]


def _ones(bits: int) -> list[int]:
    """1-based positions of the set bits."""
    return [i + 1 for i in support(bits)]


def _popcount(bits: int) -> int:
    return bin(bits).count('1')


def _lowest(bits: int) -> int:
    return (bits & -bits).bit_length()


def _highest(bits: int) -> int:
    return bits.bit_length()


class HKCode:
    """A linear code written as parity rows H over decoding rows K."""

    def __init__(self, H, K):
        """
        Initialize a code.

        Args:
            H: (m-n) x m parity-check rows
            K: n x m decoding rows; row i recovers chunk i+1

        Raises:
            ReductionError: If the shapes disagree or [H; K] is not full rank
        """
        h = to_gf2(H)
        k = to_gf2(K)
        if h.ndim == 1:
            h = h.reshape(1, -1)
        if k.ndim != 2 or h.ndim != 2 or k.shape[0] == 0:
            raise ReductionError("H and K must be non-empty bit matrices")
        if h.shape[1] != k.shape[1]:
            raise ReductionError(f"H has {h.shape[1]} columns, K has {k.shape[1]}")
        if h.shape[0] + k.shape[0] != k.shape[1]:
            raise ReductionError(
                f"expected {k.shape[1] - k.shape[0]} parity rows for a {k.shape[0]} x {k.shape[1]} K, got {h.shape[0]}"
            )
        stacked = np.vstack([h, k])
        if gf2_rank(stacked) != stacked.shape[0]:
            raise ReductionError("[H; K] is not full rank")
        h.setflags(write=False)
        k.setflags(write=False)
        self.H = h
        self.K = k

    @property
    def n(self) -> int:
        return self.K.shape[0]

    @property
    def m(self) -> int:
        return self.K.shape[1]

    def h_rows(self) -> list[int]:
        return [vector_to_int(row) for row in self.H]

    def k_rows(self) -> list[int]:
        return [vector_to_int(row) for row in self.K]

    @classmethod
    def from_rows(cls, n: int, m: int, h_rows: Sequence[int], k_rows: Sequence[int]) -> 'HKCode':
        H = np.array([int_to_vector(r, m) for r in h_rows], dtype=np.uint8).reshape(len(h_rows), m)
        K = np.array([int_to_vector(r, m) for r in k_rows], dtype=np.uint8).reshape(n, m)
        return cls(H, K)

    @classmethod
    def from_store(cls, c: Store) -> 'HKCode':
        """Parity rows spanning the generator's null space, decoding rows by solving G k = e_i."""
        store = as_coded(c)
        G = store.gen
        H = gf2_nullspace_basis(G)
        K = []
        for i in range(store.n):
            unit = np.zeros(store.n, dtype=np.uint8)
            unit[i] = 1
            row = gf2_solve(G, unit)
            if row is None:
                raise ReductionError(f"chunk {i + 1} cannot be decoded from the store")
            K.append(row)
        return cls(H, np.vstack(K))

    def generator(self) -> np.ndarray:
        """The n x m generator G with G [H; K]^T = [0 | I]."""
        stacked = np.vstack([self.H, self.K])
        target = np.concatenate(
            [np.zeros((self.n, self.H.shape[0]), dtype=np.uint8), np.eye(self.n, dtype=np.uint8)],
            axis=1,
        )
        inverse = gf2_inverse(stacked.T)
        return (target.astype(np.int64) @ inverse.astype(np.int64) % 2).astype(np.uint8)

    def to_store(self) -> CodedStore:
        return CodedStore(self.generator())

    def coset(self, chunk: int) -> list[int]:
        """K(i) + span{H} as bit rows."""
        k = self.k_rows()[chunk - 1]
        hs = self.h_rows()
        found = []
        for mask in product((0, 1), repeat=len(hs)):
            row = k
            for bit, h in zip(mask, hs):
                if bit:
                    row ^= h
            found.append(row)
        return found

    def to_dict(self) -> dict:
        return {
            'format': CODE_FORMAT,
            'H': [_bitrow(r, self.m) for r in self.h_rows()],
            'K': [_bitrow(r, self.m) for r in self.k_rows()],
        }

    @classmethod
    def from_dict(cls, data: dict) -> 'HKCode':
        try:
            H = [_parse_bitrow(r) for r in data['H']]
            K = [_parse_bitrow(r) for r in data['K']]
        except (KeyError, TypeError) as e:
            raise ValidationError(f"code payload needs 'H' and 'K' bit rows: {e}")
        if not K:
            raise ValidationError("code payload needs at least one K row")
        m = len(K[0])
        return cls(np.array(H, dtype=np.uint8).reshape(len(H), m), np.array(K, dtype=np.uint8))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, HKCode)
            and np.array_equal(self.H, other.H)
            and np.array_equal(self.K, other.K)
        )

    def __repr__(self) -> str:
        return f"HKCode(H={self.to_dict()['H']}, K={self.to_dict()['K']})"


def _coset_rows(k: int, h: int) -> tuple[int, int]:
    return (k, k ^ h)


def coset_min(k: int, h: int) -> int:
    """Min(K(i)): the largest leftmost position over the coset."""
    return max(_lowest(d) for d in _coset_rows(k, h) if d)


def coset_max(k: int, h: int) -> int:
    """Max(K(i)): the smallest rightmost position over the coset."""
    return min(_highest(d) for d in _coset_rows(k, h) if d)


def _in_span(value: int, rows: Iterable[int]) -> bool:
    basis = XorBasis()
    for row in rows:
        basis.add(row)
    return basis.contains(value)


def reduce_hk_canonical(code: HKCode) -> HKCode:
    """
    Reduce a one-redundancy code to xor-chain form without hurting any chunk.

    Step one repeatedly takes the first decoding row that is not a unit
    vector and whose coset satisfies Min <= Max, and replaces it by the unit
    vector at Min when that keeps [H; K] full rank, otherwise by row + that
    unit vector. Rows left over are prefixes or suffixes of the parity row's
    support; suffixes are flipped by adding H. Step two isolates every unit
    row e_j sitting strictly inside the parity row's support by clearing
    column j from H and every other row.

    Args:
        code: Code with m = n + 1

    Returns:
        Canonical code; its store interleaves plain chunks with one xor chain

    Raises:
        ReductionError: If m != n + 1 or an intermediate form breaks a
            property the reduction relies on
    """
    if code.m != code.n + 1:
        raise ReductionError(f"reduction needs exactly one parity row, got m = {code.m}, n = {code.n}")
    h = code.h_rows()[0]
    k = code.k_rows()
    logger = Logger()

    budget = 4 * code.n * code.m + 8
    while True:
        pick = next(
            (
                i for i, row in enumerate(k)
                if _popcount(row) > 1 and coset_min(row, h) <= coset_max(row, h)
            ),
            None,
        )
        if pick is None:
            break
        budget -= 1
        if budget < 0:
            raise ReductionError("step one did not terminate")
        low = coset_min(k[pick], h)
        unit = 1 << (low - 1)
        others = [h] + k[:pick] + k[pick + 1:]
        if not _in_span(unit, others):
            k[pick] = unit
        else:
            replacement = k[pick] ^ unit
            if coset_min(replacement, h) <= low:
                raise ReductionError(f"row {pick + 1}: Min did not increase past {low}")
            k[pick] = replacement

    for i, row in enumerate(k):
        if _popcount(row) <= 1:
            continue
        ones = _ones(h)
        rows = _ones(row)
        width = len(rows)
        if rows == ones[:width]:
            continue
        if rows == ones[-width:]:
            k[i] = row ^ h
            continue
        raise ReductionError(f"row {i + 1} is neither a prefix nor a suffix of the parity row")

    changed = True
    while changed:
        changed = False
        ones = _ones(h)
        for i, row in enumerate(k):
            if _popcount(row) != 1:
                continue
            j = _lowest(row)
            if not ones or j in (ones[0], ones[-1]):
                continue
            bit = 1 << (j - 1)
            if h & bit or any(k[o] & bit for o in range(len(k)) if o != i):
                h &= ~bit
                k = [r if o == i else r & ~bit for o, r in enumerate(k)]
                changed = True
                break

    reduced = HKCode.from_rows(code.n, code.m, [h], k)
    store = reduced.to_store()
    wide = [j for j in range(1, store.m + 1) if len(store.column_support(j)) > 2]
    if wide:
        raise ReductionError(f"canonical columns {wide} combine more than two chunks")
    logger.log_info(f"Reduced code to canonical form: {store}")
    return reduced


@dataclass(frozen=True)
class ChunkDomination:
    """Interval comparison of one chunk's recovery cosets."""

    chunk: int
    holds: bool
    before: tuple[tuple[int, int], ...]
    after: tuple[tuple[int, int], ...]

    def to_dict(self) -> dict:
        return {
            'chunk': self.chunk,
            'holds': self.holds,
            'before': [list(iv) for iv in self.before],
            'after': [list(iv) for iv in self.after],
        }


def _interval(bits: int) -> tuple[int, int]:
    return (_lowest(bits), _highest(bits))


def domination_audit(before: HKCode, after: HKCode) -> list[ChunkDomination]:
    """
    For each chunk, check that every recovery set of the old code has a new
    recovery set whose interval sits inside it.
    """
    if before.n != after.n or before.m != after.m:
        raise ReductionError("codes of different shapes cannot be compared")
    audit = []
    for chunk in range(1, before.n + 1):
        old = tuple(sorted({_interval(d) for d in before.coset(chunk) if d}))
        new = tuple(sorted({_interval(d) for d in after.coset(chunk) if d}))
        holds = all(
            any(lo_b <= lo_a and hi_a <= hi_b for lo_a, hi_a in new)
            for lo_b, hi_b in old
        )
        audit.append(ChunkDomination(chunk, holds, old, new))
    return audit


@dataclass(frozen=True)
class XorChainStore:
    """Plain chunks interleaved with a chain y_1..y_{N+1} over chunks b_1..b_N."""

    a_seq: tuple[int, ...]
    b_seq: tuple[int, ...]
    interleave: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, 'a_seq', tuple(int(v) for v in self.a_seq))
        object.__setattr__(self, 'b_seq', tuple(int(v) for v in self.b_seq))
        object.__setattr__(self, 'interleave', tuple(int(v) for v in self.interleave))
        chunks = self.a_seq + self.b_seq
        if sorted(chunks) != list(range(1, self.n + 1)):
            raise StoreError(f"a and b sequences must partition 1..{self.n}, got {chunks}")
        if len(self.interleave) != len(self.b_seq) + 1:
            raise StoreError(
                f"a chain over {len(self.b_seq)} chunks needs {len(self.b_seq) + 1} positions"
            )
        if any(b <= a for a, b in zip(self.interleave, self.interleave[1:])):
            raise StoreError("chain positions must be strictly increasing")
        if not all(1 <= p <= self.n + 1 for p in self.interleave):
            raise StoreError(f"chain positions must lie in [1,{self.n + 1}]")

    @property
    def n(self) -> int:
        return len(self.a_seq) + len(self.b_seq)

    @property
    def chain_length(self) -> int:
        return len(self.b_seq)

    def chain_columns(self) -> list[int]:
        """y_1..y_{N+1} as chunk bitmasks."""
        b = [1 << (v - 1) for v in self.b_seq]
        if not b:
            return [0]
        return [b[0]] + [b[i - 1] ^ b[i] for i in range(1, len(b))] + [b[-1]]

    def store_sequence(self) -> list[list[int]]:
        """Column supports in store order."""
        chain = dict(zip(self.interleave, self.chain_columns()))
        plain = iter(self.a_seq)
        columns = []
        for pos in range(1, self.n + 2):
            if pos in chain:
                columns.append(_ones(chain[pos]))
            else:
                columns.append([next(plain)])
        return columns

    def to_store(self) -> CodedStore:
        return CodedStore.from_columns(self.n, self.store_sequence())

    def chain_identities_hold(self) -> bool:
        """Prefix and suffix xors of the chain both equal x_{b_i} for every i."""
        ys = self.chain_columns()
        for i, b in enumerate(self.b_seq, start=1):
            prefix = 0
            for y in ys[:i]:
                prefix ^= y
            suffix = 0
            for y in ys[i:]:
                suffix ^= y
            if prefix != 1 << (b - 1) or suffix != 1 << (b - 1):
                return False
        return True

    def to_dict(self) -> dict:
        return {
            'a_seq': list(self.a_seq),
            'b_seq': list(self.b_seq),
            'interleave': list(self.interleave),
        }


def build_xor_chain(a_seq: Sequence[int], b_seq: Sequence[int], interleave: Sequence[int]) -> CodedStore:
    """
    Generator of the interleaved xor-chain store.

    Raises:
        StoreError: If a_seq and b_seq overlap or interleave has the wrong length
    """
    return XorChainStore(tuple(a_seq), tuple(b_seq), tuple(interleave)).to_store()


def as_xor_chain(code) -> XorChainStore:
    """
    Read the chain structure off a canonical code or store.

    Raises:
        ReductionError: If the store is not an interleaved xor chain
    """
    if isinstance(code, HKCode):
        if code.m != code.n + 1:
            raise ReductionError("only one-redundancy codes carry a single chain")
        store = code.to_store()
    else:
        store = as_coded(code)
    if store.m != store.n + 1:
        raise ReductionError(f"expected {store.n + 1} columns, got {store.m}")
    parity = gf2_nullspace_basis(store.gen)
    if parity.shape[0] != 1:
        raise ReductionError("store does not carry exactly one parity relation")
    positions = _ones(vector_to_int(parity[0]))
    plain = [store.unit_chunk(j) for j in range(1, store.m + 1) if j not in positions]
    if any(chunk is None for chunk in plain):
        raise ReductionError("a column outside the chain is not a plain chunk")

    b_seq: list[int] = []
    columns = [store.column(p) for p in positions]
    if len(columns) > 1:
        current = columns[0]
        for col in columns[1:-1]:
            if _popcount(current) != 1:
                raise ReductionError("chain link does not isolate a single chunk")
            b_seq.append(_lowest(current))
            current = col ^ current
        if _popcount(current) != 1:
            raise ReductionError("chain link does not isolate a single chunk")
        b_seq.append(_lowest(current))
    chain = XorChainStore(tuple(plain), tuple(b_seq), tuple(positions))
    if chain.to_store() != store:
        raise ReductionError("store does not match the chain read from it")
    return chain


def _max_window(c: Store, g: AnyGraph, t: int) -> int:
    graph = g.as_file_graph()
    return max(stretch_window(c, p.vertices)[0] for p in enumerate_paths(graph, t))


def trim_chain(x: XorChainStore, width: int) -> XorChainStore:
    """
    Detach chain ends that can never serve a window of the given width.

    While y_2..y_{N+1} spans at least width positions, y_1 becomes a plain
    x_{b_1} and the chain restarts at y_2 = x_{b_2}; symmetrically at the
    far end.
    """
    a, b, pos = list(x.a_seq), list(x.b_seq), list(x.interleave)
    while len(b) >= 2:
        if pos[-1] - pos[1] >= width:
            a, b, pos = _with_plain(a, pos[0], b[0], pos), b[1:], pos[1:]
        elif pos[-2] - pos[0] >= width:
            a, b, pos = _with_plain(a, pos[-1], b[-1], pos), b[:-1], pos[:-1]
        else:
            break
    return XorChainStore(tuple(a), tuple(b), tuple(pos))


def _with_plain(a: list[int], at: int, chunk: int, chain_positions: list[int]) -> list[int]:
    """Insert chunk into the plain sequence so that it lands at store position at."""
    before = sum(1 for p in range(1, at) if p not in chain_positions)
    return a[:before] + [chunk] + a[before:]


def coded_to_uncoded_2approx(x: XorChainStore, g: Optional[AnyGraph] = None, t: int = 2) -> UncodedStore:
    """
    Permutation store within a factor two of an xor-chain store's stretch.

    When a graph is given, chain ends are first trimmed against the coded
    store's worst recovery window. Every y_i (i <= N) then becomes x_{b_i}
    and the last chain column is dropped.
    """
    if g is not None:
        x = trim_chain(x, _max_window(x.to_store(), g, t))
    replace = {p: b for p, b in zip(x.interleave, x.b_seq)}
    last = x.interleave[-1]
    plain = iter(x.a_seq)
    sequence = []
    for pos in range(1, x.n + 2):
        if pos == last:
            continue
        sequence.append(replace[pos] if pos in replace else next(plain))
    store = UncodedStore(sequence, x.n)
    Logger().log_info(f"Xor chain decoded to permutation store {store}")
    return store


def coded_to_uncoded_matching(c: Store, g: Optional[AnyGraph] = None, t: int = 2) -> UncodedStore:
    """
    Permutation store from the perfect matching of chunks to recovery positions.

    At m = n each chunk has a single minimal recovery set; chunk i may sit at
    any position of its set, and a perfect matching picks one position per
    chunk. With a graph, no file may get a worse stretch; a worse jump is
    logged as a discrepancy.

    Raises:
        StoreError: If m != n
        ConsistencyError: If recovery sets are not unique, no perfect
            matching exists, or a file gets a worse stretch
    """
    if c.m != c.n:
        raise StoreError(f"matching reduction needs m = n, got m = {c.m}, n = {c.n}")
    bipartite = nx.Graph()
    chunks = [('x', i) for i in range(1, c.n + 1)]
    bipartite.add_nodes_from(chunks, bipartite=0)
    bipartite.add_nodes_from((('s', j) for j in range(1, c.m + 1)), bipartite=1)
    for i in range(1, c.n + 1):
        sets = minimal_recovery_sets(c, [i])
        if len(sets) != 1:
            raise ConsistencyError(f"chunk {i} has {len(sets)} minimal recovery sets at m = n")
        bipartite.add_edges_from((('x', i), ('s', j)) for j in sets[0].positions)
    matching = nx.bipartite.hopcroft_karp_matching(bipartite, top_nodes=chunks)
    if any(node not in matching for node in chunks):
        raise ConsistencyError("reconstruction graph has no perfect matching")
    sequence = [0] * c.m
    for i in range(1, c.n + 1):
        sequence[matching[('x', i)][1] - 1] = i
    store = UncodedStore(sequence, c.n)

    if g is not None:
        coded = evaluate(c, g, t)
        plain = evaluate(store, g, t)
        logger = Logger()
        for p, metrics in coded.per_path.items():
            mine = plain.per_path[p]
            if mine.min_stretch > metrics.min_stretch:
                raise ConsistencyError(f"matching store is worse on file {p}")
            # matched positions lie inside the coded window but may split a run
            if mine.min_jump > metrics.min_jump:
                logger.log_discrepancy(f"matching store jump on file {p}", metrics.min_jump, mine.min_jump)
    return store


def remove_coded_chunk_jump(c: Store, g: AnyGraph, t: int) -> UncodedStore:
    """
    Drop the one coded column of a length n+1 store.

    If the plain columns miss a chunk, the coded column is replaced by that
    chunk and the duplicate copy whose removal keeps the jump metric lowest
    is dropped instead. Plain inputs simply lose one copy of their duplicate.

    Raises:
        StoreError: If m != n + 1 or more than one column is coded
    """
    store = as_coded(c)
    if store.m != store.n + 1:
        raise StoreError(f"expected one redundant column, got m = {store.m}, n = {store.n}")
    coded = store.non_unit_columns()
    if len(coded) > 1:
        raise StoreError(f"store has {len(coded)} coded columns, at most one allowed")
    sequence = [store.unit_chunk(j) for j in range(1, store.m + 1)]
    if coded:
        j = coded[0]
        missing = sorted(set(range(1, store.n + 1)) - {v for v in sequence if v is not None})
        if not missing:
            result = UncodedStore([v for v in sequence if v is not None], store.n)
            _log_jump_gap(store, result, g, t)
            return result
        sequence[j - 1] = missing[0]

    seen: dict[int, list[int]] = {}
    for pos, chunk in enumerate(sequence):
        seen.setdefault(chunk, []).append(pos)
    twice = next(chunk for chunk, spots in seen.items() if len(spots) > 1)
    options = []
    for drop in seen[twice]:
        trial = UncodedStore([v for pos, v in enumerate(sequence) if pos != drop], store.n)
        options.append((jump_metric(trial, g, t), drop, trial))
    _, _, result = min(options, key=lambda o: (o[0], o[1]))
    _log_jump_gap(store, result, g, t)
    return result


def _log_jump_gap(before: Store, after: UncodedStore, g: AnyGraph, t: int) -> None:
    was, now = jump_metric(before, g, t), jump_metric(after, g, t)
    logger = Logger()
    logger.log_metric("coded_column_removal_jump", f"n={after.n}", f"{was} -> {now}")
    if now > was + 2:
        logger.log_discrepancy("jump after coded column removal", f"<= {was + 2}", now)


def example1_stores(N: int) -> dict[str, Store]:
    _check_N(N)
    a, b = 8 * N + 1, 8 * N + 2
    n = 8 * N + 2

    def span(lo: int, hi: int) -> list[int]:
        return list(range(lo, hi + 1))

    coded = build_xor_chain(span(1, 8 * N), [a, b], [2 * N + 1, 4 * N + 2, 6 * N + 3])
    uncoded = UncodedStore(span(1, 3 * N) + [a] + span(3 * N + 1, 5 * N) + [b] + span(5 * N + 1, 8 * N), n)
    two_dup = UncodedStore(
        span(1, 2 * N) + [a, b] + span(2 * N + 1, 6 * N) + [a, b] + span(6 * N + 1, 8 * N), n
    )
    return {'example1_coded': coded, 'example1_uncoded': uncoded, 'example1_uncoded_2dup': two_dup}


def example2_chain(N: int) -> XorChainStore:
    _check_N(N)
    hubs = tuple(5 * N + i for i in range(1, N + 1))
    positions = tuple(2 * N + 2 * i - 1 for i in range(1, N + 2))
    return XorChainStore(tuple(range(1, 5 * N + 1)), hubs, positions)


def _check_N(N) -> None:
    if isinstance(N, bool) or not isinstance(N, int) or N < 1:
        raise ValidationError(f"N must be a positive integer, got {N!r}")


PAPER_STORES = (
    'example1_coded',
    'example1_uncoded',
    'example1_uncoded_2dup',
    'example2_coded',
    'example1j_coded',
)


def build_paper_store(which: str, N: int = 1) -> Store:
    """
    The documented example stores.

    Raises:
        ValidationError: If which is not a known store id
    """
    if which.startswith('example1_'):
        stores = example1_stores(N)
        if which in stores:
            return stores[which]
    if which == 'example2_coded':
        return example2_chain(N).to_store()
    if which == 'example1j_coded':
        return CodedStore.from_columns(8, [[1], [7], [2], [3], [7, 8], [4], [5], [8], [6]])
    raise ValidationError(f"Unknown example store: {which}. Available: {', '.join(PAPER_STORES)}")


def example1_uncoded_lower_bound(N: int) -> Fraction:
    """
    Strict lower bound on the stretch of any one-duplicate uncoded store.

    Both hubs have 6N + 1 neighbours and one of them is stored once; a
    single copy with d neighbours forces some neighbour at distance at
    least ceil(d / 2), so some two-chunk file has stretch above that over 2.
    """
    from app.graph_families import gen_example

    graph = gen_example('example1', N=N).as_file_graph()
    a, b = 8 * N + 1, 8 * N + 2
    degree = min(graph.degree(a), graph.degree(b))
    return Fraction(ceil(degree / 2), 2)


def example1_coding_gain(N: int) -> Fraction:
    """Best uncoded stretch over coded stretch with one redundant chunk."""
    return Fraction(3 * N + 2, 2) / Fraction(2 * N + 2, 2)


def random_full_rank_code(n: int, rng: np.random.Generator) -> HKCode:
    while True:
        stacked = rng.integers(0, 2, size=(n + 1, n + 1), dtype=np.uint8)
        if gf2_rank(stacked) == n + 1:
            return HKCode(stacked[:1], stacked[1:])


def random_xor_chain(n: int, rng: np.random.Generator, chain: Optional[int] = None) -> XorChainStore:
    if chain is None:
        chain = int(rng.integers(1, n + 1))
    order = [int(v) for v in rng.permutation(n) + 1]
    positions = sorted(int(p) + 1 for p in rng.choice(n + 1, size=chain + 1, replace=False))
    return XorChainStore(tuple(order[chain:]), tuple(order[:chain]), tuple(positions))


def random_full_rank_store(n: int, rng: np.random.Generator) -> CodedStore:
    while True:
        gen = rng.integers(0, 2, size=(n, n), dtype=np.uint8)
        if gf2_rank(gen) == n:
            return CodedStore(gen)


def random_one_coded_column_store(n: int, rng: np.random.Generator) -> CodedStore:
    """A permutation of the chunks plus one column xoring two or more of them."""
    if n < 2:
        raise StoreError("a coded column needs at least two chunks")
    columns = [[int(v)] for v in rng.permutation(n) + 1]
    size = int(rng.integers(2, min(n, 3) + 1))
    coded = sorted(int(v) + 1 for v in rng.choice(n, size=size, replace=False))
    columns.insert(int(rng.integers(0, n + 1)), coded)
    return CodedStore.from_columns(n, columns)


def random_zero_frag_coded_store(g: AnyGraph, rng: np.random.Generator, attempts: int = 8) -> CodedStore:
    """
    Code some columns of the Eulerian store as s_{i-1} xor s_i, keeping only
    the replacements after which every two-chunk file still fits a window
    of two.
    """
    from app.metrics import stretch_metric
    from app.zero_frag import zero_frag_t2

    graph = g.as_file_graph()
    base = zero_frag_t2(graph).store
    columns = [1 << (v - 1) for v in base.sequence]
    for _ in range(attempts):
        j = int(rng.integers(1, len(columns))) if len(columns) > 1 else 0
        if not j or _popcount(columns[j - 1]) != 1 or _popcount(columns[j]) != 1:
            continue
        trial = columns[:j] + [columns[j - 1] ^ columns[j]] + columns[j + 1:]
        try:
            store = CodedStore.from_columns(graph.n, [_ones(col) for col in trial])
        except StoreError:
            continue
        if stretch_metric(store, graph, 2) == 1:
            columns = trial
    return CodedStore.from_columns(graph.n, [_ones(col) for col in columns])
