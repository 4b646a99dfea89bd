"""Chunk store models: uncoded sequences, GF(2)-coded stores and recovery sets."""

from dataclasses import dataclass
from typing import Iterable, Optional, Union

import numpy as np

from app.exceptions import StoreError
from app.gf2 import gf2_rank, int_to_vector, support, to_gf2, vector_to_int

STORE_FORMAT = "dedup-layout/store-v1"


class UncodedStore:
    """A linear arrangement of chunk ids, repeats allowed."""

    def __init__(self, sequence: Iterable[int], n: Optional[int] = None):
        """
        Initialize an uncoded store.

        Args:
            sequence: Chunk ids in store order
            n: Number of user chunks (defaults to the largest id)

        Raises:
            StoreError: If the store is empty, holds ids outside [1,n] or
                misses a chunk
        """
        self.sequence = tuple(int(c) for c in sequence)
        if not self.sequence:
            raise StoreError("a store needs at least one chunk")
        self.n = max(self.sequence) if n is None else int(n)
        bad = [c for c in self.sequence if not 1 <= c <= self.n]
        if bad:
            raise StoreError(f"chunk ids {sorted(set(bad))} outside [1,{self.n}]")
        missing = set(range(1, self.n + 1)) - set(self.sequence)
        if missing:
            raise StoreError(f"lossy store: chunks {sorted(missing)} never stored")
        self._positions: dict[int, list[int]] = {}
        for pos, chunk in enumerate(self.sequence, start=1):
            self._positions.setdefault(chunk, []).append(pos)

    @property
    def m(self) -> int:
        """Store length."""
        return len(self.sequence)

    def positions(self, chunk: int) -> tuple[int, ...]:
        """1-based positions holding a copy of chunk."""
        return tuple(self._positions.get(chunk, ()))

    def is_permutation(self) -> bool:
        return self.m == self.n

    def position_of(self, chunk: int) -> int:
        """Position of a chunk in a permutation store."""
        if not self.is_permutation():
            raise StoreError("position_of needs a permutation store")
        return self._positions[chunk][0]

    def to_dict(self) -> dict:
        return {
            'format': STORE_FORMAT,
            'kind': 'uncoded',
            'n': self.n,
            'sequence': list(self.sequence),
        }

    @classmethod
    def from_dict(cls, data: dict) -> 'UncodedStore':
        try:
            return cls(data['sequence'], data.get('n'))
        except (KeyError, TypeError, ValueError) as e:
            raise StoreError(f"Malformed uncoded store payload: {e}")

    def __len__(self) -> int:
        return self.m

    def __iter__(self):
        return iter(self.sequence)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, UncodedStore)
            and (self.n, self.sequence) == (other.n, other.sequence)
        )

    def __hash__(self) -> int:
        return hash((self.n, self.sequence))

    def __str__(self) -> str:
        return "(" + ",".join(str(c) for c in self.sequence) + ")"

    def __repr__(self) -> str:
        return f"UncodedStore(sequence={list(self.sequence)}, n={self.n})"


class CodedStore:
    """A store s = xG given by an n x m generator matrix over GF(2)."""

    def __init__(self, gen):
        """
        Initialize a coded store.

        Args:
            gen: n x m bit matrix; column j lists the chunks xored into s_j

        Raises:
            StoreError: If the matrix is not 2-D or its rank is below n
        """
        matrix = to_gf2(gen)
        if matrix.ndim != 2 or matrix.shape[0] == 0 or matrix.shape[1] == 0:
            raise StoreError(f"generator must be a non-empty n x m matrix, got shape {matrix.shape}")
        rank = gf2_rank(matrix)
        if rank != matrix.shape[0]:
            raise StoreError(
                f"lossy store: generator rank {rank} below chunk count {matrix.shape[0]}"
            )
        matrix.setflags(write=False)
        self.gen = matrix
        self._columns = tuple(vector_to_int(matrix[:, j]) for j in range(matrix.shape[1]))

    @classmethod
    def from_columns(cls, n: int, columns: Iterable[Iterable[int]]) -> 'CodedStore':
        """Build a store from the chunk ids combined in each column."""
        cols = [list(c) for c in columns]
        gen = np.zeros((n, len(cols)), dtype=np.uint8)
        for j, chunks in enumerate(cols):
            for chunk in chunks:
                if not 1 <= chunk <= n:
                    raise StoreError(f"chunk id {chunk} outside [1,{n}]")
                gen[chunk - 1, j] ^= 1
        return cls(gen)

    @property
    def n(self) -> int:
        return self.gen.shape[0]

    @property
    def m(self) -> int:
        return self.gen.shape[1]

    @property
    def columns(self) -> tuple[int, ...]:
        """Columns as int bitsets; bit i stands for chunk i+1."""
        return self._columns

    def column(self, j: int) -> int:
        return self._columns[j - 1]

    def column_support(self, j: int) -> tuple[int, ...]:
        """Chunk ids combined in column j (1-based)."""
        return tuple(i + 1 for i in support(self._columns[j - 1]))

    def unit_chunk(self, j: int) -> Optional[int]:
        """The chunk stored plainly at column j, or None for coded columns."""
        bits = self._columns[j - 1]
        if bits and bits & (bits - 1) == 0:
            return bits.bit_length()
        return None

    def is_unit_column(self, j: int) -> bool:
        return self.unit_chunk(j) is not None

    def non_unit_columns(self) -> list[int]:
        return [j for j in range(1, self.m + 1) if not self.is_unit_column(j)]

    def is_uncoded(self) -> bool:
        return not self.non_unit_columns()

    def as_uncoded(self) -> UncodedStore:
        """
        Reinterpret an all-unit-column store as an uncoded store.

        Raises:
            StoreError: If some column is coded or zero
        """
        coded = self.non_unit_columns()
        if coded:
            raise StoreError(f"columns {coded} are not plain chunk copies")
        return UncodedStore([self.unit_chunk(j) for j in range(1, self.m + 1)], self.n)

    def to_dict(self) -> dict:
        return {
            'format': STORE_FORMAT,
            'kind': 'coded',
            'n': self.n,
            'columns': [
                ''.join(str(int(b)) for b in self.gen[:, j])
                for j in range(self.m)
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> 'CodedStore':
        try:
            n = int(data['n'])
            columns = data['columns']
            if any(len(col) != n or set(col) - {'0', '1'} for col in columns):
                raise ValueError(f"every column must be a bitstring of length {n}")
            gen = np.array([[int(ch) for ch in col] for col in columns], dtype=np.uint8).T
            return cls(gen.reshape(n, len(columns)))
        except (KeyError, TypeError, ValueError) as e:
            raise StoreError(f"Malformed coded store payload: {e}")

    def __eq__(self, other) -> bool:
        return isinstance(other, CodedStore) and self._columns == other._columns and self.n == other.n

    def __hash__(self) -> int:
        return hash((self.n, self._columns))

    def __str__(self) -> str:
        parts = []
        for j in range(1, self.m + 1):
            parts.append("+".join(f"x{c}" for c in self.column_support(j)) or "0")
        return "(" + ",".join(parts) + ")"

    def __repr__(self) -> str:
        return f"CodedStore(n={self.n}, m={self.m}, columns={str(self)})"


Store = Union[UncodedStore, CodedStore]


def as_coded(u: Store) -> CodedStore:
    """Uncoded store as a generator whose columns are unit vectors."""
    if isinstance(u, CodedStore):
        return u
    gen = np.zeros((u.n, u.m), dtype=np.uint8)
    for j, chunk in enumerate(u.sequence):
        gen[chunk - 1, j] = 1
    return CodedStore(gen)


def store_from_dict(data: dict) -> Store:
    kind = data.get('kind', 'uncoded')
    if kind == 'uncoded':
        return UncodedStore.from_dict(data)
    if kind == 'coded':
        return CodedStore.from_dict(data)
    raise StoreError(f"Unknown store kind: {kind}")


def extend_store(store: Store, chunk: int) -> Store:
    """Append one more plain copy of chunk."""
    if isinstance(store, UncodedStore):
        return UncodedStore(store.sequence + (chunk,), store.n)
    unit = int_to_vector(1 << (chunk - 1), store.n).reshape(-1, 1)
    return CodedStore(np.concatenate([store.gen, unit], axis=1))


@dataclass(frozen=True)
class RecoverySet:
    """A sorted, non-empty set of 1-based store positions."""

    positions: tuple[int, ...]

    def __post_init__(self):
        ordered = tuple(sorted(set(int(p) for p in self.positions)))
        if not ordered:
            raise StoreError("a recovery set needs at least one position")
        if ordered[0] < 1:
            raise StoreError("store positions start at 1")
        object.__setattr__(self, 'positions', ordered)

    @property
    def span(self) -> int:
        """Window length max - min + 1."""
        return self.positions[-1] - self.positions[0] + 1

    def runs(self) -> int:
        """Number of maximal runs of consecutive positions."""
        return 1 + sum(1 for a, b in zip(self.positions, self.positions[1:]) if b != a + 1)

    def as_bits(self) -> int:
        return sum(1 << (p - 1) for p in self.positions)

    def __iter__(self):
        return iter(self.positions)

    def __len__(self) -> int:
        return len(self.positions)

    def __str__(self) -> str:
        return "{" + ",".join(str(p) for p in self.positions) + "}"
