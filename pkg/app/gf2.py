"""GF(2) linear algebra on numpy uint8 matrices and int bitsets."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np


def to_gf2(matrix) -> np.ndarray:
    return np.array(matrix, dtype=np.uint8) % 2


@dataclass(frozen=True)
class RowReduceResult:
    matrix: np.ndarray
    rank: int
    pivots: tuple[int, ...]


def gf2_row_reduce(matrix) -> RowReduceResult:
    """Reduced row echelon form over GF(2)."""
    mat = to_gf2(matrix).copy()
    if mat.ndim != 2:
        raise ValueError("expected a 2-D matrix")
    m, n = mat.shape
    pivots = []
    row = 0
    for col in range(n):
        if row == m:
            break
        candidates = np.nonzero(mat[row:, col])[0]
        if candidates.size == 0:
            continue
        pivot = row + int(candidates[0])
        if pivot != row:
            mat[[row, pivot]] = mat[[pivot, row]]
        hits = np.nonzero(mat[:, col])[0]
        for r in hits:
            if r != row:
                mat[r, :] ^= mat[row, :]
        pivots.append(col)
        row += 1
    return RowReduceResult(matrix=mat, rank=len(pivots), pivots=tuple(pivots))


def gf2_rank(matrix) -> int:
    """Compute rank over GF(2) using row reduction."""
    mat = to_gf2(matrix)
    if mat.size == 0:
        return 0
    return gf2_row_reduce(mat).rank


def gf2_nullspace_basis(matrix) -> np.ndarray:
    """Return a basis (as rows) of {x : matrix @ x = 0} over GF(2)."""
    reduced = gf2_row_reduce(matrix)
    mat = reduced.matrix
    n = mat.shape[1]
    pivots = set(reduced.pivots)
    basis = []
    for free in (c for c in range(n) if c not in pivots):
        vec = np.zeros(n, dtype=np.uint8)
        vec[free] = 1
        for row, col in enumerate(reduced.pivots):
            if mat[row, free] == 1:
                vec[col] = 1
        basis.append(vec)
    if not basis:
        return np.zeros((0, n), dtype=np.uint8)
    return np.vstack(basis)


def gf2_solve(matrix, vector) -> Optional[np.ndarray]:
    """
    Find one x with matrix @ x = vector over GF(2).

    Returns:
        A particular solution, or None when the system is inconsistent
    """
    mat = to_gf2(matrix)
    vec = to_gf2(vector).reshape(-1, 1)
    reduced = gf2_row_reduce(np.concatenate([mat, vec], axis=1))
    n = mat.shape[1]
    if n in reduced.pivots:
        return None
    x = np.zeros(n, dtype=np.uint8)
    for row, col in enumerate(reduced.pivots):
        x[col] = reduced.matrix[row, n]
    return x


def gf2_inverse(matrix) -> np.ndarray:
    """
    Invert a square GF(2) matrix.

    Raises:
        ValueError: If the matrix is singular
    """
    mat = to_gf2(matrix)
    size = mat.shape[0]
    if mat.shape != (size, size):
        raise ValueError("only square matrices can be inverted")
    reduced = gf2_row_reduce(np.concatenate([mat, np.eye(size, dtype=np.uint8)], axis=1))
    if reduced.pivots[:size] != tuple(range(size)):
        raise ValueError("matrix is singular over GF(2)")
    return reduced.matrix[:, size:]


def gf2_matmul(a, b) -> np.ndarray:
    return (to_gf2(a).astype(np.int64) @ to_gf2(b).astype(np.int64) % 2).astype(np.uint8)


def gf2_is_consistent(matrix, vector) -> bool:
    """True iff vector lies in the column span of matrix."""
    return gf2_solve(matrix, vector) is not None


# Int-bitset helpers: bit i of an int stands for coordinate i.

def vector_to_int(vector: Iterable[int]) -> int:
    value = 0
    for i, bit in enumerate(vector):
        if int(bit) & 1:
            value |= 1 << i
    return value


def int_to_vector(value: int, length: int) -> np.ndarray:
    return np.array([(value >> i) & 1 for i in range(length)], dtype=np.uint8)


def support(value: int) -> list[int]:
    """Indices of set bits, ascending."""
    bits = []
    i = 0
    while value:
        if value & 1:
            bits.append(i)
        value >>= 1
        i += 1
    return bits


class XorBasis:
    """Incremental GF(2) span of int bitsets, reduced on leading bits."""

    def __init__(self):
        self._rows: dict[int, int] = {}

    def __len__(self) -> int:
        return len(self._rows)

    def reduce(self, value: int) -> int:
        while value:
            top = value.bit_length() - 1
            row = self._rows.get(top)
            if row is None:
                return value
            value ^= row
        return 0

    def add(self, value: int) -> bool:
        """Insert a vector; returns True if it increased the rank."""
        value = self.reduce(value)
        if not value:
            return False
        self._rows[value.bit_length() - 1] = value
        return True

    def contains(self, value: int) -> bool:
        return self.reduce(value) == 0
