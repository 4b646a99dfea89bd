"""Tests for GF(2) linear algebra."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from app.gf2 import (
    XorBasis,
    gf2_inverse,
    gf2_is_consistent,
    gf2_matmul,
    gf2_nullspace_basis,
    gf2_rank,
    gf2_row_reduce,
    gf2_solve,
    int_to_vector,
    support,
    to_gf2,
    vector_to_int,
)


bit_matrices = st.integers(min_value=1, max_value=6).flatmap(
    lambda rows: st.integers(min_value=1, max_value=7).flatmap(
        lambda cols: st.lists(
            st.lists(st.integers(min_value=0, max_value=1), min_size=cols, max_size=cols),
            min_size=rows,
            max_size=rows,
        )
    )
)


class TestRowReduction:
    """Tests for rank and row reduction."""

    def test_rank_identity(self):
        """Test the rank of an identity matrix."""
        assert gf2_rank(np.eye(4, dtype=np.uint8)) == 4

    def test_rank_dependent_rows(self):
        """Test that x + x = 0 over GF(2)."""
        assert gf2_rank([[1, 1, 0], [0, 1, 1], [1, 0, 1]]) == 2

    def test_rank_empty(self):
        """Test the rank of an empty matrix."""
        assert gf2_rank(np.zeros((0, 3), dtype=np.uint8)) == 0

    def test_reduce_requires_2d(self):
        """Test that a vector is rejected."""
        with pytest.raises(ValueError):
            gf2_row_reduce([1, 0, 1])

    def test_pivots(self):
        """Test pivot columns."""
        result = gf2_row_reduce([[0, 1, 1], [0, 0, 1]])
        assert result.pivots == (1, 2)

    def test_to_gf2_reduces_mod_2(self):
        """Test conversion reduces entries mod 2."""
        assert to_gf2([2, 3, 5]).tolist() == [0, 1, 1]


class TestNullspaceAndSolve:
    """Tests for null space, solving and inversion."""

    def test_nullspace(self):
        """Test the null space of a parity check."""
        basis = gf2_nullspace_basis([[1, 1, 1]])
        assert basis.shape == (2, 3)
        assert not gf2_matmul([[1, 1, 1]], basis.T).any()

    def test_nullspace_full_rank(self):
        """Test a full-rank square matrix has a trivial null space."""
        assert gf2_nullspace_basis(np.eye(3, dtype=np.uint8)).shape == (0, 3)

    def test_solve(self):
        """Test a consistent system."""
        A = [[1, 1, 0], [0, 1, 1]]
        x = gf2_solve(A, [1, 0])
        assert gf2_matmul(A, x.reshape(-1, 1)).ravel().tolist() == [1, 0]

    def test_solve_inconsistent(self):
        """Test an inconsistent system returns None."""
        assert gf2_solve([[1, 1], [1, 1]], [1, 0]) is None
        assert not gf2_is_consistent([[1, 1], [1, 1]], [1, 0])

    def test_inverse(self):
        """Test inversion."""
        A = to_gf2([[1, 1, 0], [0, 1, 1], [0, 0, 1]])
        assert (gf2_matmul(A, gf2_inverse(A)) == np.eye(3, dtype=np.uint8)).all()

    def test_inverse_singular(self):
        """Test that a singular matrix raises ValueError."""
        with pytest.raises(ValueError):
            gf2_inverse([[1, 1], [1, 1]])

    def test_inverse_non_square(self):
        """Test that a non-square matrix raises ValueError."""
        with pytest.raises(ValueError):
            gf2_inverse([[1, 0, 1]])

    @given(bit_matrices)
    @settings(max_examples=60, deadline=None)
    def test_rank_nullity(self, rows):
        """Test rank plus nullity equals the column count."""
        A = to_gf2(rows)
        basis = gf2_nullspace_basis(A)
        assert gf2_rank(A) + basis.shape[0] == A.shape[1]
        if basis.shape[0]:
            assert not gf2_matmul(A, basis.T).any()


class TestBitsets:
    """Tests for int bitset helpers."""

    def test_vector_int_conversion(self):
        """Test bit i stands for coordinate i."""
        assert vector_to_int([1, 0, 1]) == 5
        assert int_to_vector(5, 4).tolist() == [1, 0, 1, 0]

    def test_support(self):
        """Test support lists 0-based set bits."""
        assert support(0b10110) == [1, 2, 4]
        assert support(0) == []

    def test_xor_basis(self):
        """Test incremental span membership."""
        basis = XorBasis()
        assert basis.add(0b011)
        assert basis.add(0b110)
        assert not basis.add(0b101)
        assert basis.contains(0b101)
        assert not basis.contains(0b100)
        assert len(basis) == 2
