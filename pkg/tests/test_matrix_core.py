import numpy as np
import pytest

from effhull.config import ToleranceConfig
from effhull.errors import (
    DimensionMismatchError,
    EmptyResultError,
    IndexOutOfRangeError,
    NonPositiveEntryError,
    NonSquareError,
    NotReciprocalError,
)
from effhull.models import MonomialTransform, PositiveVector, ReciprocalMatrix
from effhull.services.matrix_core import (
    block_matrix,
    consistency_gap,
    consistent_from_weights,
    diagonal_normalization,
    is_consistent,
    monomial_similarity,
    perturbed_positions,
    principal_submatrix,
    three_block_matrix,
    triangular_matrix,
    validate_reciprocal,
)


# ── validate_reciprocal ──────────────────────────────────────────────────────

def test_validate_accepts_small_noise_and_rewrites_lower_triangle():
    A = validate_reciprocal([[1.0, 2.0], [0.4999999, 1.0]], ToleranceConfig(rtol=1e-6))
    assert A.entries[1, 0] == 0.5


def test_validate_reports_lower_index_first():
    with pytest.raises(NotReciprocalError) as info:
        validate_reciprocal([[1.0, 2.0], [0.4, 1.0]])
    assert (info.value.i, info.value.j) == (2, 1)
    assert info.value.residual == pytest.approx(0.2)


@pytest.mark.parametrize("raw, error", [
    ([[1.0, 2.0, 3.0], [0.5, 1.0, 1.0]], NonSquareError),
    ([[1.0, -2.0], [-0.5, 1.0]], NonPositiveEntryError),
    ([[1.0, 0.0], [np.inf, 1.0]], NonPositiveEntryError),
    ([], NonSquareError),
])
def test_validate_rejects_malformed_input(raw, error):
    with pytest.raises(error):
        validate_reciprocal(raw)


def test_validate_rejects_diagonal_other_than_one():
    with pytest.raises(NotReciprocalError):
        validate_reciprocal([[2.0, 1.0], [1.0, 1.0]])


# ── consistency ──────────────────────────────────────────────────────────────

def test_consistent_from_weights(rng):
    w = PositiveVector(rng.uniform(0.1, 5.0, size=6))
    C = consistent_from_weights(w)
    assert is_consistent(C)
    assert consistency_gap(C) < 1e-12
    assert np.allclose(C.entries[:, 2] * w.entries[2], w.entries)


def test_three_block_is_not_consistent():
    A = three_block_matrix(5, 4.0, 3.0, 2.0)
    assert not is_consistent(A)
    # worst triple: a12·a24 / a14 = 4
    assert consistency_gap(A) == pytest.approx(3.0)


def test_consistent_with_exact_triple():
    assert is_consistent(three_block_matrix(3, 4.0, 8.0, 2.0))
    assert not is_consistent(three_block_matrix(4, 4.0, 8.0, 2.0))


# ── submatrices ──────────────────────────────────────────────────────────────

def test_principal_submatrix_retain_and_delete():
    A = three_block_matrix(5, 4.0, 3.0, 2.0)
    kept = principal_submatrix(A, [1, 3])
    assert kept.tolist() == [[1.0, 3.0], [pytest.approx(1 / 3), 1.0]]
    dropped = principal_submatrix(A, [4, 5], mode="delete")
    assert dropped.n == 3
    assert np.allclose(dropped.entries, A.entries[:3, :3])


def test_principal_submatrix_errors():
    A = ReciprocalMatrix.ones(3)
    with pytest.raises(EmptyResultError):
        principal_submatrix(A, [1, 2, 3], mode="delete")
    with pytest.raises(IndexOutOfRangeError):
        principal_submatrix(A, [0])
    with pytest.raises(IndexOutOfRangeError):
        principal_submatrix(A, [4])


# ── monomial similarity ──────────────────────────────────────────────────────

def test_similarity_matches_matrix_product(rng, make_reciprocal):
    A = make_reciprocal(5, rng)
    T = MonomialTransform((3, 0, 4, 1, 2), PositiveVector([0.5, 2.0, 3.0, 0.25, 1.5]))
    S = T.as_matrix()
    expected = S @ A.entries @ np.linalg.inv(S)
    assert np.allclose(monomial_similarity(A, T).entries, expected)


def test_similarity_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        monomial_similarity(ReciprocalMatrix.ones(3), MonomialTransform.identity(4))


def test_similarity_preserves_consistency(rng, disguise):
    C = consistent_from_weights(PositiveVector(rng.uniform(0.1, 3.0, size=5)))
    D, _ = disguise(C, rng)
    assert is_consistent(D)


@pytest.mark.parametrize("j", [1, 2, 4])
def test_diagonal_normalization_makes_row_and_column_ones(rng, make_reciprocal, j):
    A = make_reciprocal(4, rng)
    B = monomial_similarity(A, diagonal_normalization(A, j))
    assert np.allclose(B.entries[:, j - 1], 1.0)
    assert np.allclose(B.entries[j - 1, :], 1.0)


# ── constructors ─────────────────────────────────────────────────────────────

def test_perturbed_positions_of_three_block():
    assert perturbed_positions(three_block_matrix(5, 4.0, 3.0, 2.0)) == [(1, 2), (1, 3), (2, 3)]


def test_perturbed_positions_of_triangular():
    assert perturbed_positions(triangular_matrix(6, 3.0, 4.0, 2.0)) == [(1, 3), (1, 4), (2, 4)]


def test_block_matrix_pads_with_ones():
    A = block_matrix(4, [[1.0, 2.0], [0.5, 1.0]])
    assert A.entries[0, 1] == 2.0
    assert np.all(A.entries[2:, :] == 1.0)
    with pytest.raises(DimensionMismatchError):
        block_matrix(1, [[1.0, 2.0], [0.5, 1.0]])
