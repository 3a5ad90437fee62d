import numpy as np
import pytest
from pydantic import ValidationError

from effhull.errors import (
    DimensionMismatchError,
    EmptyResultError,
    NonPositiveEntryError,
    NonSquareError,
    NotReciprocalError,
    PreconditionViolatedError,
)
from effhull.models import (
    EfficiencyCertificate,
    EfficiencyDigraph,
    HullVerdict,
    MonomialTransform,
    PositiveVector,
    ReciprocalMatrix,
    WeightVector,
)
from effhull.services.matrix_core import monomial_similarity


# ── Vectors ──────────────────────────────────────────────────────────────────

def test_positive_vector_rejects_zero_and_nan():
    with pytest.raises(NonPositiveEntryError):
        PositiveVector([1.0, 0.0])
    with pytest.raises(NonPositiveEntryError):
        PositiveVector([np.nan, 1.0])


def test_positive_vector_is_read_only():
    w = PositiveVector([1.0, 2.0])
    with pytest.raises(ValueError):
        w.entries[0] = 5.0


def test_positive_vector_delete_and_retain_are_one_based():
    w = PositiveVector([1.0, 2.0, 3.0, 4.0])
    assert w.delete([1, 4]).tolist() == [2.0, 3.0]
    assert w.retain([4, 2]).tolist() == [2.0, 4.0]
    with pytest.raises(EmptyResultError):
        w.delete([1, 2, 3, 4])


def test_weight_vector_normalizes():
    assert WeightVector([2.0, 2.0]).tolist() == [0.5, 0.5]
    assert WeightVector.unit(3, 2).tolist() == [0.0, 1.0, 0.0]


@pytest.mark.parametrize("raw", [[-1.0, 2.0], [0.0, 0.0], [np.inf, 1.0]])
def test_weight_vector_rejects_bad_weights(raw):
    with pytest.raises(NonPositiveEntryError):
        WeightVector(raw)


# ── Matrices ─────────────────────────────────────────────────────────────────

def test_reciprocal_matrix_recomputes_lower_triangle():
    A = ReciprocalMatrix([[1.0, 2.0], [7.0, 1.0]])
    assert A.tolist() == [[1.0, 2.0], [0.5, 1.0]]


@pytest.mark.parametrize("diag", [[5.0, 1.0], [1.0, 1.0 + 1e-6], [1.0, float("nan")]])
def test_reciprocal_matrix_rejects_diagonal_other_than_one(diag):
    with pytest.raises(NotReciprocalError) as info:
        ReciprocalMatrix([[diag[0], 2.0], [0.5, diag[1]]])
    assert info.value.i == info.value.j


def test_reciprocal_matrix_rejects_non_square():
    with pytest.raises(NonSquareError):
        ReciprocalMatrix(np.ones((2, 3)))


def test_column_and_dimension_check(worked_example):
    assert worked_example.column(2).tolist() == [4.0, 1.0, 0.2, 1.0]
    with pytest.raises(DimensionMismatchError):
        worked_example.check_dim(PositiveVector.ones(3))


# ── Monomial transforms ──────────────────────────────────────────────────────

def test_transform_then_inverse_is_identity(rng, disguise, make_reciprocal):
    _, T = disguise(make_reciprocal(6, rng), rng)
    I = T.then(T.inverse())
    assert I.perm == tuple(range(6))
    assert np.allclose(I.scale.entries, 1.0)


def test_transform_composition_matches_sequential_similarity(rng, disguise, make_reciprocal):
    A = make_reciprocal(5, rng)
    B, T1 = disguise(A, rng)
    C, T2 = disguise(B, rng)
    assert monomial_similarity(A, T1.then(T2)).allclose(C, 1e-12)


def test_transform_ordering():
    T = MonomialTransform.ordering([2, 0, 1])
    assert T.perm == (1, 2, 0)
    assert T.apply_to_array([10.0, 20.0, 30.0]).tolist() == [30.0, 10.0, 20.0]


def test_transform_rejects_bad_permutation():
    with pytest.raises(PreconditionViolatedError):
        MonomialTransform.permutation([0, 0, 1])


# ── Result models ────────────────────────────────────────────────────────────

def test_digraph_totality():
    G = EfficiencyDigraph(np.array([[False, True, False], [False, False, True], [True, False, False]]))
    assert G.is_total()
    assert G.edges() == [(1, 2), (2, 3), (3, 1)]
    assert not EfficiencyDigraph(np.zeros((3, 3), dtype=bool)).is_total()


def test_certificate_requires_witness_when_inefficient():
    with pytest.raises(ValidationError):
        EfficiencyCertificate(n=3, verdict="inefficient", method="digraph")
    with pytest.raises(ValidationError):
        EfficiencyCertificate(n=3, verdict="inefficient", method="digraph", witness=[1, 2, 3])
    cert = EfficiencyCertificate(n=3, verdict="inefficient", method="digraph", witness=[2], witness_kind="sink")
    assert not cert.efficient


def test_hull_verdict_no_requires_certified_witness():
    with pytest.raises(ValidationError):
        HullVerdict(contained="no", reason="r", kind="three-block")
    efficient = EfficiencyCertificate(n=2, verdict="efficient", method="digraph")
    with pytest.raises(ValidationError):
        HullVerdict(contained="no", reason="r", kind="three-block", witness=[1.0, 1.0],
                    witness_certificate=efficient)
