import numpy as np
import pytest
from hypothesis import assume, given, settings as hyp_settings, strategies as st

from effhull.config import ToleranceConfig
from effhull.errors import (
    ConditionViolatedError,
    DegenerateXError,
    DimensionMismatchError,
    FormViolatedError,
    HullContainedError,
    NotEfficientError,
    PreconditionViolatedError,
    SearchExhaustedError,
)
from effhull.models import PositiveVector, ReciprocalMatrix, WeightVector
from effhull.services.conditions import cond11_label, hull_in_efficient_3block, hull_in_efficient_triangular
from effhull.services.efficiency import efficient_3x3, is_efficient
from effhull.services.generators import convex_combination
from effhull.services.matrix_core import three_block_matrix, triangular_matrix
from effhull.services.witnesses import (
    decompose_3x3,
    rowsum_witness,
    three_by_three_coefficients,
    witness_3block,
    witness_triangular,
)


def _x_matrix(x):
    return ReciprocalMatrix([[1.0, 1.0, x], [1.0, 1.0, 1.0], [1.0 / x, 1.0, 1.0]])


def _assert_certified(A, u, w):
    assert np.all(u >= 0)
    assert np.allclose(A.entries @ u, w.entries)
    assert not is_efficient(A, w).efficient


# ── Row-sum criterion ────────────────────────────────────────────────────────

def test_rowsum_witness_on_worked_example(worked_example):
    w = rowsum_witness(worked_example, [1.0, 1.0, 1.0])
    assert w is not None
    assert np.allclose(w.entries * 3, [31 / 6, 25 / 4, 36 / 5, 3.0])
    assert not is_efficient(worked_example, w).efficient


def test_rowsum_witness_accepts_weight_vector(worked_example):
    assert rowsum_witness(worked_example, WeightVector.uniform(3)) is not None


def test_rowsum_witness_none_for_consistent():
    assert rowsum_witness(ReciprocalMatrix.ones(5), [1.0, 1.0, 1.0, 1.0]) is None


def test_rowsum_witness_needs_three_nonzeros(worked_example):
    assert rowsum_witness(worked_example, [0.5, 0.5, 0.0]) is None


def test_rowsum_witness_none_below_four():
    assert rowsum_witness(three_block_matrix(3, 4.0, 12.0, 2.0), [1.0, 1.0]) is None


def test_rowsum_witness_errors(rng, make_reciprocal, worked_example):
    with pytest.raises(FormViolatedError):
        rowsum_witness(make_reciprocal(4, rng, spread=4.0), [1.0, 1.0, 1.0])
    with pytest.raises(DimensionMismatchError):
        rowsum_witness(worked_example, [1.0, 1.0])
    with pytest.raises(PreconditionViolatedError):
        rowsum_witness(worked_example, [1.0, -1.0, 1.0])


# ── 3-block witness ──────────────────────────────────────────────────────────

@pytest.mark.parametrize("triple", [(4.0, 12.0, 2.0), (4.0, 8.2, 2.0), (4.0, 10000.0, 2.0), (0.5, 2.0, 0.5)])
def test_witness_3block_examples(triple):
    u, w = witness_3block(*triple)
    _assert_certified(three_block_matrix(4, *triple), u, w)


@pytest.mark.parametrize("triple", [(4.0, 3.0, 2.0), (4.0, 8.0, 2.0), (5.0, 5.0, 1.0)])
def test_witness_3block_contained(triple):
    with pytest.raises(HullContainedError):
        witness_3block(*triple)


def test_witness_3block_condition_violated():
    with pytest.raises(ConditionViolatedError):
        witness_3block(0.5, 0.5, 0.5)


def test_witness_search_exhausted_with_one_step():
    # ε = 0.9 drives both free coefficients negative
    cfg = ToleranceConfig(eps0=0.9, eps_max_steps=1)
    with pytest.raises(SearchExhaustedError):
        witness_3block(0.5, 1.05, 0.9, cfg)


def _sweep_3block(count, rng):
    for k in range(count):
        branch = k % 4
        if branch == 0:
            a12, a23 = rng.uniform(1.05, 10.0, size=2)
            a13 = a12 * a23 * rng.uniform(1.05, 10.0)
        elif branch == 1:
            # just above the containment boundary a13 = a12*a23
            a12, a23 = rng.uniform(1.05, 10.0, size=2)
            a13 = a12 * a23 * (1.0 + rng.uniform(0.01, 0.05))
        elif branch == 2:
            a12, a23 = rng.uniform(0.1, 0.95, size=2)
            a13 = rng.uniform(1.05, 10.0)
        else:
            a12, a23 = rng.uniform(0.1, 0.95, size=2)
            a13 = 1.0 + rng.uniform(0.01, 0.1)
        u, w = witness_3block(a12, a13, a23)
        _assert_certified(three_block_matrix(4, a12, a13, a23), u, w)


def test_witness_3block_sweep(rng):
    _sweep_3block(80, rng)


@pytest.mark.slow
def test_witness_3block_sweep_long(rng):
    _sweep_3block(1000, rng)


# ── Triangular witness ───────────────────────────────────────────────────────

@pytest.mark.parametrize("triple", [
    (5.0, 4.0, 2.0),
    (2.0, 4.0, 0.5),
    (100.0, 10.0, 1.5),
    (6.0, 5.0, 2.5),      # a13 - a14 = (a14 - a24)/a24
    (11.0, 9.0, 3.0),     # a13 - a14 = (a14 - a24)/a24
    (4.5, 4.0, 2.0),      # a13 - a14 < (a14 - a24)/a24
    (4.01, 4.0, 2.0),
    (2.0, 4.0, 0.8),      # (a14 - a13)/(a13*a14) = (1 - a24)/a24
    (2.0, 8.0, 0.9),      # (a14 - a13)/(a13*a14) > (1 - a24)/a24
])
def test_witness_triangular_examples(triple):
    u, w = witness_triangular(*triple)
    _assert_certified(triangular_matrix(5, *triple), u, w)


def test_witness_triangular_contained():
    with pytest.raises(HullContainedError):
        witness_triangular(5.0, 5.0, 2.0)


def _first_chain_triple(rng, tie):
    """1 < a24 < a14 < a13; ``tie`` scales a13 - a14 against (a14 - a24)/a24."""
    a24 = rng.uniform(1.1, 5.0)
    a14 = a24 * rng.uniform(1.1, 4.0)
    if tie is None:
        return a14 * rng.uniform(1.05, 5.0), a14, a24
    return a14 + tie * (a14 - a24) / a24, a14, a24


def _second_chain_triple(rng, tie):
    """a24 < 1 < a13 < a14; ``tie`` scales a14 against the value where the gaps cancel."""
    a13 = rng.uniform(1.1, 4.0)
    if tie is None:
        return a13, a13 * rng.uniform(1.05, 5.0), rng.uniform(0.1, 0.95)
    k = rng.uniform(0.1, 0.9) / a13
    a14 = max(tie / (1.0 / a13 - k), 1.02 * a13)
    return a13, a14, 1.0 / (1.0 + k)


def _sweep_triangular(count, rng):
    for k in range(count):
        tie = (None, 1.0, float(rng.uniform(0.05, 3.0)))[k % 3]
        chain = _first_chain_triple if k % 2 == 0 else _second_chain_triple
        a13, a14, a24 = chain(rng, tie)
        u, w = witness_triangular(a13, a14, a24)
        _assert_certified(triangular_matrix(5, a13, a14, a24), u, w)


def test_witness_triangular_sweep(rng):
    _sweep_triangular(90, rng)


@pytest.mark.slow
def test_witness_triangular_sweep_long(rng):
    _sweep_triangular(1200, rng)


# ── Sufficiency: contained parameters never produce inefficient combinations ─

def _assert_hull_efficient(A, rng, draws):
    alphas = rng.uniform(size=(A.n, draws))
    for k in range(draws):
        w = convex_combination(A, WeightVector(alphas[:, k]))
        assert is_efficient(A, w).efficient, (A.tolist()[0], alphas[:, k])


def _contained_3block(rng, condition):
    """A triple meeting ``condition`` with a13 <= a12*a23, boundaries included."""
    snap = rng.uniform()
    if condition == "i":
        a12, a23 = rng.uniform(1.05, 10.0, size=2)
        t = 1.0 if snap < 0.2 else 0.0 if snap < 0.3 else rng.uniform()
        return a12, 1.0 + (a12 * a23 - 1.0) * t, a23
    hi = rng.uniform(1.05, 10.0)
    a13 = hi if snap < 0.2 else 1.0 if snap < 0.3 else rng.uniform(1.0, hi)
    return (hi, a13, 1.0) if condition == "ii" else (1.0, a13, hi)


def _contained_triangular(rng):
    while True:
        a13, a14, a24 = np.exp(rng.uniform(-2.0, 2.0, size=3))
        snap = rng.uniform()
        if snap < 0.1:
            a13 = a14
        elif snap < 0.2:
            a24 = a14
        elif snap < 0.3:
            a24 = 1.0
        elif snap < 0.4:
            a13 = 1.0
        if a14 >= 1.0 and not _strict_chain(a13, a14, a24):
            return a13, a14, a24


def _strict_chain(a13, a14, a24):
    return 1 < a24 < a14 < a13 or a24 < 1 < a13 < a14


@pytest.mark.parametrize("condition", ["i", "ii", "iii"])
@pytest.mark.parametrize("n", [4, 6])
def test_contained_3block_has_only_efficient_combinations(rng, n, condition):
    for _ in range(40):
        a12, a13, a23 = _contained_3block(rng, condition)
        assert cond11_label(a12, a13, a23) is not None
        assert hull_in_efficient_3block(a12, a13, a23)
        _assert_hull_efficient(three_block_matrix(n, a12, a13, a23), rng, 20)


@pytest.mark.slow
@pytest.mark.parametrize("condition", ["i", "ii", "iii"])
@pytest.mark.parametrize("n", [4, 6])
def test_contained_3block_has_only_efficient_combinations_long(rng, n, condition):
    for _ in range(500):
        a12, a13, a23 = _contained_3block(rng, condition)
        _assert_hull_efficient(three_block_matrix(n, a12, a13, a23), rng, 200)


def test_contained_triangular_has_only_efficient_combinations(rng):
    for _ in range(40):
        a13, a14, a24 = _contained_triangular(rng)
        assert hull_in_efficient_triangular(a13, a14, a24)
        _assert_hull_efficient(triangular_matrix(5, a13, a14, a24), rng, 25)


@pytest.mark.slow
@pytest.mark.parametrize("n", [5, 7])
def test_contained_triangular_has_only_efficient_combinations_long(rng, n):
    for _ in range(500):
        a13, a14, a24 = _contained_triangular(rng)
        _assert_hull_efficient(triangular_matrix(n, a13, a14, a24), rng, 200)


# ── 3×3 decomposition ────────────────────────────────────────────────────────

def test_decompose_example():
    y = decompose_3x3(_x_matrix(2.0), PositiveVector([1.5, 1.2, 1.0]))
    assert np.allclose(y, [0.4, 0.5, 0.3])


def test_decompose_constant_vector():
    assert np.allclose(decompose_3x3(_x_matrix(1.0), PositiveVector([2.0, 2.0, 2.0])), [0.0, 2.0, 0.0])
    assert np.allclose(decompose_3x3(_x_matrix(3.0), PositiveVector([2.0, 2.0, 2.0])), [0.0, 2.0, 0.0])


def test_decompose_errors():
    with pytest.raises(DegenerateXError):
        decompose_3x3(_x_matrix(1.0), PositiveVector([1.0, 2.0, 1.0]))
    with pytest.raises(NotEfficientError):
        decompose_3x3(_x_matrix(2.0), PositiveVector([1.0, 1.5, 1.0]))
    with pytest.raises(PreconditionViolatedError):
        decompose_3x3(_x_matrix(0.5), PositiveVector([1.0, 1.0, 1.0]))
    with pytest.raises(FormViolatedError):
        decompose_3x3(three_block_matrix(3, 2.0, 2.0, 1.0), PositiveVector([1.0, 1.0, 1.0]))
    with pytest.raises(DimensionMismatchError):
        decompose_3x3(ReciprocalMatrix.ones(4), PositiveVector.ones(4))


@hyp_settings(max_examples=300, deadline=None)
@given(
    x=st.floats(min_value=1.01, max_value=50.0),
    w=st.lists(st.floats(min_value=0.1, max_value=10.0), min_size=3, max_size=3),
)
def test_coefficients_nonnegative_iff_efficient(x, w):
    y = three_by_three_coefficients(x, w)
    assume(np.all(np.abs(y) > 1e-5 * max(w)))
    assert bool(np.all(y > 0)) == efficient_3x3(_x_matrix(x), PositiveVector(w))


@hyp_settings(max_examples=200, deadline=None)
@given(
    x=st.floats(min_value=1.01, max_value=50.0),
    alpha=st.lists(st.floats(min_value=0.0, max_value=1.0), min_size=3, max_size=3),
)
def test_decomposition_reproduces_vector(x, alpha):
    assume(sum(alpha) > 1e-3)
    A = _x_matrix(x)
    w = convex_combination(A, WeightVector(alpha))
    y = decompose_3x3(A, w)
    assert np.all(y >= 0)
    assert np.allclose(A.entries @ y, w.entries, rtol=1e-9)
