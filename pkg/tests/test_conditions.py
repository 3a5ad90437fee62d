import numpy as np
import pytest

from effhull.errors import ConditionViolatedError, DimensionMismatchError, PreconditionViolatedError
from effhull.models import WeightVector
from effhull.services.conditions import (
    TRIANGULAR_CASES,
    check_sign_table,
    cond11_label,
    hull_in_efficient_3block,
    hull_in_efficient_triangular,
    require_cond11,
    subefficiency_conditions_4x4,
    subefficiency_conditions_5x5,
    triangular_case,
    triangular_conditions,
)
from effhull.services.efficiency import efficient_3x3
from effhull.services.generators import convex_combination
from effhull.services.matrix_core import principal_submatrix, three_block_matrix, triangular_matrix


# ── 3-block conditions ───────────────────────────────────────────────────────

@pytest.mark.parametrize("triple, label", [
    ((4.0, 3.0, 2.0), "i"),
    ((2.0, 1.0, 3.0), "i"),
    ((5.0, 5.0, 1.0), "ii"),
    ((1.0, 3.0, 5.0), "iii"),
    ((0.5, 2.0, 0.5), "iv"),
    ((0.5, 0.5, 0.5), None),
    ((2.0, 3.0, 0.5), None),
])
def test_cond11_label(triple, label):
    assert cond11_label(*triple) == label


def test_require_cond11_raises():
    with pytest.raises(ConditionViolatedError):
        require_cond11(0.5, 0.5, 0.5)


@pytest.mark.parametrize("triple, contained", [
    ((4.0, 3.0, 2.0), True),
    ((4.0, 8.0, 2.0), True),
    ((4.0, 8.2, 2.0), False),
    ((4.0, 12.0, 2.0), False),
    ((5.0, 5.0, 1.0), True),
    ((0.5, 2.0, 0.5), False),
])
def test_hull_in_efficient_3block(triple, contained):
    assert hull_in_efficient_3block(*triple) is contained


# ── Triangular conditions ────────────────────────────────────────────────────

@pytest.mark.parametrize("triple, contained", [
    ((5.0, 4.0, 2.0), False),     # 1 < a24 < a14 < a13
    ((2.0, 4.0, 0.5), False),     # a24 < 1 < a13 < a14
    ((5.0, 5.0, 2.0), True),
    ((3.0, 4.0, 2.0), True),
    ((0.5, 2.0, 0.5), True),
    ((5.0, 1.0, 1.0), True),
])
def test_hull_in_efficient_triangular(triple, contained):
    assert hull_in_efficient_triangular(*triple) is contained


def test_triangular_conditions_flags():
    assert triangular_conditions(5.0, 4.0, 2.0) == {"1": True, "2": False}
    assert triangular_conditions(2.0, 4.0, 0.5) == {"1": False, "2": True}


def test_triangular_requires_a14_at_least_one():
    with pytest.raises(PreconditionViolatedError):
        hull_in_efficient_triangular(2.0, 0.5, 3.0)


# ── Subefficiency chains ─────────────────────────────────────────────────────

def test_4x4_chains_match_deleted_submatrices(rng):
    for _ in range(200):
        a12, a23 = np.exp(rng.uniform(-1.5, 1.5, size=2))
        a13 = float(np.exp(rng.uniform(-2.0, 2.5)))
        A = three_block_matrix(4, a12, a13, a23)
        w = convex_combination(A, WeightVector(rng.uniform(size=4)))
        flags = subefficiency_conditions_4x4(a12, a13, a23, w)
        for i in range(1, 5):
            sub = principal_submatrix(A, [i], mode="delete")
            assert flags[i] == efficient_3x3(sub, w.delete([i])), (a12, a13, a23, i)


def test_5x5_chains_match_deleted_submatrices(rng):
    for _ in range(200):
        a13, a14, a24 = np.exp(rng.uniform(-1.5, 1.5, size=3))
        A = triangular_matrix(5, a13, a14, a24)
        w = convex_combination(A, WeightVector(rng.uniform(size=5)))
        flags = subefficiency_conditions_5x5(a13, a14, a24, w)
        assert len(flags) == 10
        for (i, j), flag in flags.items():
            sub = principal_submatrix(A, [i, j], mode="delete")
            assert flag == efficient_3x3(sub, w.delete([i, j])), (a13, a14, a24, i, j)


def test_chain_dimension_check():
    with pytest.raises(DimensionMismatchError):
        subefficiency_conditions_4x4(4.0, 3.0, 2.0, [1.0, 1.0, 1.0])


# ── Sufficiency cases and sign table ─────────────────────────────────────────

def test_triangular_case_labels():
    assert triangular_case(2.0, 3.0, 1.5) == ["i"]
    assert triangular_case(0.5, 2.0, 0.5) == ["iv"]
    assert "vii" in triangular_case(5.0, 2.0, 0.5)


def _sample_case(case, r):
    """(a13, a14, a24) drawn inside the bounds of one sufficiency case."""
    if case == "i":
        a14 = r.uniform(1, 10)
        return r.uniform(1, a14), a14, r.uniform(1, a14)
    if case == "ii":
        a14 = r.uniform(1, 10)
        return r.uniform(a14, 20), a14, r.uniform(a14, 20)
    if case == "iii":
        a13 = r.uniform(1, 5)
        a14 = r.uniform(a13, 10)
        return a13, a14, r.uniform(a14, 20)
    if case == "iv":
        return r.uniform(0.05, 1), r.uniform(1, 10), r.uniform(0.05, 1)
    if case == "v":
        a24 = r.uniform(1, 10)
        return r.uniform(0.05, 1), r.uniform(a24, 20), a24
    if case == "vi":
        a14 = r.uniform(1, 10)
        return r.uniform(0.05, 1), a14, r.uniform(a14, 20)
    a14 = r.uniform(1, 10)
    return r.uniform(a14, 20), a14, r.uniform(0.05, 1)


@pytest.mark.parametrize("case", sorted(TRIANGULAR_CASES))
def test_sign_table_holds_inside_each_case(rng, case):
    for _ in range(300):
        a13, a14, a24 = _sample_case(case, rng)
        assert case in triangular_case(a13, a14, a24)
        v = rng.uniform(0.0, 1.0, size=5)
        assert check_sign_table(a13, a14, a24, v, case) == [], (case, a13, a14, a24, v)


def test_sign_table_reports_violations():
    # case i) parameters checked against the signs of case iv)
    violations = check_sign_table(2.0, 3.0, 1.5, [0.0, 0.0, 0.0, 1.0, 0.0], "iv")
    assert any(v.startswith("w2-w3") for v in violations)
