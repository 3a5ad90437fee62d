"""
Closed-form conditions for the 3-block and 4-block triangular families.

  * `cond11_label`                 which canonical 3-block condition (i–iv) holds.
  * `hull_in_efficient_3block`     C(A) ⊆ E(A) iff a13 ≤ a12·a23.
  * `hull_in_efficient_triangular` C(A) ⊆ E(A) iff neither strict chain holds.
  * Subefficiency chains of the 4×4 and 5×5 canonical forms, the sufficiency
    cases i)–vii) of the triangular family and their sign table.

Non-strict comparisons use `leq` (edge_rtol slack); strict ones require the
margin ``x < y·(1 − edge_rtol)``, so boundaries count as contained.
"""

from typing import Callable, Optional

import numpy as np

from effhull.config import ToleranceConfig, settings
from effhull.errors import ConditionViolatedError, DimensionMismatchError, PreconditionViolatedError
from effhull.services.efficiency import leq
from effhull.services.matrix_core import triangular_matrix


def lt(x: float, y: float, tol: float) -> bool:
    """Strict ``x < y`` with a relative margin."""
    return x < y * (1.0 - tol)


def _close(x: float, y: float, tol: float) -> bool:
    return abs(x - y) <= tol * max(abs(x), abs(y))


# ── 3-block family ───────────────────────────────────────────────────────────

def cond11_label(a12: float, a13: float, a23: float, cfg: Optional[ToleranceConfig] = None) -> Optional[str]:
    """First of the canonical conditions i)–iv) satisfied by the triple, or None.

    i)   a13 ≥ 1 and a12, a23 > 1
    ii)  a12 ≥ a13 ≥ a23 = 1
    iii) a23 ≥ a13 ≥ a12 = 1
    iv)  a13 > 1 and a12, a23 < 1
    """
    cfg = cfg or settings
    tol = cfg.rtol
    if leq(1.0, a13, tol) and lt(1.0, a12, tol) and lt(1.0, a23, tol):
        return "i"
    if _close(a23, 1.0, tol) and leq(a13, a12, tol) and leq(a23, a13, tol):
        return "ii"
    if _close(a12, 1.0, tol) and leq(a13, a23, tol) and leq(a12, a13, tol):
        return "iii"
    if lt(1.0, a13, tol) and lt(a12, 1.0, tol) and lt(a23, 1.0, tol):
        return "iv"
    return None


def require_cond11(a12: float, a13: float, a23: float, cfg: Optional[ToleranceConfig] = None) -> str:
    label = cond11_label(a12, a13, a23, cfg)
    if label is None:
        raise ConditionViolatedError(
            f"(a12, a13, a23) = ({a12:g}, {a13:g}, {a23:g}) satisfies none of the canonical conditions i)-iv)"
        )
    return label


def hull_in_efficient_3block(a12: float, a13: float, a23: float, cfg: Optional[ToleranceConfig] = None) -> bool:
    """C(A) ⊆ E(A) for the canonical 3-block form iff a13 ≤ a12·a23."""
    cfg = cfg or settings
    require_cond11(a12, a13, a23, cfg)
    return bool(leq(a13, a12 * a23, cfg.rtol))


# ── 4-block triangular family ────────────────────────────────────────────────

def triangular_conditions(a13: float, a14: float, a24: float, cfg: Optional[ToleranceConfig] = None) -> dict[str, bool]:
    """The two strict chains that break hull containment.

    1: 1 < a24 < a14 < a13        2: a24 < 1 < a13 < a14
    """
    cfg = cfg or settings
    tol = cfg.edge_rtol
    return {
        "1": lt(1.0, a24, tol) and lt(a24, a14, tol) and lt(a14, a13, tol),
        "2": lt(a24, 1.0, tol) and lt(1.0, a13, tol) and lt(a13, a14, tol),
    }


def require_a14(a14: float, cfg: ToleranceConfig) -> None:
    if lt(a14, 1.0, cfg.rtol):
        raise PreconditionViolatedError(f"the triangular form needs a14 >= 1, got {a14:g}")


def hull_in_efficient_triangular(a13: float, a14: float, a24: float, cfg: Optional[ToleranceConfig] = None) -> bool:
    """C(A) ⊆ E(A) for the canonical triangular form (a14 ≥ 1)."""
    cfg = cfg or settings
    require_a14(a14, cfg)
    return not any(triangular_conditions(a13, a14, a24, cfg).values())


# ── Subefficiency chains ─────────────────────────────────────────────────────

# each chain (c1, c2, c3, c4) holds when it is nondecreasing or nonincreasing
Chain = Callable[[np.ndarray, dict], tuple[float, float, float, float]]


def _monotone(chain: tuple[float, ...], tol: float) -> bool:
    pairs = list(zip(chain, chain[1:]))
    return all(leq(x, y, tol) for x, y in pairs) or all(leq(y, x, tol) for x, y in pairs)


_CHAINS_4X4: dict[int, Chain] = {
    1: lambda w, p: (w[2], w[3], w[1], p["a23"] * w[2]),
    2: lambda w, p: (w[2], w[3], w[0], p["a13"] * w[2]),
    3: lambda w, p: (w[1], w[3], w[0], p["a12"] * w[1]),
    4: lambda w, p: (p["a13"] * w[2], w[0], p["a12"] * w[1], p["a23"] * p["a12"] * w[2]),
}

_CHAINS_5X5: dict[tuple[int, int], Chain] = {
    (1, 2): lambda w, p: (w[2], w[3], w[4], w[2]),
    (1, 3): lambda w, p: (w[3], w[4], w[1], p["a24"] * w[3]),
    (1, 4): lambda w, p: (w[1], w[2], w[4], w[1]),
    (1, 5): lambda w, p: (w[3], w[2], w[1], p["a24"] * w[3]),
    (2, 3): lambda w, p: (w[3], w[4], w[0], p["a14"] * w[3]),
    (2, 4): lambda w, p: (w[2], w[4], w[0], p["a13"] * w[2]),
    (2, 5): lambda w, p: (w[3], w[2], w[0] / p["a13"], p["a14"] / p["a13"] * w[3]),
    (3, 4): lambda w, p: (w[0], w[1], w[4], w[0]),
    (3, 5): lambda w, p: (p["a24"] * w[3], w[1], w[0], p["a14"] * w[3]),
    (4, 5): lambda w, p: (w[2], w[1], w[0], p["a13"] * w[2]),
}


def _entries(w, n: int) -> np.ndarray:
    arr = np.asarray(getattr(w, "entries", w), dtype=float).reshape(-1)
    if arr.size != n:
        raise DimensionMismatchError(f"expected a vector of length {n}, got {arr.size}")
    return arr


def subefficiency_conditions_4x4(
    a12: float, a13: float, a23: float, w, cfg: Optional[ToleranceConfig] = None
) -> dict[int, bool]:
    """{i: w(i) efficient for A(i)} for the 4×4 3-block form."""
    cfg = cfg or settings
    x = _entries(w, 4)
    p = {"a12": a12, "a13": a13, "a23": a23}
    return {i: _monotone(chain(x, p), cfg.edge_rtol) for i, chain in _CHAINS_4X4.items()}


def subefficiency_conditions_5x5(
    a13: float, a14: float, a24: float, w, cfg: Optional[ToleranceConfig] = None
) -> dict[tuple[int, int], bool]:
    """{(i, j): w(i,j) efficient for A(i,j)} for the 5×5 triangular form."""
    cfg = cfg or settings
    x = _entries(w, 5)
    p = {"a13": a13, "a14": a14, "a24": a24}
    return {ij: _monotone(chain(x, p), cfg.edge_rtol) for ij, chain in _CHAINS_5X5.items()}


# ── Sufficiency cases and sign table ─────────────────────────────────────────

TRIANGULAR_CASES: dict[str, Callable[[float, float, float], bool]] = {
    "i": lambda a13, a14, a24: 1 <= a13 <= a14 and 1 <= a24 <= a14,
    "ii": lambda a13, a14, a24: 1 <= a14 <= a13 and a14 <= a24,
    "iii": lambda a13, a14, a24: 1 <= a13 <= a14 <= a24,
    "iv": lambda a13, a14, a24: a13 <= 1 and a24 <= 1 and 1 <= a14,
    "v": lambda a13, a14, a24: a13 <= 1 <= a24 <= a14,
    "vi": lambda a13, a14, a24: a13 <= 1 <= a14 <= a24,
    "vii": lambda a13, a14, a24: a24 <= 1 <= a14 <= a13,
}


def triangular_case(a13: float, a14: float, a24: float) -> list[str]:
    """Labels of the sufficiency cases i)–vii) the triple falls into."""
    return [label for label, test in TRIANGULAR_CASES.items() if test(a13, a14, a24)]


SIGN_EXPRESSIONS: dict[str, Callable[[np.ndarray, dict], float]] = {
    "w1-w2": lambda w, p: w[0] - w[1],
    "w2-w3": lambda w, p: w[1] - w[2],
    "w3-w4": lambda w, p: w[2] - w[3],
    "w4-w5": lambda w, p: w[3] - w[4],
    "w5-w2": lambda w, p: w[4] - w[1],
    "w5-w1": lambda w, p: w[4] - w[0],
    "w3-w5": lambda w, p: w[2] - w[4],
    "w1-a14w4": lambda w, p: w[0] - p["a14"] * w[3],
    "w1-a13w3": lambda w, p: w[0] - p["a13"] * w[2],
    "w2-a24w4": lambda w, p: w[1] - p["a24"] * w[3],
}

# +1: ≥ 0, −1: ≤ 0; absent entries are not determined by the case
SIGN_TABLE: dict[str, dict[str, int]] = {
    "w1-w2": {"i": 1, "vi": -1, "vii": 1},
    "w2-w3": {"i": 1, "ii": 1, "iii": 1, "iv": -1},
    "w3-w4": {"i": 1, "iii": 1, "v": 1, "vi": 1, "vii": -1},
    "w4-w5": {"i": -1, "ii": -1, "iii": -1, "v": -1, "vi": -1},
    "w5-w2": {"i": -1, "ii": -1, "iii": -1, "iv": 1, "v": -1, "vi": -1, "vii": 1},
    "w5-w1": {"i": -1, "ii": -1, "iii": -1, "vii": -1},
    "w3-w5": {"i": -1, "ii": -1, "iii": -1, "iv": 1, "v": 1, "vi": 1, "vii": -1},
    "w1-a14w4": {"i": -1, "iv": -1, "v": -1},
    "w1-a13w3": {"ii": -1, "iv": 1, "v": 1, "vi": 1, "vii": -1},
    "w2-a24w4": {"ii": -1, "iii": -1, "iv": 1, "vi": -1, "vii": 1},
}


def sign_expressions(a13: float, a14: float, a24: float, v) -> dict[str, float]:
    """The ten difference expressions for w = A·v, A the 5×5 triangular form."""
    coeffs = _entries(v, 5)
    w = triangular_matrix(5, a13, a14, a24).entries @ coeffs
    p = {"a13": a13, "a14": a14, "a24": a24}
    return {name: float(expr(w, p)) for name, expr in SIGN_EXPRESSIONS.items()}


def check_sign_table(a13: float, a14: float, a24: float, v, case: str, atol: float = 1e-10) -> list[str]:
    """Expressions whose sign contradicts the table for ``case`` (empty when consistent)."""
    values = sign_expressions(a13, a14, a24, v)
    scale = max(1.0, a13, a14, a24) * float(np.abs(_entries(v, 5)).sum())
    violations = []
    for name, signs in SIGN_TABLE.items():
        sign = signs.get(case)
        if sign is not None and sign * values[name] < -atol * scale:
            violations.append(f"{name}={values[name]:.3g} (expected {'>=' if sign > 0 else '<='} 0)")
    return violations
