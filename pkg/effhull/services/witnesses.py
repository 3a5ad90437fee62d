"""
Explicit inefficient vectors in C(A).

Every vector returned here has been certified inefficient by the digraph
test before it leaves the module.
"""

from typing import Optional

import numpy as np

from effhull.config import ToleranceConfig, settings
from effhull.errors import (
    DegenerateXError,
    DimensionMismatchError,
    FormViolatedError,
    HullContainedError,
    NotEfficientError,
    PreconditionViolatedError,
)
from effhull.models import PositiveVector, ReciprocalMatrix
from effhull.services.conditions import (
    hull_in_efficient_3block,
    hull_in_efficient_triangular,
    lt,
    require_cond11,
    triangular_conditions,
)
from effhull.services.efficiency import efficient_3x3, is_efficient
from effhull.services.matrix_core import three_block_matrix, triangular_matrix
from effhull.utils.logger import get_logger
from effhull.utils.search import Rejected, shrinking_search

logger = get_logger(__name__)


# ── Row-sum criterion ────────────────────────────────────────────────────────

def rowsum_witness(A: ReciprocalMatrix, y, cfg: Optional[ToleranceConfig] = None) -> Optional[PositiveVector]:
    """A·[y; 0] when B·y is strictly above or strictly below e_{n−1}.

    A must have an all-ones last row and column and B is its leading
    (n−1)-block. ``y`` holds the first n−1 coefficients; fewer than three
    nonzero entries never produce a witness.
    """
    cfg = cfg or settings
    a = A.entries
    if A.n < 4:
        return None
    if np.abs(a[-1, :] - 1.0).max() > cfg.rtol:
        raise FormViolatedError("the last row and column of A must be all ones")

    coeffs = np.asarray(getattr(y, "alpha", y), dtype=float).reshape(-1)
    if coeffs.size != A.n - 1:
        raise DimensionMismatchError(f"y needs {A.n - 1} entries, got {coeffs.size}")
    if np.any(coeffs < 0) or coeffs.sum() <= 0:
        raise PreconditionViolatedError("y must be nonnegative and nonzero")
    coeffs = coeffs / coeffs.sum()
    if np.count_nonzero(coeffs) < 3:
        return None

    by = a[:-1, :-1] @ coeffs
    tol = cfg.edge_rtol
    above = all(lt(1.0, v, tol) for v in by)
    below = all(lt(v, 1.0, tol) for v in by)
    if not (above or below):
        return None
    w = PositiveVector(a @ np.append(coeffs, 0.0))
    if is_efficient(A, w, cfg).efficient:
        logger.warning("Row-sum candidate passed the strict test but is efficient.")
        return None
    return w


# ── ε-searched constructions ─────────────────────────────────────────────────

def _certify(A: ReciprocalMatrix, u: np.ndarray, cfg: ToleranceConfig) -> tuple[np.ndarray, PositiveVector]:
    if np.any(u < 0):
        raise Rejected(f"negative coefficient in u={np.array2string(u, precision=4)}")
    w = PositiveVector(A.entries @ u)
    if is_efficient(A, w, cfg).efficient:
        raise Rejected("candidate is efficient")
    return u, w


def _search(cfg: ToleranceConfig):
    return shrinking_search(cfg.eps0, cfg.eps_shrink, cfg.eps_max_steps)


def _three_block_coefficients(case: str, a12: float, a13: float, a23: float, eps: float) -> np.ndarray:
    if case == "i":
        u1 = a12 * (a23 - 1) / (a13 - a23 * a12) + eps
        u3 = (a12 - 1) / (a13 - a12 * a23) + eps * (a12 - 1) / (2 * a12 * (a23 - 1))
        return np.array([u1, 1.0, u3, 1.0])
    u1 = a13 * (a23 - 1) / (a23 * (a12 - 1)) - eps
    u2 = (a13 - 1) / (1 - a12) - eps * a23 * (a13 - 1) / (2 * a13 * (1 - a23))
    return np.array([u1, u2, 1.0, 1.0])


def witness_3block(
    a12: float, a13: float, a23: float, cfg: Optional[ToleranceConfig] = None
) -> tuple[np.ndarray, PositiveVector]:
    """(u, w) with w = A₄·u inefficient for the 4×4 3-block form.

    Needs a13 > a12·a23, i.e. condition i) with a12, a23 > 1 or
    condition iv) with a12, a23 < 1 < a13.
    """
    cfg = cfg or settings
    label = require_cond11(a12, a13, a23, cfg)
    if hull_in_efficient_3block(a12, a13, a23, cfg):
        raise HullContainedError(f"a13={a13:g} <= a12*a23={a12 * a23:g}: C(A) is contained in E(A)")
    if label not in ("i", "iv"):
        raise PreconditionViolatedError(f"no witness construction for condition {label})")
    case = "i" if label == "i" else "ii"
    A4 = three_block_matrix(4, a12, a13, a23)

    @_search(cfg)
    def build_3block_witness(eps: float):
        return _certify(A4, _three_block_coefficients(case, a12, a13, a23, eps), cfg)

    u, w = build_3block_witness()
    logger.debug("3-block witness for (%g, %g, %g): u=%s", a12, a13, a23, u)
    return u, w


def _coupling(case: str, a13: float, a14: float, a24: float) -> float:
    """Ratio ε₁/ε₂ that keeps the mixed gap at least half its ε₂ term.

    Case 1: w1 − a14·w4 = ((a24−a14)/a24)·ε₁ + (a13−a14)·ε₂.
    Case 2: w4 − w3 = ((a13−a14)/(a13·a14))·ε₁ + ((1−a24)/a24)·ε₂.
    """
    if case == "1":
        bound = a24 * (a13 - a14) / (a14 - a24)
    else:
        bound = a13 * a14 * (1 - a24) / (a24 * (a14 - a13))
    return min(1.0, 0.5 * bound)


def _triangular_coefficients(case: str, a13: float, a14: float, a24: float, eps: float) -> np.ndarray:
    eps2 = eps
    eps1 = _coupling(case, a13, a14, a24) * eps
    if case == "1":
        u2 = a24 * (a13 - a14) / (a13 * a14 * (a24 - 1)) + eps1
        u3 = (a14 - a24) / (a13 * a14 * (a24 - 1)) + eps2
        return np.array([1.0, u2, u3, 1.0, 0.0])
    u1 = a13 * (1 - a24) / (a13 - 1) + eps1
    u2 = a24 * (a14 - a13) / (a14 * (a13 - 1)) + eps2
    return np.array([u1, u2, 1.0, 1.0, 0.0])


def witness_triangular(
    a13: float, a14: float, a24: float, cfg: Optional[ToleranceConfig] = None
) -> tuple[np.ndarray, PositiveVector]:
    """(u, w) with w = A₅·u inefficient for the 5×5 triangular form."""
    cfg = cfg or settings
    if hull_in_efficient_triangular(a13, a14, a24, cfg):
        raise HullContainedError(
            f"(a13, a14, a24) = ({a13:g}, {a14:g}, {a24:g}) meets neither chain: C(A) is contained in E(A)"
        )
    case = "1" if triangular_conditions(a13, a14, a24, cfg)["1"] else "2"
    A5 = triangular_matrix(5, a13, a14, a24)

    @_search(cfg)
    def build_triangular_witness(eps: float):
        return _certify(A5, _triangular_coefficients(case, a13, a14, a24, eps), cfg)

    u, w = build_triangular_witness()
    logger.debug("Triangular witness for (%g, %g, %g): u=%s", a13, a14, a24, u)
    return u, w


# ── 3×3 decomposition ────────────────────────────────────────────────────────

def three_by_three_coefficients(x: float, w) -> np.ndarray:
    """[x(w2−w3), x·w3−w1, w1−w2] / (x−1); nonnegative iff w3 ≤ w2 ≤ w1 ≤ x·w3."""
    w1, w2, w3 = np.asarray(getattr(w, "entries", w), dtype=float)
    return np.array([x * (w2 - w3), x * w3 - w1, w1 - w2]) / (x - 1.0)


def decompose_3x3(A: ReciprocalMatrix, w: PositiveVector, cfg: Optional[ToleranceConfig] = None) -> np.ndarray:
    """Nonnegative y with A·y = w for A = [[1,1,x],[1,1,1],[1/x,1,1]], x ≥ 1."""
    cfg = cfg or settings
    if A.n != 3:
        raise DimensionMismatchError(f"decompose_3x3 needs a 3x3 matrix, got n={A.n}")
    A.check_dim(w)
    a = A.entries
    if abs(a[0, 1] - 1.0) > cfg.rtol or abs(a[1, 2] - 1.0) > cfg.rtol:
        raise FormViolatedError("expected a12 = a23 = 1")
    x = float(a[0, 2])
    if lt(x, 1.0, cfg.rtol):
        raise PreconditionViolatedError(f"x = a13 must be >= 1, got {x:g}")
    e = w.entries
    constant = np.ptp(e) <= cfg.rtol * e.max()
    if x - 1.0 <= cfg.rtol and not constant:
        raise DegenerateXError("x = 1 admits only constant efficient vectors")
    if not efficient_3x3(A, w, cfg):
        raise NotEfficientError("w is not efficient for A")
    if constant:
        # the middle column is all ones
        return np.array([0.0, float(e.mean()), 0.0])
    return np.clip(three_by_three_coefficients(x, e), 0.0, None)
