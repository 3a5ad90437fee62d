"""
Generators: candidate weight vectors built from the columns of a
reciprocal matrix: convex combinations, weighted geometric means, the Perron
vector, the singular vector and the two column means.
"""

from typing import Literal, Optional

import numpy as np
from scipy.optimize import nnls

from effhull.config import ToleranceConfig, settings
from effhull.errors import DimensionMismatchError, NoConvergenceError
from effhull.models import PerronResult, PositiveVector, ReciprocalMatrix, WeightVector
from effhull.utils.logger import get_logger

logger = get_logger(__name__)


def _check_alpha(A: ReciprocalMatrix, alpha: WeightVector) -> None:
    if alpha.n != A.n:
        raise DimensionMismatchError(f"{alpha.n} weights for a {A.n}x{A.n} matrix")


def convex_combination(A: ReciprocalMatrix, alpha: WeightVector) -> PositiveVector:
    """A·α, a point of the cone C(A)."""
    _check_alpha(A, alpha)
    return PositiveVector(A.entries @ alpha.alpha)


def weighted_geometric_mean(A: ReciprocalMatrix, alpha: WeightVector) -> PositiveVector:
    """Entrywise product of the columns raised to the α powers (log space)."""
    _check_alpha(A, alpha)
    return PositiveVector(np.exp(np.log(A.entries) @ alpha.alpha))


def mean_columns(A: ReciprocalMatrix, kind: Literal["arithmetic", "geometric"] = "arithmetic") -> PositiveVector:
    uniform = WeightVector.uniform(A.n)
    if kind == "arithmetic":
        return convex_combination(A, uniform)
    if kind == "geometric":
        return weighted_geometric_mean(A, uniform)
    raise ValueError(f"unknown mean kind {kind!r}")


# ── Dominant eigenpairs ──────────────────────────────────────────────────────

def dominant_eigenpair(M: np.ndarray, cfg: Optional[ToleranceConfig] = None) -> PerronResult:
    """Power iteration for a positive matrix, renormalising to unit sum.

    Starts from the uniform vector and stops when the sup-norm change,
    relative to the largest entry, drops below ``power_tol``.
    """
    cfg = cfg or settings
    M = np.asarray(M, dtype=float)
    n = M.shape[0]
    x = np.full(n, 1.0 / n)
    change = np.inf
    for iteration in range(1, cfg.max_iters + 1):
        y = M @ x
        y /= y.sum()
        change = float(np.abs(y - x).max() / y.max())
        x = y
        if change < cfg.power_tol:
            mx = M @ x
            rho = float(x @ mx / (x @ x))
            logger.debug("Power iteration converged: n=%d iters=%d rho=%.12g", n, iteration, rho)
            return PerronResult(PositiveVector(x), rho, iteration, change)
    raise NoConvergenceError(cfg.max_iters, change)


def perron_vector(A: ReciprocalMatrix, cfg: Optional[ToleranceConfig] = None) -> PerronResult:
    """Right Perron vector of A (unit sum) and its eigenvalue ρ(A)."""
    return dominant_eigenpair(A.entries, cfg)


def singular_vector(A: ReciprocalMatrix, cfg: Optional[ToleranceConfig] = None) -> PositiveVector:
    """Perron vector of A·Aᵀ (unit sum)."""
    return dominant_eigenpair(A.entries @ A.entries.T, cfg).vector


# ── Cone membership ──────────────────────────────────────────────────────────

def cone_coefficients(A: ReciprocalMatrix, v) -> tuple[np.ndarray, float]:
    """Nonnegative x minimising ‖A·x − v‖ and the relative residual."""
    v = np.asarray(v.entries if isinstance(v, PositiveVector) else v, dtype=float)
    A.check_dim(v)
    x, rnorm = nnls(A.entries, v)
    return x, float(rnorm / np.linalg.norm(v))


def in_column_cone(A: ReciprocalMatrix, v, cfg: Optional[ToleranceConfig] = None) -> bool:
    """True when v is, up to √rtol relative residual, a nonnegative combination of columns."""
    cfg = cfg or settings
    _, residual = cone_coefficients(A, v)
    return residual <= np.sqrt(cfg.rtol)


def reference_vectors(A: ReciprocalMatrix, cfg: Optional[ToleranceConfig] = None) -> dict[str, PositiveVector]:
    """w_gm, w_P, w_s and w_sum for one matrix."""
    return {
        "w_gm": mean_columns(A, "geometric"),
        "w_P": perron_vector(A, cfg).vector,
        "w_s": singular_vector(A, cfg),
        "w_sum": mean_columns(A, "arithmetic"),
    }
