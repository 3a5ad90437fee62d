"""
Matrix core: validated construction of reciprocal matrices, consistency
checks, principal submatrices and monomial similarity.
"""

from itertools import combinations
from typing import Iterable, Literal, Optional

import numpy as np

from effhull.config import ToleranceConfig, settings
from effhull.errors import (
    DimensionMismatchError,
    EmptyResultError,
    NonPositiveEntryError,
    NonSquareError,
    NotReciprocalError,
)
from effhull.models import (
    MonomialTransform,
    PositiveVector,
    ReciprocalMatrix,
    to_zero_based,
)
from effhull.utils.logger import get_logger

logger = get_logger(__name__)


def validate_reciprocal(raw, cfg: Optional[ToleranceConfig] = None) -> ReciprocalMatrix:
    """Check an untrusted matrix and return it with exact reciprocity.

    The lower triangle and diagonal are checked against the upper triangle
    within ``cfg.rtol`` and then overwritten from it.
    """
    cfg = cfg or settings
    arr = np.asarray(raw, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
        raise NonSquareError(f"expected a non-empty square matrix, got shape {arr.shape}")
    bad = np.argwhere(~np.isfinite(arr) | (arr <= 0))
    if bad.size:
        i, j = bad[0]
        raise NonPositiveEntryError(f"entry ({i + 1},{j + 1}) is not positive ({arr[i, j]!r})")

    residual = np.abs(arr * arr.T - 1.0)
    if residual.max() > cfg.rtol:
        # report the worst offender with the lower-triangle index first
        i, j = np.unravel_index(int(np.argmax(np.tril(residual))), residual.shape)
        raise NotReciprocalError(int(i) + 1, int(j) + 1, float(residual[i, j]))

    return ReciprocalMatrix(arr)


def consistent_from_weights(w: PositiveVector) -> ReciprocalMatrix:
    """C with c_ij = w_i / w_j."""
    e = w.entries
    return ReciprocalMatrix(e[:, None] / e[None, :])


def consistency_gap(A: ReciprocalMatrix) -> float:
    """max over i, j, k of |a_ij·a_jk / a_ik − 1|."""
    a = A.entries
    ratio = a[:, :, None] * a[None, :, :] / a[:, None, :]
    return float(np.abs(ratio - 1.0).max())


def is_consistent(A: ReciprocalMatrix, cfg: Optional[ToleranceConfig] = None) -> bool:
    cfg = cfg or settings
    # a consistent matrix is determined by any of its columns
    w = A.entries[:, 0]
    quick = np.abs(A.entries * w[None, :] / w[:, None] - 1.0).max()
    if quick > 2 * cfg.rtol:
        return False
    return consistency_gap(A) <= cfg.rtol


def principal_submatrix(
    A: ReciprocalMatrix,
    K: Iterable[int],
    mode: Literal["retain", "delete"] = "retain",
) -> ReciprocalMatrix:
    """A[K] (retain) or A(K) (delete); K holds 1-based indices."""
    chosen = to_zero_based(K, A.n)
    if mode == "retain":
        keep = chosen
    elif mode == "delete":
        drop = set(chosen)
        keep = [k for k in range(A.n) if k not in drop]
    else:
        raise ValueError(f"unknown mode {mode!r}")
    if not keep:
        raise EmptyResultError(f"{mode} of {sorted(k + 1 for k in chosen)} leaves an empty matrix")
    return ReciprocalMatrix(A.entries[np.ix_(keep, keep)])


def monomial_similarity(A: ReciprocalMatrix, T: MonomialTransform) -> ReciprocalMatrix:
    """S·A·S⁻¹ for S = P·diag(scale)."""
    if T.n != A.n:
        raise DimensionMismatchError(f"transform of size {T.n} for a {A.n}x{A.n} matrix")
    d = T.scale.entries
    scaled = d[:, None] * A.entries / d[None, :]
    out = np.empty_like(scaled)
    idx = list(T.perm)
    out[np.ix_(idx, idx)] = scaled
    return ReciprocalMatrix(out)


def apply_to_vector(T: MonomialTransform, w: PositiveVector) -> PositiveVector:
    """S·w, the vector matching ``monomial_similarity(A, T)``."""
    return T.apply_to_vector(w)


def diagonal_normalization(A: ReciprocalMatrix, j: int) -> MonomialTransform:
    """Transform for D⁻¹AD with D = diag(column j); row and column j become ones."""
    return MonomialTransform.diagonal(1.0 / A.column(j).entries)


def perturbed_positions(A: ReciprocalMatrix, cfg: Optional[ToleranceConfig] = None) -> list[tuple[int, int]]:
    """Above-diagonal 1-based positions whose entry differs from one beyond rtol."""
    cfg = cfg or settings
    marked = np.abs(A.entries - 1.0) > cfg.rtol
    return [(i + 1, j + 1) for i, j in combinations(range(A.n), 2) if marked[i, j]]


# ── Canonical-form constructors ──────────────────────────────────────────────

def block_matrix(n: int, B) -> ReciprocalMatrix:
    """A_n(B): B in the leading block, ones everywhere else."""
    B = np.asarray(B.entries if isinstance(B, ReciprocalMatrix) else B, dtype=float)
    s = B.shape[0]
    if n < s:
        raise DimensionMismatchError(f"n={n} is smaller than the block size {s}")
    out = np.ones((n, n))
    out[:s, :s] = B
    return ReciprocalMatrix(out)


def simple_perturbed_matrix(n: int, x: float) -> ReciprocalMatrix:
    """S_n(x): a single perturbed pair at (1,2)."""
    return block_matrix(n, [[1.0, x], [1.0 / x, 1.0]])


def three_block_matrix(n: int, a12: float, a13: float, a23: float) -> ReciprocalMatrix:
    """The 3-block form with the given leading parameters."""
    return block_matrix(n, [
        [1.0, a12, a13],
        [1.0 / a12, 1.0, a23],
        [1.0 / a13, 1.0 / a23, 1.0],
    ])


def triangular_matrix(n: int, a13: float, a14: float, a24: float) -> ReciprocalMatrix:
    """The 4-block triangular form: perturbed pairs at (1,3), (1,4), (2,4)."""
    B = np.ones((4, 4))
    B[0, 2], B[0, 3], B[1, 3] = a13, a14, a24
    return block_matrix(n, B)
