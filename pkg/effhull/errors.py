"""
Exception hierarchy.  Every error raised by the package derives from
`EffHullError`; indices carried in messages are 1-based.
"""


class EffHullError(Exception):
    """Base class for all package errors."""


# ── Matrix / vector construction ─────────────────────────────────────────────

class MatrixFormatError(EffHullError):
    """Raised when a matrix or vector file cannot be parsed."""


class NonSquareError(EffHullError):
    """Raised when a matrix is not square."""


class NonPositiveEntryError(EffHullError):
    """Raised when an entry that must be positive is not."""


class NotReciprocalError(EffHullError):
    """Raised when ``a_ij * a_ji`` deviates from 1 by more than rtol."""

    def __init__(self, i: int, j: int, residual: float):
        self.i = i
        self.j = j
        self.residual = residual
        super().__init__(
            f"entries ({i},{j}) and ({j},{i}) are not reciprocal "
            f"(|a_ij*a_ji - 1| = {residual:.6g})"
        )


class EmptyResultError(EffHullError):
    """Raised when a principal submatrix would have no rows."""


class IndexOutOfRangeError(EffHullError):
    """Raised when an index lies outside ``1..n``."""


class DimensionMismatchError(EffHullError):
    """Raised when operand dimensions disagree."""


class DimensionTooSmallError(EffHullError):
    """Raised when an operation needs a larger matrix."""


class DimensionTooLargeError(EffHullError):
    """Raised when an operation is capped below the given size."""


# ── Theory preconditions ─────────────────────────────────────────────────────

class PreconditionViolatedError(EffHullError):
    """Raised when inputs do not satisfy the documented precondition."""


class NotTriplePerturbedError(EffHullError):
    """Raised when a matrix is not a triple perturbation inside a 4-by-4 block."""


class CanonicalizationFailedError(EffHullError):
    """Raised when no admissible canonical permutation exists (a classification bug)."""


class ConditionViolatedError(EffHullError):
    """Raised when 3-block parameters satisfy none of the four canonical conditions."""


class FormViolatedError(EffHullError):
    """Raised when the last row/column of a matrix is not all ones."""


class NotEfficientError(EffHullError):
    """Raised when a vector expected to be efficient is not."""


class DegenerateXError(EffHullError):
    """Raised when x = 1 but the vector is not constant."""


# ── Witness search / numerics ────────────────────────────────────────────────

class HullContainedError(EffHullError):
    """Raised when a witness is requested but the column hull is contained in E(A)."""


class SearchExhaustedError(EffHullError):
    """Raised when the ε-search runs out of steps."""


class NoConvergenceError(EffHullError):
    """Raised when power iteration hits its iteration cap."""

    def __init__(self, max_iters: int, residual: float):
        self.max_iters = max_iters
        self.residual = residual
        super().__init__(
            f"power iteration did not converge in {max_iters} iterations "
            f"(last relative change {residual:.3g})"
        )
