"""Published example matrices and their diagonal disguises."""

import numpy as np

from effhull.models import MonomialTransform, ReciprocalMatrix
from effhull.services.matrix_core import block_matrix, monomial_similarity

D1_DIAGONAL = (1.5, 4.0, 0.5, 1.0, 1.0, 1.0, 1.0, 1.0)
D2_DIAGONAL = (0.3, 0.4, 0.7, 1.0, 1.0, 1.0, 1.0, 1.0)

EXAMPLE_BLOCK = (
    (1.0, 4.0, 3.0),
    (1 / 4, 1.0, 2.0),
    (1 / 3, 1 / 2, 1.0),
)


def worked_example_4x4() -> ReciprocalMatrix:
    """4×4 matrix whose column-sum vector A·[1,1,1,0] is inefficient."""
    return ReciprocalMatrix([
        [1.0, 4.0, 1 / 6, 1.0],
        [1 / 4, 1.0, 5.0, 1.0],
        [6.0, 1 / 5, 1.0, 1.0],
        [1.0, 1.0, 1.0, 1.0],
    ])


def three_block_example_8x8() -> ReciprocalMatrix:
    """A_8(B) with B the 3-block (a12, a13, a23) = (4, 3, 2)."""
    return block_matrix(8, EXAMPLE_BLOCK)


def diagonal_variant(A: ReciprocalMatrix, d) -> ReciprocalMatrix:
    """D⁻¹·A·D for D = diag(d)."""
    return monomial_similarity(A, MonomialTransform.diagonal(1.0 / np.asarray(d, dtype=float)))


def example_matrices() -> dict[str, ReciprocalMatrix]:
    """The three matrices of the comparison runs, keyed by name."""
    A = three_block_example_8x8()
    return {
        "A": A,
        "D1": diagonal_variant(A, D1_DIAGONAL),
        "D2": diagonal_variant(A, D2_DIAGONAL),
    }
