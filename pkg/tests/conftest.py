import numpy as np
import pytest

from effhull.config import ToleranceConfig
from effhull.models import MonomialTransform, PositiveVector, ReciprocalMatrix
from effhull.services.catalog import example_matrices, worked_example_4x4
from effhull.services.matrix_core import monomial_similarity


def random_reciprocal(n: int, rng: np.random.Generator, spread: float = 9.0) -> ReciprocalMatrix:
    """Upper-triangle entries log-uniform in [1/spread, spread]."""
    upper = np.exp(rng.uniform(-np.log(spread), np.log(spread), size=(n, n)))
    return ReciprocalMatrix(np.triu(upper, 1) + np.tril(np.ones((n, n))))


def random_disguise(A: ReciprocalMatrix, rng: np.random.Generator) -> tuple[ReciprocalMatrix, MonomialTransform]:
    """Random permutation and diagonal scaling of A."""
    T = MonomialTransform(tuple(rng.permutation(A.n)), PositiveVector(np.exp(rng.uniform(-1.5, 1.5, size=A.n))))
    return monomial_similarity(A, T), T


@pytest.fixture
def cfg():
    return ToleranceConfig()


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture
def worked_example():
    return worked_example_4x4()


@pytest.fixture
def example_8x8():
    return example_matrices()["A"]


@pytest.fixture
def example_family():
    return example_matrices()


@pytest.fixture
def make_reciprocal():
    return random_reciprocal


@pytest.fixture
def disguise():
    return random_disguise
