"""
Seeded Monte Carlo experiments.

  * `compare_run`            divergence of convex vs geometric combinations.
  * `inefficiency_count`     inefficient convex combinations per a13 cell.
  * `perron_efficiency_grid` Perron / singular / arithmetic-mean verdicts.

Trial t always draws from ``SeedSequence(seed, spawn_key=(t,))``, so the same
α is used for every a13 cell and every matrix of a comparison, and serial and
threaded runs give identical counts.
"""

from concurrent.futures import ThreadPoolExecutor
from typing import Iterable, Literal, Optional, Sequence

import numpy as np

from effhull.config import ToleranceConfig, settings
from effhull.errors import PreconditionViolatedError
from effhull.models import (
    ComparisonReport,
    CountEntry,
    CountReport,
    PerronGrid,
    PerronGridCell,
    PositiveVector,
    ReciprocalMatrix,
    TrialRecord,
    WeightVector,
)
from effhull.services.efficiency import edge_matrix, is_efficient, strongly_connected
from effhull.services.generators import (
    convex_combination,
    mean_columns,
    perron_vector,
    reference_vectors,
    singular_vector,
    weighted_geometric_mean,
)
from effhull.services.matrix_core import three_block_matrix, triangular_matrix
from effhull.services.perturbed import hull_subset_efficient
from effhull.utils.logger import get_logger

logger = get_logger(__name__)

TABLE2_N = (4, 8, 20, 100)
TABLE2_A13 = (8.2, 9.0, 12.0, 20.0, 50.0, 100.0, 1000.0, 10000.0)


# ── Sampling and divergence ──────────────────────────────────────────────────

def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Independent substream for one trial."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(trial,)))


def sample_simplex(n: int, rng: np.random.Generator) -> WeightVector:
    """n uniform(0,1) draws normalised to unit sum."""
    if n < 1:
        raise PreconditionViolatedError(f"n must be >= 1, got {n}")
    return WeightVector(rng.uniform(0.0, 1.0, size=n))


def divergence(A: ReciprocalMatrix, w: PositiveVector) -> float:
    """Frobenius norm of [w_i / w_j − a_ij]."""
    A.check_dim(w)
    e = w.entries
    return float(np.linalg.norm(e[:, None] / e[None, :] - A.entries))


# ── Comparison runs ──────────────────────────────────────────────────────────

def compare_run(
    A: ReciprocalMatrix,
    trials: Optional[int] = None,
    seed: int = 0,
    cfg: Optional[ToleranceConfig] = None,
    label: str = "A",
) -> ComparisonReport:
    cfg = cfg or settings
    if trials is None:
        trials = cfg.compare_trials
    if trials < 0:
        raise PreconditionViolatedError(f"trials must be >= 0, got {trials}")
    records = []
    for t in range(trials):
        alpha = sample_simplex(A.n, trial_rng(seed, t))
        convex = convex_combination(A, alpha)
        geometric = weighted_geometric_mean(A, alpha)
        geometric_ok = is_efficient(A, geometric, cfg).efficient
        if not geometric_ok:
            logger.warning("Weighted geometric mean of trial %d is inefficient for %s.", t, label)
        records.append(TrialRecord(
            trial_index=t,
            alpha=alpha.tolist(),
            norm_convex=divergence(A, convex),
            norm_geometric=divergence(A, geometric),
            convex_efficient=is_efficient(A, convex, cfg).efficient,
            geometric_efficient=geometric_ok,
        ))
    norms = {name: divergence(A, v) for name, v in reference_vectors(A, cfg).items()}
    logger.info("Comparison run %s: %d trials, seed %d.", label, trials, seed)
    return ComparisonReport(matrix=label, n=A.n, seed=seed, trials=records, reference_norms=norms)


# ── Inefficiency counts ──────────────────────────────────────────────────────

def _count_inefficient(A: ReciprocalMatrix, trial_ids: Iterable[int], seed: int, tol: float) -> int:
    a = A.entries
    count = 0
    for t in trial_ids:
        alpha = sample_simplex(A.n, trial_rng(seed, t)).alpha
        if not strongly_connected(edge_matrix(a, a @ alpha, tol)):
            count += 1
    return count


def count_inefficient(A: ReciprocalMatrix, trials: int, seed: int, cfg: Optional[ToleranceConfig] = None) -> int:
    """Inefficient A·α among ``trials`` simplex draws, split over ``cfg.workers`` threads."""
    cfg = cfg or settings
    if cfg.workers <= 1 or trials < 2 * cfg.workers:
        return _count_inefficient(A, range(trials), seed, cfg.edge_rtol)
    chunks = [range(k, trials, cfg.workers) for k in range(cfg.workers)]
    with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
        return sum(pool.map(lambda ids: _count_inefficient(A, ids, seed, cfg.edge_rtol), chunks))


def _family_matrix(family: str, n: int, a13: float, a12, a23, a14, a24) -> ReciprocalMatrix:
    if family == "three-block":
        return three_block_matrix(n, a12, a13, a23)
    if family == "triangular":
        if n < 5:
            raise PreconditionViolatedError("the triangular family needs n >= 5")
        return triangular_matrix(n, a13, a14, a24)
    raise ValueError(f"unknown family {family!r}")


def _vector_verdicts(A: ReciprocalMatrix, cfg: ToleranceConfig) -> dict[str, bool]:
    return {
        "perron_efficient": is_efficient(A, perron_vector(A, cfg).vector, cfg).efficient,
        "singular_efficient": is_efficient(A, singular_vector(A, cfg), cfg).efficient,
        "arith_mean_efficient": is_efficient(A, mean_columns(A, "arithmetic"), cfg).efficient,
    }


def inefficiency_count(
    n: int,
    a12: Optional[float] = 4.0,
    a23: Optional[float] = 2.0,
    a13_list: Sequence[float] = TABLE2_A13,
    trials: Optional[int] = None,
    seed: int = 0,
    cfg: Optional[ToleranceConfig] = None,
    family: Literal["three-block", "triangular"] = "three-block",
    a14: Optional[float] = None,
    a24: Optional[float] = None,
) -> CountReport:
    """Count inefficient convex combinations of the columns for each a13."""
    cfg = cfg or settings
    if trials is None:
        trials = cfg.default_trials
    if trials < 0:
        raise PreconditionViolatedError(f"trials must be >= 0, got {trials}")
    if family == "triangular" and (a14 is None or a24 is None):
        raise PreconditionViolatedError("the triangular family needs a14 and a24")
    entries = []
    for a13 in a13_list:
        A = _family_matrix(family, n, a13, a12, a23, a14, a24)
        count = count_inefficient(A, trials, seed, cfg)
        contained = hull_subset_efficient(A, cfg).contained == "yes"
        if contained and count:
            logger.warning("n=%d a13=%g: %d inefficient combinations although the hull is contained.", n, a13, count)
        entries.append(CountEntry(
            a13=a13, trials=trials, inefficient_count=count, hull_contained=contained, **_vector_verdicts(A, cfg),
        ))
        logger.info("Cell n=%d a13=%g: %d/%d inefficient.", n, a13, count, trials)
    if family == "three-block":
        return CountReport(family=family, n=n, a12=a12, a23=a23, seed=seed, entries=entries)
    return CountReport(family=family, n=n, a14=a14, a24=a24, seed=seed, entries=entries)


def perron_efficiency_grid(
    n_list: Sequence[int] = TABLE2_N,
    a12: float = 4.0,
    a23: float = 2.0,
    a13_list: Sequence[float] = TABLE2_A13,
    cfg: Optional[ToleranceConfig] = None,
) -> PerronGrid:
    """Deterministic efficiency verdicts of w_P, w_s and w_sum per (n, a13)."""
    cfg = cfg or settings
    cells = []
    for n in n_list:
        for a13 in a13_list:
            A = three_block_matrix(n, a12, a13, a23)
            cells.append(PerronGridCell(n=n, a13=a13, **_vector_verdicts(A, cfg)))
    return PerronGrid(a12=a12, a23=a23, cells=cells)
