"""
Efficiency service: decides whether a positive vector is Pareto efficient
for a reciprocal matrix.

  * `is_efficient`            digraph criterion: G(A,w) strongly connected.
  * `is_efficient_recursive`  inductive criterion over (n−1)-subsets (test oracle).
  * `efficient_3x3`, `efficient_simple_perturbed`   closed-form chains.

Every non-strict comparison ``x ≤ y`` is evaluated as ``x·(1 − edge_rtol) ≤ y``,
the same rule the digraph uses for its edges.
"""

from functools import lru_cache
from typing import Literal, Optional

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from effhull.config import ToleranceConfig, settings
from effhull.errors import (
    DimensionMismatchError,
    DimensionTooLargeError,
    DimensionTooSmallError,
    PreconditionViolatedError,
)
from effhull.models import (
    EfficiencyCertificate,
    EfficiencyDigraph,
    PositiveVector,
    ReciprocalMatrix,
    to_zero_based,
)
from effhull.services.matrix_core import principal_submatrix
from effhull.utils.logger import get_logger

logger = get_logger(__name__)


def leq(x, y, tol: float):
    """Tolerant ``x ≤ y`` for positive quantities."""
    return x * (1.0 - tol) <= y


# ── Digraph criterion ────────────────────────────────────────────────────────

def edge_matrix(a: np.ndarray, w: np.ndarray, tol: float) -> np.ndarray:
    """Boolean adjacency of G(A,w) on raw arrays."""
    adj = w[:, None] >= a * w[None, :] * (1.0 - tol)
    np.fill_diagonal(adj, False)
    return adj


def build_digraph(
    A: ReciprocalMatrix, w: PositiveVector, cfg: Optional[ToleranceConfig] = None
) -> EfficiencyDigraph:
    """G(A,w): edge i→j iff w_i ≥ a_ij·w_j (within edge_rtol)."""
    cfg = cfg or settings
    A.check_dim(w)
    return EfficiencyDigraph(edge_matrix(A.entries, w.entries, cfg.edge_rtol))


def strongly_connected(adj: np.ndarray) -> bool:
    """Fast path used by the experiments: one strong component or not."""
    count, _ = connected_components(csr_matrix(adj), directed=True, connection="strong")
    return count == 1


def certificate_from_digraph(G: EfficiencyDigraph, method: str = "digraph") -> EfficiencyCertificate:
    """Strong components of G and, if there are several, a sink or source witness."""
    adj = G.adjacency
    count, labels = connected_components(csr_matrix(adj), directed=True, connection="strong")
    members = [np.flatnonzero(labels == c) for c in range(count)]
    components = sorted(([int(k) + 1 for k in m] for m in members), key=min)
    if count == 1:
        return EfficiencyCertificate(n=G.n, verdict="efficient", method=method, components=components)

    sinks, sources = [], []
    for m in members:
        inside = np.zeros(G.n, dtype=bool)
        inside[m] = True
        if not adj[np.ix_(inside, ~inside)].any():
            sinks.append(m)
        if not adj[np.ix_(~inside, inside)].any():
            sources.append(m)
    # a finite condensation always has at least one sink
    kind, chosen = ("sink", sinks) if sinks else ("source", sources)
    witness = min(([int(k) + 1 for k in m] for m in chosen), key=min)
    return EfficiencyCertificate(
        n=G.n,
        verdict="inefficient",
        method=method,
        witness=witness,
        witness_kind=kind,
        components=components,
    )


def is_efficient(
    A: ReciprocalMatrix, w: PositiveVector, cfg: Optional[ToleranceConfig] = None
) -> EfficiencyCertificate:
    """w is efficient for A iff G(A,w) is strongly connected."""
    return certificate_from_digraph(build_digraph(A, w, cfg))


# ── Closed forms ─────────────────────────────────────────────────────────────

def _chain_3x3(a: np.ndarray, w: np.ndarray, tol: float) -> bool:
    a12, a13, a23 = a[0, 1], a[0, 2], a[1, 2]
    w1, w2, w3 = w
    forward = (
        leq(a23 * w3, w2, tol)
        and leq(w2, w1 / a12, tol)
        and leq(w1 / a12, a13 / a12 * w3, tol)
    )
    if forward:
        return True
    return bool(
        leq(w2, a23 * w3, tol)
        and leq(w1 / a12, w2, tol)
        and leq(a13 / a12 * w3, w1 / a12, tol)
    )


def efficient_3x3(
    A: ReciprocalMatrix, w: PositiveVector, cfg: Optional[ToleranceConfig] = None
) -> bool:
    """a23·w3 ≤ w2 ≤ w1/a12 ≤ (a13/a12)·w3, or the reversed chain."""
    cfg = cfg or settings
    if A.n != 3:
        raise DimensionMismatchError(f"efficient_3x3 needs a 3x3 matrix, got n={A.n}")
    A.check_dim(w)
    return _chain_3x3(A.entries, w.entries, cfg.edge_rtol)


def efficient_simple_perturbed(
    x: float, w: PositiveVector, cfg: Optional[ToleranceConfig] = None
) -> bool:
    """Efficiency for S_n(x): w2 ≤ w_k ≤ w1 ≤ x·w2 (k ≥ 3), or the reverse."""
    cfg = cfg or settings
    if w.n < 3:
        raise DimensionTooSmallError(f"S_n(x) needs n >= 3, got {w.n}")
    tol = cfg.edge_rtol
    e = w.entries
    w1, w2, rest = e[0], e[1], e[2:]
    up = (
        np.all(leq(w2, rest, tol))
        and np.all(leq(rest, w1, tol))
        and leq(w1, x * w2, tol)
    )
    down = (
        np.all(leq(rest, w2, tol))
        and np.all(leq(w1, rest, tol))
        and leq(x * w2, w1, tol)
    )
    return bool(up or down)


# ── Inductive criterion ──────────────────────────────────────────────────────

def is_efficient_recursive(
    A: ReciprocalMatrix, w: PositiveVector, cfg: Optional[ToleranceConfig] = None
) -> bool:
    """w efficient iff w(i), w(j) are efficient for A(i), A(j) for some i ≠ j.

    Memoised on index subsets; the base case is the 3-by-3 chain.
    """
    cfg = cfg or settings
    A.check_dim(w)
    if A.n < 3:
        raise DimensionTooSmallError(f"the recursive test needs n >= 3, got {A.n}")
    if A.n > cfg.recursive_max_n:
        raise DimensionTooLargeError(
            f"the recursive test is capped at n={cfg.recursive_max_n}, got {A.n}"
        )
    a, x, tol = A.entries, w.entries, cfg.edge_rtol

    @lru_cache(maxsize=None)
    def efficient_on(idx: tuple[int, ...]) -> bool:
        if len(idx) == 3:
            sel = list(idx)
            return _chain_3x3(a[np.ix_(sel, sel)], x[sel], tol)
        hits = 0
        for k in idx:
            if efficient_on(tuple(i for i in idx if i != k)):
                hits += 1
                if hits == 2:
                    return True
        return False

    return efficient_on(tuple(range(A.n)))


def check_efficiency(
    A: ReciprocalMatrix,
    w: PositiveVector,
    method: Literal["digraph", "recursive", "closed-form"] = "digraph",
    cfg: Optional[ToleranceConfig] = None,
) -> EfficiencyCertificate:
    """Certificate by the requested method; witnesses always come from G(A,w)."""
    cfg = cfg or settings
    cert = is_efficient(A, w, cfg)
    if method == "digraph":
        return cert
    if method == "recursive":
        verdict = is_efficient_recursive(A, w, cfg)
    elif method == "closed-form":
        verdict = efficient_3x3(A, w, cfg)
    else:
        raise ValueError(f"unknown method {method!r}")
    if verdict != cert.efficient:
        logger.warning("%s verdict %s disagrees with the digraph test.", method, verdict)
        if not verdict:
            # no digraph witness to attach
            raise PreconditionViolatedError(
                f"{method} test reports inefficiency but G(A,w) is strongly connected"
            )
        return EfficiencyCertificate(n=A.n, verdict="efficient", method=method, components=cert.components)
    return cert.model_copy(update={"method": method})


# ── Block reduction ──────────────────────────────────────────────────────────

def leading_block_size(A: ReciprocalMatrix, cfg: Optional[ToleranceConfig] = None) -> int:
    """Smallest s such that A = A_n(B) with B = A[{1..s}] (ones outside B)."""
    cfg = cfg or settings
    off = np.abs(A.entries - 1.0) > cfg.rtol
    rows = np.flatnonzero(off.any(axis=1))
    return int(rows.max()) + 1 if rows.size else 0


def reduce_equal_tail(
    A: ReciprocalMatrix,
    w: PositiveVector,
    p: int,
    q: int,
    block_size: Optional[int] = None,
    cfg: Optional[ToleranceConfig] = None,
) -> tuple[ReciprocalMatrix, PositiveVector]:
    """(A(p), w(p)) for A = A_n(B) and w_p = w_q with p, q outside the block.

    w is efficient for A iff w(p) is efficient for A(p).
    """
    cfg = cfg or settings
    A.check_dim(w)
    s = leading_block_size(A, cfg) if block_size is None else block_size
    if block_size is not None and leading_block_size(A, cfg) > block_size:
        raise PreconditionViolatedError(f"A has entries other than one outside the leading {s}-block")
    p0, q0 = to_zero_based([p], A.n)[0], to_zero_based([q], A.n)[0]
    if p0 == q0:
        raise PreconditionViolatedError("p and q must differ")
    if p0 < s or q0 < s:
        raise PreconditionViolatedError(f"p={p}, q={q} must lie outside the leading {s}-block")
    wp, wq = w.entries[p0], w.entries[q0]
    if abs(wp - wq) > cfg.rtol * max(wp, wq):
        raise PreconditionViolatedError(f"w_{p} = {wp!r} and w_{q} = {wq!r} differ")
    return principal_submatrix(A, [p], mode="delete"), w.delete([p])
