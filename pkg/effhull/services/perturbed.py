"""
Perturbed-consistent structure: detection, canonical forms and the hull
containment verdict.

`detect_block_structure` normalises A by each of its columns, keeps the
normalisation with the smallest perturbed block and pushes that block to the
top-left.  The kind is read off the graph of perturbed pairs:

    one pair                       simple
    three indices                  three-block
    pairs sharing one vertex       column-perturbed
    4-vertex path / 2 disjoint     four-block-triangular
    anything else                  general-s-block (s < n) or unstructured
"""

from itertools import combinations, permutations
from typing import NamedTuple, Optional

import numpy as np

from effhull.config import ToleranceConfig, settings
from effhull.errors import (
    CanonicalizationFailedError,
    EffHullError,
    NotTriplePerturbedError,
    PreconditionViolatedError,
)
from effhull.models import (
    BlockClassification,
    BlockKind,
    HullVerdict,
    MonomialTransform,
    PositiveVector,
    ReciprocalMatrix,
    WeightVector,
)
from effhull.services.conditions import (
    cond11_label,
    hull_in_efficient_3block,
    hull_in_efficient_triangular,
    lt,
)
from effhull.services.efficiency import is_efficient, leading_block_size
from effhull.services.matrix_core import (
    diagonal_normalization,
    monomial_similarity,
    principal_submatrix,
)
from effhull.services.witnesses import rowsum_witness, witness_3block, witness_triangular
from effhull.utils.logger import get_logger

logger = get_logger(__name__)


class CanonicalTriple(NamedTuple):
    """Canonical parameters plus the transform that produces them."""

    params: dict[str, float]
    transform: MonomialTransform
    condition: Optional[str] = None


# ── Pair patterns ────────────────────────────────────────────────────────────

def _marked_pairs(a: np.ndarray, tol: float) -> list[tuple[int, int]]:
    i, j = np.nonzero(np.triu(np.abs(a - 1.0) > tol, k=1))
    return list(zip(i.tolist(), j.tolist()))


def _degrees(pairs) -> dict[int, int]:
    deg: dict[int, int] = {}
    for p, q in pairs:
        deg[p] = deg.get(p, 0) + 1
        deg[q] = deg.get(q, 0) + 1
    return deg


def _is_star(pairs) -> bool:
    if len(pairs) < 2:
        return False
    common = set(pairs[0])
    for pair in pairs[1:]:
        common &= set(pair)
    return bool(common)


def _pattern(pairs, s: int) -> BlockKind:
    if s == 0:
        return BlockKind.CONSISTENT
    if len(pairs) == 1:
        return BlockKind.SIMPLE
    if s == 3:
        return BlockKind.THREE_BLOCK
    if _is_star(pairs):
        return BlockKind.COLUMN_PERTURBED
    if s == 4 and len(pairs) in (2, 3):
        # two disjoint pairs, or three pairs without a common vertex and no
        # triangle (a triangle would span only three indices): a path
        return BlockKind.FOUR_BLOCK_TRIANGULAR
    return BlockKind.GENERAL_S_BLOCK


# ── Detection ────────────────────────────────────────────────────────────────

def _normalised_candidate(A: ReciprocalMatrix, j: int, tol: float):
    T = diagonal_normalization(A, j + 1)
    B = monomial_similarity(A, T)
    pairs = _marked_pairs(B.entries, tol)
    block = sorted({k for pair in pairs for k in pair})
    return T, block, pairs


def detect_block_structure(A: ReciprocalMatrix, cfg: Optional[ToleranceConfig] = None) -> BlockClassification:
    """Minimal perturbed principal block over all column normalisations."""
    cfg = cfg or settings
    n = A.n
    best = None
    for j in range(n):
        T, block, pairs = _normalised_candidate(A, j, cfg.rtol)
        key = (len(block), len(pairs), j)
        if best is None or key < best[0]:
            best = (key, T, block, pairs)
    _, T, block, pairs = best

    order = block + [k for k in range(n) if k not in block]
    transform = T.then(MonomialTransform.ordering(order))
    canonical = monomial_similarity(A, transform)
    position = {old: new for new, old in enumerate(order)}
    pairs = sorted(tuple(sorted((position[p], position[q]))) for p, q in pairs)

    s = len(block)
    kind = _pattern(pairs, s)
    if kind == BlockKind.GENERAL_S_BLOCK and s == n:
        kind = BlockKind.UNSTRUCTURED
    cls = BlockClassification(
        kind=kind,
        block_indices=tuple(k + 1 for k in block),
        transform=transform,
        canonical=canonical,
        perturbed_pairs=tuple((p + 1, q + 1) for p, q in pairs),
    )
    logger.debug("Detected %s block of size %d (pairs=%s).", kind.value, s, cls.perturbed_pairs)
    try:
        return _refine(cls, cfg)
    except CanonicalizationFailedError as exc:
        logger.warning("Canonical form not found for %s: %s", kind.value, exc)
        return _replace(cls, note=str(exc))


def _refine(cls: BlockClassification, cfg: ToleranceConfig) -> BlockClassification:
    """Attach canonical parameters to the families that have them."""
    a = cls.canonical.entries
    if cls.kind == BlockKind.SIMPLE:
        p, q = cls.perturbed_pairs[0]
        return _replace(cls, params={"x": float(a[p - 1, q - 1])})
    if cls.kind == BlockKind.THREE_BLOCK:
        canon = canonicalize_3block(cls.canonical, cfg)
        return _compose(cls, canon, cfg)
    if cls.kind == BlockKind.FOUR_BLOCK_TRIANGULAR and cls.canonical.n >= 5:
        canon = canonicalize_4block_triangular(cls.canonical, cfg)
        return _compose(cls, canon, cfg)
    if cls.kind == BlockKind.COLUMN_PERTURBED:
        centre = set(cls.perturbed_pairs[0]).intersection(*map(set, cls.perturbed_pairs[1:]))
        return _replace(cls, note=f"perturbed row/column {min(centre)}")
    if cls.kind == BlockKind.GENERAL_S_BLOCK:
        return _replace(cls, params={"s": float(cls.s)})
    return cls


def _replace(cls: BlockClassification, **changes) -> BlockClassification:
    fields = {
        "kind": cls.kind,
        "block_indices": cls.block_indices,
        "transform": cls.transform,
        "canonical": cls.canonical,
        "perturbed_pairs": cls.perturbed_pairs,
        "params": cls.params,
        "condition": cls.condition,
        "note": cls.note,
    }
    fields.update(changes)
    return BlockClassification(**fields)


def _compose(cls: BlockClassification, canon: CanonicalTriple, cfg: ToleranceConfig) -> BlockClassification:
    transform = cls.transform.then(canon.transform)
    canonical = monomial_similarity(cls.canonical, canon.transform)
    pairs = tuple((p + 1, q + 1) for p, q in sorted(_marked_pairs(canonical.entries, cfg.rtol)))
    note = None
    if canon.condition is not None:
        note = f"first admissible permutation in lexicographic order satisfies condition {canon.condition})"
    return _replace(
        cls,
        transform=transform,
        canonical=canonical,
        perturbed_pairs=pairs,
        params=canon.params,
        condition=canon.condition,
        note=note,
    )


def classify_triple(A: ReciprocalMatrix, cfg: Optional[ToleranceConfig] = None) -> BlockClassification:
    """Classification of a matrix with at most three perturbed pairs inside a 4-block."""
    cls = detect_block_structure(A, cfg)
    if cls.s > 4 or len(cls.perturbed_pairs) > 3:
        raise NotTriplePerturbedError(
            f"{len(cls.perturbed_pairs)} perturbed pairs in a block of size {cls.s}"
        )
    return cls


# ── Canonical forms ──────────────────────────────────────────────────────────

def canonicalize_3block(A: ReciprocalMatrix, cfg: Optional[ToleranceConfig] = None) -> CanonicalTriple:
    """First permutation of the leading 3-block, in lexicographic order, meeting i)–iv)."""
    cfg = cfg or settings
    if leading_block_size(A, cfg) > 3:
        raise PreconditionViolatedError("A has entries other than one outside its leading 3-block")
    a = A.entries
    for order in permutations(range(3)):
        o0, o1, o2 = order
        a12, a13, a23 = float(a[o0, o1]), float(a[o0, o2]), float(a[o1, o2])
        label = cond11_label(a12, a13, a23, cfg)
        if label is not None:
            transform = MonomialTransform.ordering(list(order) + list(range(3, A.n)))
            return CanonicalTriple({"a12": a12, "a13": a13, "a23": a23}, transform, label)
    raise CanonicalizationFailedError("no permutation of the leading 3-block meets conditions i)-iv)")


def _block_order(pairs: list[tuple[int, int]]) -> list[list[int]]:
    """Candidate orders [y, t, x, z] sending the 4-block pattern to (1,3), (1,4), (2,4)."""
    deg = _degrees(pairs)
    if len(pairs) == 2 and len(deg) == 4:
        (p, q), (r, s) = pairs
        return [[p, r, q, s], [r, p, s, q]]
    if len(pairs) == 2 and len(deg) == 3:
        # two-edge path x-y-z; the free index 3 closes it with a unit entry
        y = next(k for k, d in deg.items() if d == 2)
        x, z = sorted(k for k, d in deg.items() if d == 1)
        free = next(k for k in range(4) if k not in deg)
        return [[y, free, x, z], [z, x, free, y]]
    if len(pairs) == 3 and sorted(deg.values()) == [1, 1, 2, 2]:
        adj: dict[int, list[int]] = {k: [] for k in deg}
        for p, q in pairs:
            adj[p].append(q)
            adj[q].append(p)
        x, t = sorted(k for k, d in deg.items() if d == 1)
        y = adj[x][0]
        z = next(k for k in adj[y] if k != x)
        return [[y, t, x, z], [z, x, t, y]]
    return []


def canonicalize_4block_triangular(A: ReciprocalMatrix, cfg: Optional[ToleranceConfig] = None) -> CanonicalTriple:
    """(a13, a14, a24) with a14 ≥ 1 and the transform onto the triangular form.

    The two orientations of the pattern differ by the block reversal
    (1↔4, 2↔3), which maps (a13, a14, a24) to (1/a24, 1/a14, 1/a13).
    """
    cfg = cfg or settings
    if A.n < 4 or leading_block_size(A, cfg) > 4:
        raise PreconditionViolatedError("A has entries other than one outside its leading 4-block")
    a = A.entries
    pairs = _marked_pairs(a[:4, :4], cfg.rtol)
    candidates = _block_order(pairs)
    if not candidates:
        raise CanonicalizationFailedError(f"perturbed pairs {pairs} do not form a triangular pattern")

    chosen = None
    for order in candidates:
        y, t, x, z = order
        params = {"a13": float(a[y, x]), "a14": float(a[y, z]), "a24": float(a[t, z])}
        if not lt(params["a14"], 1.0, cfg.rtol):
            chosen = (order, params)
            break
    if chosen is None:
        raise CanonicalizationFailedError("neither orientation gives a14 >= 1")
    order, params = chosen
    transform = MonomialTransform.ordering(list(order) + list(range(4, A.n)))
    return CanonicalTriple(params, transform)


# ── Hull containment ─────────────────────────────────────────────────────────

def hull_reduction(A: ReciprocalMatrix, cfg: Optional[ToleranceConfig] = None) -> ReciprocalMatrix:
    """A[{1..s+1}] for A = A_n(B) with an s-block B; same hull containment as A."""
    cfg = cfg or settings
    s = leading_block_size(A, cfg)
    keep = min(max(s + 1, 1), A.n)
    return principal_submatrix(A, range(1, keep + 1))


def _lift(
    A: ReciprocalMatrix,
    cls: BlockClassification,
    u_small: np.ndarray,
    cfg: ToleranceConfig,
) -> Optional[dict]:
    """Pad a reduced witness, map it back to A's indexing and re-certify it."""
    u = np.zeros(A.n)
    u[: u_small.size] = u_small
    back = cls.transform.inverse()
    u_in = back.apply_to_array(u)
    u_in /= u_in.sum()
    w_in = PositiveVector(A.entries @ u_in)
    cert = is_efficient(A, w_in, cfg)
    if cert.efficient:
        logger.error("Lifted witness for %s is efficient on the input matrix.", cls.kind.value)
        return None
    return {"witness": w_in.tolist(), "coefficients": u_in.tolist(), "witness_certificate": cert}


def _no_or_unknown(A, cls, u_small, reason, cfg) -> HullVerdict:
    lifted = _lift(A, cls, u_small, cfg)
    if lifted is None:
        return HullVerdict(
            contained="unknown",
            reason=f"{reason}; the lifted witness failed certification",
            kind=cls.kind.value,
            params=cls.params,
        )
    return HullVerdict(contained="no", reason=reason, kind=cls.kind.value, params=cls.params, **lifted)


def _rowsum_search(A: ReciprocalMatrix, cfg: ToleranceConfig) -> Optional[dict]:
    """Try the row-sum criterion after each column normalisation."""
    n = A.n
    if n < 4:
        return None
    candidates = [np.full(n - 1, 1.0 / (n - 1))]
    if n <= 8:
        for trio in combinations(range(n - 1), 3):
            y = np.zeros(n - 1)
            y[list(trio)] = 1.0 / 3.0
            candidates.append(y)
    for j in range(n):
        # column j last, normalised to ones
        order = [k for k in range(n) if k != j] + [j]
        T = diagonal_normalization(A, j + 1).then(MonomialTransform.ordering(order))
        N = monomial_similarity(A, T)
        for y in candidates:
            w = rowsum_witness(N, WeightVector(y), cfg)
            if w is None:
                continue
            u = np.append(y, 0.0)
            u_in = T.inverse().apply_to_array(u)
            u_in /= u_in.sum()
            w_in = PositiveVector(A.entries @ u_in)
            cert = is_efficient(A, w_in, cfg)
            if not cert.efficient:
                return {"witness": w_in.tolist(), "coefficients": u_in.tolist(), "witness_certificate": cert}
    return None


def hull_subset_efficient(A: ReciprocalMatrix, cfg: Optional[ToleranceConfig] = None) -> HullVerdict:
    """Decide C(A) ⊆ E(A) for the classified families, with a witness when not."""
    cfg = cfg or settings
    if A.n <= 3:
        return HullVerdict(contained="yes", reason="n <= 3: E(A) = C(A)", kind="small")

    cls = detect_block_structure(A, cfg)
    kind = cls.kind

    if kind == BlockKind.CONSISTENT:
        return HullVerdict(contained="yes", reason="consistent matrix: every column is the same ray", kind=kind.value)
    if kind == BlockKind.SIMPLE:
        return HullVerdict(
            contained="yes", reason="simple perturbed (2-block): C(A) is contained in E(A)",
            kind=kind.value, params=cls.params,
        )
    if kind == BlockKind.COLUMN_PERTURBED:
        return HullVerdict(
            contained="yes", reason="column perturbed consistent matrix: C(A) is contained in E(A)",
            kind=kind.value,
        )

    if kind == BlockKind.THREE_BLOCK and cls.params and len(cls.perturbed_pairs) == 2 and A.n >= 5:
        # double perturbation sharing an index; read it as a triangular form
        tri = canonicalize_4block_triangular(cls.canonical, cfg)
        if hull_in_efficient_triangular(**tri.params, cfg=cfg):
            return HullVerdict(
                contained="yes", reason="double perturbed consistent matrix (triangular theorem)",
                kind=kind.value, params=tri.params,
            )
        logger.warning("Triangular theorem rejects a double perturbation %s.", tri.params)

    if kind == BlockKind.THREE_BLOCK and cls.params:
        p = cls.params
        if hull_in_efficient_3block(p["a12"], p["a13"], p["a23"], cfg):
            reason = "3-block theorem: a13 <= a12*a23"
            if len(cls.perturbed_pairs) == 2:
                reason = "double perturbed consistent matrix (3-block theorem)"
            return HullVerdict(contained="yes", reason=reason, kind=kind.value, params=p)
        try:
            u, _ = witness_3block(p["a12"], p["a13"], p["a23"], cfg)
        except EffHullError as exc:
            logger.warning("3-block witness failed: %s", exc)
            return HullVerdict(contained="unknown", reason=f"3-block theorem: a13 > a12*a23; {exc}",
                               kind=kind.value, params=p)
        return _no_or_unknown(A, cls, u, "3-block theorem: a13 > a12*a23", cfg)

    if kind == BlockKind.FOUR_BLOCK_TRIANGULAR and cls.params:
        p = cls.params
        if hull_in_efficient_triangular(p["a13"], p["a14"], p["a24"], cfg):
            reason = "triangular theorem: neither strict chain holds"
            if len(cls.perturbed_pairs) == 2:
                reason = "double perturbed consistent matrix (triangular theorem)"
            return HullVerdict(contained="yes", reason=reason, kind=kind.value, params=p)
        try:
            u, _ = witness_triangular(p["a13"], p["a14"], p["a24"], cfg)
        except EffHullError as exc:
            logger.warning("Triangular witness failed: %s", exc)
            return HullVerdict(contained="unknown", reason=f"triangular theorem: strict chain holds; {exc}",
                               kind=kind.value, params=p)
        return _no_or_unknown(A, cls, u, "triangular theorem: a strict chain holds", cfg)

    found = _rowsum_search(A, cfg)
    if found is not None:
        return HullVerdict(contained="no", reason="row-sum criterion", kind=kind.value, params=cls.params, **found)
    return HullVerdict(contained="unknown", reason="outside classified families", kind=kind.value, params=cls.params)
