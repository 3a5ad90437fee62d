"""
Domain models.

Numeric carriers (`PositiveVector`, `WeightVector`, `ReciprocalMatrix`,
`MonomialTransform`) are immutable dataclasses over read-only numpy arrays.
Results that leave the process (certificates, verdicts, reports) are
pydantic models so they serialise to JSON directly.

All user-facing indices are 1-based; arrays are 0-based internally.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Literal, Optional, Sequence

import numpy as np
from pydantic import BaseModel, Field, model_validator

from effhull.config import settings
from effhull.errors import (
    DimensionMismatchError,
    DimensionTooSmallError,
    EmptyResultError,
    IndexOutOfRangeError,
    NonPositiveEntryError,
    NonSquareError,
    NotReciprocalError,
    PreconditionViolatedError,
)


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


def to_zero_based(indices: Iterable[int], n: int) -> list[int]:
    """Convert 1-based user indices to sorted 0-based ones, checking range."""
    out = set()
    for k in indices:
        k = int(k)
        if not 1 <= k <= n:
            raise IndexOutOfRangeError(f"index {k} outside 1..{n}")
        out.add(k - 1)
    return sorted(out)


# ── Vectors ──────────────────────────────────────────────────────────────────

@dataclass(frozen=True, eq=False)
class PositiveVector:
    """A vector with strictly positive finite entries."""

    entries: np.ndarray

    def __post_init__(self):
        arr = np.array(self.entries, dtype=float).reshape(-1)
        if arr.size < 1:
            raise DimensionTooSmallError("a positive vector needs at least one entry")
        bad = np.flatnonzero(~np.isfinite(arr) | (arr <= 0))
        if bad.size:
            k = int(bad[0])
            raise NonPositiveEntryError(f"entry {k + 1} is not positive ({arr[k]!r})")
        object.__setattr__(self, "entries", _frozen(arr))

    @classmethod
    def ones(cls, n: int) -> "PositiveVector":
        """The all-ones vector e_n."""
        return cls(np.ones(n))

    @property
    def n(self) -> int:
        return int(self.entries.size)

    def __len__(self) -> int:
        return self.n

    def normalized(self) -> "PositiveVector":
        """Rescale to unit entry sum."""
        return PositiveVector(self.entries / self.entries.sum())

    def scaled(self, c: float) -> "PositiveVector":
        return PositiveVector(self.entries * c)

    def delete(self, indices: Iterable[int]) -> "PositiveVector":
        """w(K): drop the 1-based indices in K."""
        drop = set(to_zero_based(indices, self.n))
        keep = [k for k in range(self.n) if k not in drop]
        if not keep:
            raise EmptyResultError("deleting every entry leaves an empty vector")
        return PositiveVector(self.entries[keep])

    def retain(self, indices: Iterable[int]) -> "PositiveVector":
        """w[K]: keep only the 1-based indices in K."""
        keep = to_zero_based(indices, self.n)
        if not keep:
            raise EmptyResultError("retaining no entries leaves an empty vector")
        return PositiveVector(self.entries[keep])

    def tolist(self) -> list[float]:
        return [float(x) for x in self.entries]

    def __repr__(self) -> str:
        return f"PositiveVector({np.array2string(self.entries, precision=6)})"


@dataclass(frozen=True, eq=False)
class WeightVector:
    """Simplex coefficients α: nonnegative, not all zero, renormalised to sum 1."""

    alpha: np.ndarray

    def __post_init__(self):
        arr = np.array(self.alpha, dtype=float).reshape(-1)
        if arr.size < 1:
            raise DimensionTooSmallError("a weight vector needs at least one entry")
        if not np.all(np.isfinite(arr)) or np.any(arr < 0):
            raise NonPositiveEntryError("weights must be finite and nonnegative")
        total = arr.sum()
        if total <= 0:
            raise NonPositiveEntryError("at least one weight must be positive")
        object.__setattr__(self, "alpha", _frozen(arr / total))

    @classmethod
    def uniform(cls, n: int) -> "WeightVector":
        return cls(np.full(n, 1.0 / n))

    @classmethod
    def unit(cls, n: int, j: int) -> "WeightVector":
        """The coordinate vector e_j (1-based j)."""
        arr = np.zeros(n)
        arr[to_zero_based([j], n)[0]] = 1.0
        return cls(arr)

    @property
    def n(self) -> int:
        return int(self.alpha.size)

    def tolist(self) -> list[float]:
        return [float(x) for x in self.alpha]


# ── Reciprocal matrices ──────────────────────────────────────────────────────

@dataclass(frozen=True, eq=False)
class ReciprocalMatrix:
    """A positive square matrix with a_ii = 1 and a_ji = 1/a_ij.

    Only the strict upper triangle is trusted: a diagonal other than one is
    rejected and the lower triangle is recomputed from the upper one, so
    reciprocity holds exactly.  Use `matrix_core.validate_reciprocal` for untrusted input.
    """

    entries: np.ndarray

    def __post_init__(self):
        arr = np.array(self.entries, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
            raise NonSquareError(f"expected a non-empty square matrix, got shape {arr.shape}")
        off = np.abs(np.diag(arr) - 1.0)
        if off.size and not off.max() <= settings.rtol:
            k = int(np.argmax(off))
            raise NotReciprocalError(k + 1, k + 1, float(off[k]))
        upper = np.triu_indices(arr.shape[0], k=1)
        vals = arr[upper]
        bad = np.flatnonzero(~np.isfinite(vals) | (vals <= 0))
        if bad.size:
            i, j = upper[0][bad[0]], upper[1][bad[0]]
            raise NonPositiveEntryError(f"entry ({i + 1},{j + 1}) is not positive ({arr[i, j]!r})")
        out = np.ones_like(arr)
        out[upper] = vals
        out[(upper[1], upper[0])] = 1.0 / vals
        object.__setattr__(self, "entries", _frozen(out))

    @classmethod
    def ones(cls, n: int) -> "ReciprocalMatrix":
        """J_n, the all-ones (consistent) matrix."""
        return cls(np.ones((n, n)))

    @property
    def n(self) -> int:
        return int(self.entries.shape[0])

    def column(self, j: int) -> PositiveVector:
        """Column a_j (1-based j)."""
        return PositiveVector(self.entries[:, to_zero_based([j], self.n)[0]])

    def columns(self) -> list[PositiveVector]:
        return [PositiveVector(self.entries[:, j]) for j in range(self.n)]

    def allclose(self, other: "ReciprocalMatrix", rtol: float) -> bool:
        """Entrywise relative equality."""
        if self.n != other.n:
            return False
        return bool(np.all(np.abs(self.entries / other.entries - 1.0) <= rtol))

    def check_dim(self, w) -> None:
        """Raise `DimensionMismatchError` unless ``len(w) == n``."""
        if len(w) != self.n:
            raise DimensionMismatchError(f"vector of length {len(w)} for a {self.n}x{self.n} matrix")

    def tolist(self) -> list[list[float]]:
        return [[float(x) for x in row] for row in self.entries]

    def __repr__(self) -> str:
        return f"ReciprocalMatrix(n={self.n})"


# ── Monomial transforms ──────────────────────────────────────────────────────

@dataclass(frozen=True, eq=False)
class MonomialTransform:
    """S = P·diag(scale): scale first, then move entry i to position perm[i].

    ``perm`` is stored 0-based; `perm_one_based` gives the user-facing form.
    """

    perm: tuple[int, ...]
    scale: PositiveVector

    def __post_init__(self):
        perm = tuple(int(p) for p in self.perm)
        if sorted(perm) != list(range(len(perm))):
            raise PreconditionViolatedError(f"perm {perm} is not a permutation of 0..{len(perm) - 1}")
        if len(perm) != self.scale.n:
            raise DimensionMismatchError("perm and scale have different lengths")
        object.__setattr__(self, "perm", perm)

    @classmethod
    def identity(cls, n: int) -> "MonomialTransform":
        return cls(tuple(range(n)), PositiveVector.ones(n))

    @classmethod
    def permutation(cls, perm: Sequence[int]) -> "MonomialTransform":
        """Pure permutation; ``perm[i]`` is the new 0-based position of index i."""
        return cls(tuple(perm), PositiveVector.ones(len(perm)))

    @classmethod
    def ordering(cls, order: Sequence[int]) -> "MonomialTransform":
        """Permutation placing old index ``order[k]`` at new position k (0-based)."""
        perm = [0] * len(order)
        for new, old in enumerate(order):
            perm[old] = new
        return cls.permutation(perm)

    @classmethod
    def diagonal(cls, d) -> "MonomialTransform":
        """S = diag(d), so the similarity is diag(d)·A·diag(d)^-1."""
        d = d if isinstance(d, PositiveVector) else PositiveVector(d)
        return cls(tuple(range(d.n)), d)

    @property
    def n(self) -> int:
        return len(self.perm)

    @property
    def perm_one_based(self) -> list[int]:
        return [p + 1 for p in self.perm]

    def as_matrix(self) -> np.ndarray:
        """The monomial matrix S."""
        s = np.zeros((self.n, self.n))
        s[list(self.perm), list(range(self.n))] = self.scale.entries
        return s

    def apply_to_array(self, x: np.ndarray) -> np.ndarray:
        """S·x for any real vector (coefficient vectors may contain zeros)."""
        x = np.asarray(x, dtype=float).reshape(-1)
        if x.size != self.n:
            raise DimensionMismatchError(f"vector of length {x.size} for a transform of size {self.n}")
        out = np.empty(self.n)
        out[list(self.perm)] = self.scale.entries * x
        return out

    def apply_to_vector(self, w: PositiveVector) -> PositiveVector:
        return PositiveVector(self.apply_to_array(w.entries))

    def inverse(self) -> "MonomialTransform":
        inv = [0] * self.n
        for i, p in enumerate(self.perm):
            inv[p] = i
        scale = np.empty(self.n)
        scale[list(self.perm)] = 1.0 / self.scale.entries
        return MonomialTransform(tuple(inv), PositiveVector(scale))

    def then(self, other: "MonomialTransform") -> "MonomialTransform":
        """The transform ``other ∘ self`` (apply self first)."""
        if other.n != self.n:
            raise DimensionMismatchError("cannot compose transforms of different sizes")
        perm = tuple(other.perm[p] for p in self.perm)
        scale = other.scale.entries[list(self.perm)] * self.scale.entries
        return MonomialTransform(perm, PositiveVector(scale))

    def to_dict(self) -> dict:
        return {"perm": self.perm_one_based, "scale": self.scale.tolist()}


# ── Efficiency ───────────────────────────────────────────────────────────────

@dataclass(frozen=True, eq=False)
class EfficiencyDigraph:
    """G(A,w): ``adjacency[i, j]`` is True iff there is an edge i→j."""

    adjacency: np.ndarray

    def __post_init__(self):
        adj = np.array(self.adjacency, dtype=bool)
        np.fill_diagonal(adj, False)
        object.__setattr__(self, "adjacency", _frozen(adj))

    @property
    def n(self) -> int:
        return int(self.adjacency.shape[0])

    def edges(self) -> list[tuple[int, int]]:
        """Edges as 1-based (i, j) pairs."""
        return [(int(i) + 1, int(j) + 1) for i, j in zip(*np.nonzero(self.adjacency))]

    def is_total(self) -> bool:
        """Every pair i≠j is joined in at least one direction."""
        either = self.adjacency | self.adjacency.T
        np.fill_diagonal(either, True)
        return bool(either.all())


class EfficiencyCertificate(BaseModel):
    """Verdict of an efficiency test, with a source/sink witness when inefficient."""

    n: int
    verdict: Literal["efficient", "inefficient"]
    method: Literal["digraph", "recursive", "closed-form"]
    witness: Optional[list[int]] = None
    witness_kind: Optional[Literal["sink", "source"]] = None
    components: list[list[int]] = Field(default_factory=list)

    @model_validator(mode="after")
    def _witness_present(self):
        if self.verdict == "inefficient":
            if not self.witness or len(self.witness) >= self.n:
                raise ValueError("an inefficient verdict needs a nonempty proper witness set")
        return self

    @property
    def efficient(self) -> bool:
        return self.verdict == "efficient"


@dataclass(frozen=True)
class PerronResult:
    """Dominant eigenpair from power iteration; ``vector`` has unit sum."""

    vector: PositiveVector
    rho: float
    iterations: int
    residual: float


# ── Perturbation structure ───────────────────────────────────────────────────

class BlockKind(str, Enum):
    CONSISTENT = "consistent"
    SIMPLE = "simple"
    COLUMN_PERTURBED = "column-perturbed"
    THREE_BLOCK = "three-block"
    FOUR_BLOCK_TRIANGULAR = "four-block-triangular"
    GENERAL_S_BLOCK = "general-s-block"
    UNSTRUCTURED = "unstructured"


@dataclass(frozen=True, eq=False)
class BlockClassification:
    """Detected perturbation structure of a reciprocal matrix.

    ``monomial_similarity(input, transform)`` equals ``canonical``.  The
    minimal perturbed block occupies the leading ``len(block_indices)``
    positions of ``canonical``; everything outside it is one.
    """

    kind: BlockKind
    block_indices: tuple[int, ...]          # 1-based, in the input's indexing
    transform: MonomialTransform
    canonical: ReciprocalMatrix
    perturbed_pairs: tuple[tuple[int, int], ...] = ()   # 1-based, canonical indexing
    params: dict = field(default_factory=dict)
    condition: Optional[str] = None
    note: Optional[str] = None

    @property
    def s(self) -> int:
        return len(self.block_indices)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "n": self.canonical.n,
            "block_indices": list(self.block_indices),
            "block_size": self.s,
            "perturbed_pairs": [list(p) for p in self.perturbed_pairs],
            "params": {k: float(v) for k, v in self.params.items()},
            "condition": self.condition,
            "note": self.note,
            "transform": self.transform.to_dict(),
            "canonical": self.canonical.tolist(),
        }


class HullVerdict(BaseModel):
    """Decision on C(A) ⊆ E(A), with a certified counterexample when "no"."""

    contained: Literal["yes", "no", "unknown"]
    reason: str
    kind: str
    params: dict[str, float] = Field(default_factory=dict)
    witness: Optional[list[float]] = None
    coefficients: Optional[list[float]] = None
    witness_certificate: Optional[EfficiencyCertificate] = None

    @model_validator(mode="after")
    def _witness_when_no(self):
        if self.contained == "no":
            if self.witness is None or self.witness_certificate is None:
                raise ValueError('a "no" verdict needs a witness and its certificate')
            if self.witness_certificate.efficient:
                raise ValueError("the witness of a \"no\" verdict must be inefficient")
        return self


# ── Experiments ──────────────────────────────────────────────────────────────

class TrialRecord(BaseModel):
    trial_index: int
    alpha: list[float]
    norm_convex: float = Field(ge=0)
    norm_geometric: float = Field(ge=0)
    convex_efficient: bool
    geometric_efficient: bool


class ComparisonReport(BaseModel):
    matrix: str
    n: int
    seed: int
    trials: list[TrialRecord]
    reference_norms: dict[str, float]

    @model_validator(mode="after")
    def _all_references(self):
        missing = {"w_gm", "w_P", "w_s", "w_sum"} - set(self.reference_norms)
        if missing:
            raise ValueError(f"missing reference norms: {sorted(missing)}")
        return self


class CountEntry(BaseModel):
    a13: float
    trials: int
    inefficient_count: int = Field(ge=0)
    perron_efficient: bool
    singular_efficient: bool
    arith_mean_efficient: bool
    hull_contained: bool

    @model_validator(mode="after")
    def _count_in_range(self):
        if self.inefficient_count > self.trials:
            raise ValueError("inefficient_count exceeds trials")
        return self


class CountReport(BaseModel):
    family: Literal["three-block", "triangular"] = "three-block"
    n: int
    a12: Optional[float] = None
    a23: Optional[float] = None
    a14: Optional[float] = None
    a24: Optional[float] = None
    seed: int
    entries: list[CountEntry]


class PerronGridCell(BaseModel):
    n: int
    a13: float
    perron_efficient: bool
    singular_efficient: bool
    arith_mean_efficient: bool


class PerronGrid(BaseModel):
    a12: float
    a23: float
    cells: list[PerronGridCell]

    def verdict(self, n: int, a13: float) -> bool:
        for cell in self.cells:
            if cell.n == n and cell.a13 == a13:
                return cell.perron_efficient
        raise KeyError((n, a13))
