"""Numerical kernels for the readiness index.

Everything in here is a pure function over immutable inputs: indicator
vectors with explicit missingness, similarity metrics, donor-based
imputation of missing indicators, coverage weighting (linear and sigmoid),
scoring against an ideal reference vector, and ranking.

Vectors hold normalized values in [0, 1]; missing cells are NaN with a
boolean presence mask kept alongside so that coverage can always be
computed from the *original* observation pattern, even after imputation.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field, replace
from typing import Callable, Literal, Sequence

import numpy as np

__all__ = [
    "IndicatorVector",
    "ImputedCountry",
    "CoverageWeight",
    "LinearWeighting",
    "SigmoidWeighting",
    "WeightingScheme",
    "ImputationConfig",
    "ScoredCountry",
    "NoDonorsError",
    "ImputationWarning",
    "zero_fill",
    "cosine_similarity",
    "euclidean_similarity",
    "ideal_country",
    "complete_pool",
    "select_donors",
    "impute",
    "coverage",
    "weight",
    "score",
    "rank",
]

Metric = Literal["cosine", "euclidean"]


class NoDonorsError(Exception):
    """No fully observed entity is available to donate indicator values."""


class ImputationWarning(UserWarning):
    """An indicator had no observed value anywhere; 0.0 was imputed."""


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class IndicatorVector:
    """Normalized indicator values with an explicit missingness mask.

    ``values`` is float64 with NaN at missing positions; ``present`` is the
    boolean mask of originally observed cells. Present values must lie in
    [0, 1].
    """

    values: np.ndarray
    present: np.ndarray

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=np.float64)
        present = np.asarray(self.present, dtype=bool)
        if values.ndim != 1 or present.shape != values.shape:
            raise ValueError("values and present must be 1-D arrays of equal length")
        observed = values[present]
        if observed.size and (np.any(observed < 0.0) or np.any(observed > 1.0)):
            raise ValueError("present indicator values must lie in [0, 1]")
        values = np.where(present, values, np.nan)
        object.__setattr__(self, "values", _readonly(values))
        object.__setattr__(self, "present", _readonly(present))

    @classmethod
    def from_optional(cls, cells: Sequence[float | None]) -> "IndicatorVector":
        """Build from a sequence where ``None`` (or NaN) marks a missing cell."""
        values = np.array(
            [np.nan if c is None else float(c) for c in cells], dtype=np.float64
        )
        return cls(values, ~np.isnan(values))

    @classmethod
    def complete(cls, values: Sequence[float] | np.ndarray) -> "IndicatorVector":
        """Build a fully observed vector."""
        values = np.asarray(values, dtype=np.float64)
        return cls(values, np.ones(values.shape, dtype=bool))

    def __len__(self) -> int:
        return self.values.shape[0]

    @property
    def n_missing(self) -> int:
        return int(np.count_nonzero(~self.present))

    @property
    def is_complete(self) -> bool:
        return bool(self.present.all())


@dataclass(frozen=True)
class ImputedCountry:
    """A country after imputation: complete values plus the original vector."""

    name: str
    filled: np.ndarray
    original: IndicatorVector

    def __post_init__(self) -> None:
        filled = np.asarray(self.filled, dtype=np.float64)
        if filled.shape != self.original.values.shape:
            raise ValueError("filled vector length must match the original")
        if np.any(np.isnan(filled)):
            raise ValueError("filled vector must be complete")
        object.__setattr__(self, "filled", _readonly(filled))


@dataclass(frozen=True)
class CoverageWeight:
    """Fraction of originally observed indicators, g = (N - n_missing) / N."""

    g: float
    n_missing: int

    def __post_init__(self) -> None:
        if not 0.0 <= self.g <= 1.0:
            raise ValueError("coverage g must lie in [0, 1]")
        if self.n_missing < 0:
            raise ValueError("n_missing must be non-negative")


@dataclass(frozen=True)
class LinearWeighting:
    """Weight equals coverage g itself."""


@dataclass(frozen=True)
class SigmoidWeighting:
    """Nonlinear coverage weight centered at g = gamma.

    The weight is 1 / (1 + r^-2) with r = g(1-gamma) / (gamma(1-g)), which
    maps coverage through a sigmoid that equals 0.5 exactly at g = gamma.
    gamma must lie strictly inside (0, 1); the expression is singular at the
    endpoints, so the continuous limits 0 (at g=0) and 1 (at g=1) are used.
    """

    gamma: float

    def __post_init__(self) -> None:
        if not 0.0 < self.gamma < 1.0:
            raise ValueError("sigmoid gamma must lie strictly inside (0, 1)")


WeightingScheme = LinearWeighting | SigmoidWeighting


@dataclass(frozen=True)
class ImputationConfig:
    """How missing indicators are estimated from similar complete countries."""

    neighbors: int = 10
    metric: Metric = "cosine"

    def __post_init__(self) -> None:
        if self.neighbors < 1:
            raise ValueError("neighbors must be a positive integer")
        if self.metric not in ("cosine", "euclidean"):
            raise ValueError(f"unknown metric: {self.metric!r}")


@dataclass(frozen=True)
class ScoredCountry:
    """Score components for one country: final score = similarity * weight."""

    name: str
    similarity_f: float
    coverage: CoverageWeight
    weight: float
    score: float
    rank: int | None = field(default=None, compare=False)


def zero_fill(v: IndicatorVector) -> np.ndarray:
    """Dense copy of the vector with missing cells substituted by 0.0."""
    return np.where(v.present, v.values, 0.0)


def cosine_similarity(a: Sequence[float] | np.ndarray, b: Sequence[float] | np.ndarray) -> float:
    """Cosine of two dense non-negative vectors, clipped into [0, 1].

    Returns 0.0 when either vector has zero norm: an all-zero vector carries
    no evidence of similarity.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"length mismatch: {a.shape[0]} vs {b.shape[0]}")
    na = np.linalg.norm(a)
    nb = np.linalg.norm(b)
    if na == 0.0 or nb == 0.0:
        return 0.0
    return float(min(1.0, max(0.0, float(np.dot(a, b)) / (na * nb))))


def euclidean_similarity(a: Sequence[float] | np.ndarray, b: Sequence[float] | np.ndarray) -> float:
    """Euclidean distance mapped to a similarity in (0, 1] via 1 / (1 + d)."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"length mismatch: {a.shape[0]} vs {b.shape[0]}")
    return 1.0 / (1.0 + float(np.linalg.norm(a - b)))


_METRICS: dict[str, Callable[[np.ndarray, np.ndarray], float]] = {
    "cosine": cosine_similarity,
    "euclidean": euclidean_similarity,
}


def ideal_country(rows: Sequence[IndicatorVector]) -> np.ndarray:
    """Element-wise maximum of observed values across rows.

    Columns with no observed value anywhere fall back to 0.0.
    """
    if len(rows) == 0:
        raise ValueError("ideal vector requires at least one row")
    stacked = np.vstack([r.values for r in rows])
    masks = np.vstack([r.present for r in rows])
    filled = np.where(masks, stacked, -np.inf)
    best = filled.max(axis=0)
    return np.where(np.isneginf(best), 0.0, best)


def complete_pool(
    dataset: Sequence[tuple[str, IndicatorVector]],
) -> list[tuple[str, IndicatorVector]]:
    """The donor pool: entities with every indicator observed."""
    return [(name, vec) for name, vec in dataset if vec.is_complete]


def select_donors(
    target: IndicatorVector,
    pool: Sequence[tuple[str, IndicatorVector]],
    k: int,
    metric: Metric = "cosine",
) -> list[str]:
    """Names of the k pool entries most similar to the zero-filled target.

    Ordered by descending similarity, ties broken by ascending name. Pool
    entries are expected to be complete (see :func:`complete_pool`). Returns
    the whole pool when it holds fewer than k entries.
    """
    if k < 1:
        raise ValueError("k must be a positive integer")
    if not pool:
        raise NoDonorsError("donor pool is empty")
    sim = _METRICS[metric]
    target_dense = zero_fill(target)
    ranked = sorted(
        ((name, sim(target_dense, zero_fill(vec))) for name, vec in pool),
        key=lambda item: (-item[1], item[0]),
    )
    return [name for name, _ in ranked[:k]]


def impute(
    dataset: Sequence[tuple[str, IndicatorVector]],
    cfg: ImputationConfig = ImputationConfig(),
) -> list[ImputedCountry]:
    """Fill every missing indicator from the most similar complete countries.

    For each incomplete entity, donors are chosen once against the pool of
    originally complete entities, and each missing indicator becomes the
    arithmetic mean of that indicator over the donor set. Already-imputed
    entities never serve as donors, so results do not depend on iteration
    order. When no complete entity exists at all, each missing cell falls
    back to the mean of its indicator over the entities observing it; an
    indicator observed nowhere is imputed as 0.0 and a
    :class:`ImputationWarning` is emitted.
    """
    pool = complete_pool(dataset)
    by_name = {name: vec for name, vec in dataset}
    fallback = None
    result: list[ImputedCountry] = []
    for name, vec in dataset:
        if vec.is_complete:
            result.append(ImputedCountry(name, vec.values.copy(), vec))
            continue
        if pool:
            donors = select_donors(vec, pool, cfg.neighbors, cfg.metric)
            donor_values = np.vstack([by_name[d].values for d in donors])
            estimates = donor_values.mean(axis=0)
        else:
            if fallback is None:
                fallback = _column_mean_fallback(dataset)
            estimates = fallback
        filled = np.where(vec.present, vec.values, estimates)
        result.append(ImputedCountry(name, filled, vec))
    return result


def _column_mean_fallback(dataset: Sequence[tuple[str, IndicatorVector]]) -> np.ndarray:
    stacked = np.vstack([vec.values for _, vec in dataset])
    masks = np.vstack([vec.present for _, vec in dataset])
    observed = masks.sum(axis=0)
    sums = np.where(masks, stacked, 0.0).sum(axis=0)
    with np.errstate(invalid="ignore"):
        means = np.where(observed > 0, sums / np.maximum(observed, 1), 0.0)
    for k in np.flatnonzero(observed == 0):
        warnings.warn(
            f"indicator {int(k)} has no observed value in any entity; imputing 0.0",
            ImputationWarning,
            stacklevel=3,
        )
    return means


def coverage(v: IndicatorVector) -> CoverageWeight:
    """Coverage from the original mask: g = (N - n_missing) / N."""
    n = len(v)
    missing = v.n_missing
    return CoverageWeight(g=(n - missing) / n, n_missing=missing)


def weight(g: CoverageWeight | float, scheme: WeightingScheme) -> float:
    """Map coverage to a multiplicative weight in [0, 1] under the scheme."""
    gv = g.g if isinstance(g, CoverageWeight) else float(g)
    if isinstance(scheme, LinearWeighting):
        return gv
    if gv <= 0.0:
        return 0.0
    if gv >= 1.0:
        return 1.0
    r = (gv * (1.0 - scheme.gamma)) / (scheme.gamma * (1.0 - gv))
    r2 = r * r
    if np.isinf(r2):
        return 1.0
    return r2 / (1.0 + r2)


def score(
    entity: ImputedCountry,
    ideal: np.ndarray,
    scheme: WeightingScheme = LinearWeighting(),
) -> ScoredCountry:
    """Score one imputed country against the ideal vector.

    The similarity component is the cosine of the filled vector with the
    ideal; the weight comes from the *original* coverage, so information
    that was never observed is penalized even after imputation.
    """
    f = cosine_similarity(entity.filled, ideal)
    cov = coverage(entity.original)
    w = weight(cov, scheme)
    return ScoredCountry(
        name=entity.name,
        similarity_f=f,
        coverage=cov,
        weight=w,
        score=f * w,
    )


def rank(
    dataset: Sequence[tuple[str, IndicatorVector]],
    scheme: WeightingScheme = LinearWeighting(),
    cfg: ImputationConfig = ImputationConfig(),
) -> list[ScoredCountry]:
    """Impute, score against the ideal of the imputed rows, and rank.

    Returns countries sorted by descending score (ties by ascending name),
    with 1-based ranks assigned in sort order.
    """
    if len(dataset) == 0:
        raise ValueError("empty dataset")
    imputed = impute(dataset, cfg)
    ideal = ideal_country([IndicatorVector.complete(ic.filled) for ic in imputed])
    scored = [score(ic, ideal, scheme) for ic in imputed]
    scored.sort(key=lambda s: (-s.score, s.name))
    return [replace(s, rank=i + 1) for i, s in enumerate(scored)]
