"""Synthetic labeled country datasets with controllable class structure.

Produces raw datasets in the same shape the ingest layer parses from disk,
so synthetic data flows through the exact same front door as real data.
Class structure is built in by construction: per indicator, the three
classes draw from truncated Gaussians whose means are equally spaced and
ordered high > mid > low, with spread controlled by ``class_separation``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ingest import IndicatorDef, RawDataset

__all__ = ["SynthConfig", "generate", "LABELS"]

LABELS = ("high", "mid", "low")

# Class means equally spaced inside [0, 1], ordered high > mid > low.
_CLASS_MEANS = {"high": 0.75, "mid": 0.50, "low": 0.25}

# At least this many countries stay fully observed so a donor pool exists.
MIN_COMPLETE = 10


@dataclass(frozen=True)
class SynthConfig:
    """Shape of a generated dataset."""

    n_countries: int = 190
    class_proportions: tuple[float, float, float] = (45 / 190, 55 / 190, 90 / 190)
    n_indicators: int = 16
    missing_rate: float = 0.25
    class_separation: float = 4.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n_countries < 1:
            raise ValueError("n_countries must be positive")
        if self.n_indicators < 1:
            raise ValueError("n_indicators must be positive")
        if abs(sum(self.class_proportions) - 1.0) > 1e-9:
            raise ValueError("class proportions must sum to 1")
        if any(p < 0 for p in self.class_proportions):
            raise ValueError("class proportions must be non-negative")
        if not 0.0 <= self.missing_rate < 1.0:
            raise ValueError("missing_rate must lie in [0, 1)")
        if self.class_separation <= 0:
            raise ValueError("class_separation must be positive")


def _class_counts(n: int, proportions: tuple[float, float, float]) -> list[int]:
    """Largest-remainder rounding of proportions into integer counts."""
    raw = [p * n for p in proportions]
    counts = [int(x) for x in raw]
    short = n - sum(counts)
    remainders = sorted(range(len(raw)), key=lambda i: raw[i] - counts[i], reverse=True)
    for i in remainders[:short]:
        counts[i] += 1
    return counts


def _class_missing_rates(
    missing_rate: float, counts: list[int]
) -> dict[str, float]:
    """Per-class cell missing rates whose overall expectation is ``missing_rate``.

    Data availability tracks readiness: the rate for a class scales with
    (1 - class mean) squared, so less-ready countries lose markedly more
    cells, mirroring the coverage/score correlation seen in real indicator
    data where coverage itself separates readiness levels. The multipliers
    are normalized over the class mix so the expected overall missing
    fraction equals ``missing_rate`` exactly (up to a 0.98 per-class cap
    that only binds for extreme rates).
    """
    total = sum(counts)
    weights = {label: (1.0 - _CLASS_MEANS[label]) ** 2 for label in LABELS}
    mean_weight = sum(weights[label] * c for label, c in zip(LABELS, counts)) / total
    if mean_weight == 0.0:
        return {label: missing_rate for label in LABELS}
    return {
        label: min(0.98, missing_rate * weights[label] / mean_weight)
        for label in LABELS
    }


def generate(cfg: SynthConfig) -> tuple[RawDataset, dict[str, str]]:
    """Generate a labeled raw dataset, deterministic under ``cfg.seed``.

    Cells go missing independently per cell at a class-dependent rate (see
    :func:`_class_missing_rates`) averaging ``missing_rate``, except that
    every country keeps at least one observed cell and at least
    ``MIN_COMPLETE`` countries are forced to stay fully observed (the donor
    pool must not be empty). Raises ValueError when the complete-country
    quota cannot be met.
    """
    if cfg.n_countries < MIN_COMPLETE and cfg.missing_rate > 0.0:
        raise ValueError(
            f"cannot keep {MIN_COMPLETE} complete countries out of {cfg.n_countries}"
        )
    rng = np.random.default_rng(cfg.seed)
    counts = _class_counts(cfg.n_countries, cfg.class_proportions)
    std = 1.0 / cfg.class_separation
    rates = _class_missing_rates(cfg.missing_rate, counts)

    names: list[str] = []
    labels: dict[str, str] = {}
    blocks: list[np.ndarray] = []
    row_rates: list[float] = []
    start = 0
    for label, count in zip(LABELS, counts):
        block = rng.normal(_CLASS_MEANS[label], std, size=(count, cfg.n_indicators))
        blocks.append(np.clip(block, 0.0, 1.0))
        row_rates.extend([rates[label]] * count)
        for i in range(start, start + count):
            name = f"C{i + 1:03d}"
            names.append(name)
            labels[name] = label
        start += count
    matrix = np.vstack(blocks) if blocks else np.empty((0, cfg.n_indicators))

    missing = rng.random(matrix.shape) < np.array(row_rates)[:, None]
    # Every country keeps at least one observed cell.
    for i in np.flatnonzero(missing.all(axis=1)):
        missing[i, rng.integers(cfg.n_indicators)] = False
    # A fixed quota of countries stays fully observed.
    if cfg.missing_rate > 0.0:
        forced = rng.choice(cfg.n_countries, size=MIN_COMPLETE, replace=False)
        missing[forced, :] = False

    schema = [
        IndicatorDef(
            id=f"i{k + 1:02d}",
            display_name=f"Synthetic indicator {k + 1}",
            pillar="Synthetic",
            direction="higher",
            bounds=(0.0, 1.0),
        )
        for k in range(cfg.n_indicators)
    ]
    rows = [
        (
            names[i],
            [None if missing[i, k] else float(matrix[i, k]) for k in range(cfg.n_indicators)],
        )
        for i in range(cfg.n_countries)
    ]
    return RawDataset(schema=schema, rows=rows), labels
