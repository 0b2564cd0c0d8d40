"""Supervised evaluation harness for the index features.

Builds the two-feature representation (coverage weight, final score) for
labeled countries, trains classifiers under stratified k-fold cross
validation, and reports accuracies, confusion matrices, and the two
reference baselines: majority-class guessing and unweighted similarity.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .classifiers import GaussianNB, SMOConfig, SVMClassifier
from .core import (
    ImputationConfig,
    LinearWeighting,
    WeightingScheme,
    coverage,
    cosine_similarity,
    ideal_country,
    impute,
    IndicatorVector,
    score,
    weight,
)

__all__ = [
    "LABEL_ORDER",
    "LabeledPoint",
    "EvalReport",
    "SweepTable",
    "granularity_labels",
    "featurize",
    "baseline1_accuracy",
    "baseline2_featurize",
    "make_classifier",
    "cross_validate",
    "sweep",
]

# Canonical class order; also the tie-break order for classifiers.
LABEL_ORDER = ("high", "mid", "low")

CLASSIFIER_KINDS = ("nb", "svm")


@dataclass(frozen=True)
class LabeledPoint:
    """One labeled country: features are (weight, final score)."""

    name: str
    features: tuple[float, float]
    label: str


def granularity_labels(granularity: int) -> tuple[str, ...]:
    """Class labels under a granularity scheme: 3-class keeps mid, 2-class drops it."""
    if granularity == 3:
        return ("high", "mid", "low")
    if granularity == 2:
        return ("high", "low")
    raise ValueError("granularity must be 2 or 3")


def _pipeline_points(
    dataset: Sequence[tuple[str, IndicatorVector]],
    labels: dict[str, str],
    cfg: ImputationConfig,
    features_of,
) -> list[LabeledPoint]:
    known = {name for name, _ in dataset}
    unknown = sorted(set(labels) - known)
    if unknown:
        raise ValueError(f"labeled countries missing from dataset: {', '.join(unknown)}")
    imputed = impute(dataset, cfg)
    ideal = ideal_country([IndicatorVector.complete(ic.filled) for ic in imputed])
    points = []
    for ic in imputed:
        label = labels.get(ic.name)
        if label is None:
            continue
        points.append(LabeledPoint(ic.name, features_of(ic, ideal), label))
    return points


def featurize(
    dataset: Sequence[tuple[str, IndicatorVector]],
    labels: dict[str, str],
    scheme: WeightingScheme = LinearWeighting(),
    cfg: ImputationConfig = ImputationConfig(),
) -> list[LabeledPoint]:
    """Two features per labeled country: the weight and the final score."""

    def features_of(ic, ideal):
        s = score(ic, ideal, scheme)
        return (s.weight, s.score)

    return _pipeline_points(dataset, labels, cfg, features_of)


def baseline2_featurize(
    dataset: Sequence[tuple[str, IndicatorVector]],
    labels: dict[str, str],
    cfg: ImputationConfig = ImputationConfig(),
) -> list[LabeledPoint]:
    """Features with weighting disabled: weight 1, score = raw similarity."""

    def features_of(ic, ideal):
        return (1.0, cosine_similarity(ic.filled, ideal))

    return _pipeline_points(dataset, labels, cfg, features_of)


def baseline1_accuracy(points: Sequence[LabeledPoint], granularity: int = 3) -> float:
    """Accuracy of always guessing the most populous class (no model)."""
    kept = granularity_labels(granularity)
    counts = [sum(1 for p in points if p.label == c) for c in kept]
    total = sum(counts)
    if total == 0:
        raise ValueError("no points to evaluate")
    return max(counts) / total


def make_classifier(kind: str, record_objective: bool = False):
    """Classifier factory for the kinds the harness evaluates."""
    if kind == "nb":
        return GaussianNB()
    if kind == "svm":
        return SVMClassifier(config=SMOConfig(), record_objective=record_objective)
    raise ValueError(f"unknown classifier kind {kind!r} (expected one of {CLASSIFIER_KINDS})")


@dataclass(frozen=True)
class EvalReport:
    """Cross-validation outcome: per-fold and mean accuracy, pooled confusion."""

    per_fold_accuracy: list[float]
    mean_accuracy: float
    confusion: np.ndarray  # rows = true class, cols = predicted, LABEL_ORDER order
    classes: tuple[str, ...]
    config: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "config": self.config,
            "per_fold_accuracy": self.per_fold_accuracy,
            "mean_accuracy": self.mean_accuracy,
            "classes": list(self.classes),
            "confusion": self.confusion.tolist(),
        }


def _stratified_folds(
    labels: Sequence[str], classes: Sequence[str], folds: int, seed: int
) -> tuple[np.ndarray, int]:
    """Fold id per point from a seeded shuffle, stratified by class.

    Folds are reduced to the minimum class count when a class is too small
    to appear in every fold.
    """
    labels = np.asarray(labels)
    min_count = min(int((labels == c).sum()) for c in classes)
    folds_used = min(folds, min_count)
    if folds_used < 2:
        raise ValueError("need at least 2 folds and 2 members per class")
    rng = np.random.default_rng(seed)
    assignment = np.empty(len(labels), dtype=int)
    for c in classes:
        idx = np.flatnonzero(labels == c)
        rng.shuffle(idx)
        assignment[idx] = np.arange(idx.size) % folds_used
    return assignment, folds_used


def cross_validate(
    points: Sequence[LabeledPoint],
    classifier_kind: str = "svm",
    folds: int = 10,
    granularity: int = 3,
    seed: int = 0,
) -> EvalReport:
    """Stratified k-fold cross validation, deterministic under ``seed``."""
    if not points:
        raise ValueError("no points to evaluate")
    if folds < 2:
        raise ValueError("folds must be at least 2")
    kept_classes = granularity_labels(granularity)
    kept = [p for p in points if p.label in kept_classes]
    if not kept:
        raise ValueError("no points left after granularity filtering")
    classes = tuple(c for c in kept_classes if any(p.label == c for p in kept))
    X = np.array([p.features for p in kept], dtype=np.float64)
    y = np.array([p.label for p in kept])

    assignment, folds_used = _stratified_folds(y, classes, folds, seed)
    class_index = {c: i for i, c in enumerate(classes)}
    confusion = np.zeros((len(classes), len(classes)), dtype=int)
    per_fold = []
    for f in range(folds_used):
        test = assignment == f
        clf = make_classifier(classifier_kind)
        clf.fit(X[~test], y[~test], class_order=LABEL_ORDER)
        predicted = clf.predict(X[test])
        actual = y[test]
        per_fold.append(float(np.mean([p == a for p, a in zip(predicted, actual)])))
        for a, p in zip(actual, predicted):
            confusion[class_index[a], class_index[p]] += 1

    return EvalReport(
        per_fold_accuracy=per_fold,
        mean_accuracy=float(np.mean(per_fold)),
        confusion=confusion,
        classes=classes,
        config={
            "classifier": classifier_kind,
            "granularity": granularity,
            "folds_requested": folds,
            "folds_used": folds_used,
            "seed": seed,
            "stratified": True,
        },
    )


@dataclass(frozen=True)
class SweepTable:
    """Mean accuracies over a parameter grid, one row per granularity."""

    axis: str
    values: list[float | int]
    accuracy: dict[int, list[float]]  # granularity -> accuracy per value

    def to_dict(self) -> dict:
        return {
            "axis": self.axis,
            "values": list(self.values),
            "accuracy": {str(g): acc for g, acc in self.accuracy.items()},
        }

    def format_text(self) -> str:
        """Plain-text table: header of grid values, one row per granularity."""
        header = [self.axis] + [_format_value(v) for v in self.values]
        lines = [header]
        for g in sorted(self.accuracy, reverse=True):
            lines.append([f"{g}-class"] + [f"{100 * a:.1f}" for a in self.accuracy[g]])
        widths = [max(len(row[i]) for row in lines) for i in range(len(header))]
        return "\n".join(
            "  ".join(cell.rjust(w) for cell, w in zip(row, widths)) for row in lines
        )


def _format_value(v: float | int) -> str:
    return str(v) if isinstance(v, int) else f"{v:g}"


def sweep(
    points_builder: Callable[[float | int], Sequence[LabeledPoint]],
    axis: str,
    values: Sequence[float | int],
    classifier_kind: str = "svm",
    folds: int = 10,
    seed: int = 0,
    granularities: Sequence[int] = (3, 2),
) -> SweepTable:
    """One cross-validation per grid value per granularity scheme.

    ``points_builder`` maps a grid value (a sigmoid gamma or a donor count)
    to the labeled points evaluated at that setting.
    """
    if not values:
        raise ValueError("sweep needs at least one value")
    accuracy: dict[int, list[float]] = {g: [] for g in granularities}
    for v in values:
        points = points_builder(v)
        for g in granularities:
            report = cross_validate(points, classifier_kind, folds, g, seed)
            accuracy[g].append(report.mean_accuracy)
    return SweepTable(axis=axis, values=list(values), accuracy=accuracy)
