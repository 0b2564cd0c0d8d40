"""Classifiers for the evaluation harness: Gaussian naive Bayes and an SVM
trained with sequential minimal optimization (SMO).

Both are small, deterministic implementations tailored to the two-feature
points produced by the evaluation pipeline. The SVM uses a linear kernel
(degree-1 polynomial), exposes its dual objective and KKT residual for
verification, and handles multiclass problems one-vs-one with majority
voting. Tie-breaks everywhere follow an explicit class order.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

import numpy as np

__all__ = [
    "DegenerateTrainingError",
    "GaussianNB",
    "SMOConfig",
    "BinarySMO",
    "SVMClassifier",
]


class DegenerateTrainingError(ValueError):
    """The training set cannot support the requested classifier."""


def _ordered_classes(y: Sequence[str], class_order: Sequence[str] | None) -> list[str]:
    present = set(y)
    if class_order is None:
        return sorted(present)
    ordered = [c for c in class_order if c in present]
    stray = present.difference(class_order)
    if stray:
        raise DegenerateTrainingError(f"labels outside class order: {sorted(stray)}")
    return ordered


class GaussianNB:
    """Per-class, per-feature Gaussian likelihoods with class priors.

    Variances are population variances (ddof=0) floored at ``var_floor``.
    Prediction takes the argmax of the log-posterior; exact ties resolve to
    the class that comes first in ``class_order``.
    """

    def __init__(self, var_floor: float = 1e-9):
        self.var_floor = var_floor
        self.classes_: list[str] = []
        self.means_: np.ndarray | None = None
        self.vars_: np.ndarray | None = None
        self.log_priors_: np.ndarray | None = None

    def fit(self, X: np.ndarray, y: Sequence[str], class_order: Sequence[str] | None = None) -> "GaussianNB":
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y)
        self.classes_ = _ordered_classes(y, class_order)
        if len(self.classes_) < 2:
            raise DegenerateTrainingError("need at least two classes to fit")
        means, variances, priors = [], [], []
        for cls in self.classes_:
            rows = X[y == cls]
            if rows.shape[0] < 2:
                raise DegenerateTrainingError(f"class {cls!r} has fewer than 2 points")
            means.append(rows.mean(axis=0))
            variances.append(np.maximum(rows.var(axis=0), self.var_floor))
            priors.append(rows.shape[0] / X.shape[0])
        self.means_ = np.array(means)
        self.vars_ = np.array(variances)
        self.log_priors_ = np.log(priors)
        return self

    def log_joint(self, X: np.ndarray) -> np.ndarray:
        """Unnormalized log-posterior, one column per class in class order."""
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        # log N(x; mu, var) summed over features, plus the log prior
        diff = X[:, None, :] - self.means_[None, :, :]
        ll = -0.5 * (np.log(2.0 * np.pi * self.vars_) + diff**2 / self.vars_).sum(axis=2)
        return ll + self.log_priors_

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        lj = self.log_joint(X)
        lj -= lj.max(axis=1, keepdims=True)
        p = np.exp(lj)
        return p / p.sum(axis=1, keepdims=True)

    def predict(self, X: np.ndarray) -> list[str]:
        lj = self.log_joint(X)
        # argmax returns the first maximum: earlier class wins exact ties
        return [self.classes_[i] for i in lj.argmax(axis=1)]


@dataclass(frozen=True)
class SMOConfig:
    """SMO solver settings: linear kernel, soft margin C, stopping rules."""

    C: float = 1.0
    tol: float = 1e-3
    eps: float = 1e-12
    max_passes: int = 10_000


@dataclass
class BinarySMO:
    """Binary soft-margin SVM solved by sequential minimal optimization.

    Labels are +1/-1. The decision function is u(x) = w.x - b with
    w = sum_i alpha_i y_i x_i (linear kernel). ``converged`` reports whether
    the KKT conditions were met within the pass cap; when they were not,
    the best-so-far multipliers are kept.
    """

    config: SMOConfig = field(default_factory=SMOConfig)
    record_objective: bool = False

    def fit(self, X: np.ndarray, y: np.ndarray) -> "BinarySMO":
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        if X.shape[0] != y.shape[0]:
            raise ValueError("X and y length mismatch")
        if X.shape[0] < 2 or len(np.unique(y)) < 2:
            raise DegenerateTrainingError("binary subproblem needs points of both labels")
        if not np.all(np.isin(y, (-1.0, 1.0))):
            raise ValueError("labels must be +1/-1")

        self.X = X
        self.y = y
        n = X.shape[0]
        self.K = X @ X.T  # degree-1 polynomial kernel
        self.alpha = np.zeros(n)
        self.b = 0.0
        # E_i = u_i - y_i; with all alphas at 0, u = -b = 0
        self.errors = -y.copy()
        self.objective_history: list[float] = []
        if self.record_objective:
            self.objective_history.append(self._dual_objective())

        C, tol = self.config.C, self.config.tol
        passes = 0
        examine_all = True
        self.converged = False
        while passes < self.config.max_passes:
            changed = 0
            if examine_all:
                candidates = range(n)
            else:
                candidates = np.flatnonzero((self.alpha > 0) & (self.alpha < C))
            for i2 in candidates:
                r2 = self.errors[i2] * self.y[i2]
                if (r2 < -tol and self.alpha[i2] < C) or (r2 > tol and self.alpha[i2] > 0):
                    changed += self._examine(i2)
            passes += 1
            if examine_all:
                if changed == 0:
                    self.converged = True
                    break
                examine_all = False
            elif changed == 0:
                examine_all = True
        return self

    def _examine(self, i2: int) -> int:
        # Second-choice heuristic: the non-bound point with the largest
        # |E1 - E2| makes the biggest step; then fall back to scanning.
        non_bound = np.flatnonzero((self.alpha > 0) & (self.alpha < self.config.C))
        if non_bound.size > 1:
            i1 = int(non_bound[np.argmax(np.abs(self.errors[non_bound] - self.errors[i2]))])
            if self._take_step(i1, i2):
                return 1
        for i1 in non_bound:
            if self._take_step(int(i1), i2):
                return 1
        for i1 in range(self.X.shape[0]):
            if self._take_step(i1, i2):
                return 1
        return 0

    def _take_step(self, i1: int, i2: int) -> bool:
        if i1 == i2:
            return False
        C, eps = self.config.C, self.config.eps
        a1, a2 = self.alpha[i1], self.alpha[i2]
        y1, y2 = self.y[i1], self.y[i2]
        E1, E2 = self.errors[i1], self.errors[i2]
        s = y1 * y2
        if y1 != y2:
            L, H = max(0.0, a2 - a1), min(C, C + a2 - a1)
        else:
            L, H = max(0.0, a1 + a2 - C), min(C, a1 + a2)
        if L == H:
            return False
        k11, k12, k22 = self.K[i1, i1], self.K[i1, i2], self.K[i2, i2]
        eta = k11 + k22 - 2.0 * k12
        if eta > 0.0:
            a2_new = a2 + y2 * (E1 - E2) / eta
            a2_new = min(max(a2_new, L), H)
        else:
            # Flat or concave direction: evaluate the objective at both ends.
            f1 = y1 * (E1 + self.b) - a1 * k11 - s * a2 * k12
            f2 = y2 * (E2 + self.b) - s * a1 * k12 - a2 * k22
            L1 = a1 + s * (a2 - L)
            H1 = a1 + s * (a2 - H)
            obj_l = L1 * f1 + L * f2 + 0.5 * L1 * L1 * k11 + 0.5 * L * L * k22 + s * L * L1 * k12
            obj_h = H1 * f1 + H * f2 + 0.5 * H1 * H1 * k11 + 0.5 * H * H * k22 + s * H * H1 * k12
            if obj_l < obj_h - eps:
                a2_new = L
            elif obj_l > obj_h + eps:
                a2_new = H
            else:
                a2_new = a2
        if abs(a2_new - a2) < eps * (a2_new + a2 + eps):
            return False
        a1_new = a1 + s * (a2 - a2_new)

        d1, d2 = y1 * (a1_new - a1), y2 * (a2_new - a2)
        b1 = E1 + d1 * k11 + d2 * k12 + self.b
        b2 = E2 + d1 * k12 + d2 * k22 + self.b
        if 0.0 < a1_new < C:
            b_new = b1
        elif 0.0 < a2_new < C:
            b_new = b2
        else:
            b_new = 0.5 * (b1 + b2)

        self.errors += d1 * self.K[i1] + d2 * self.K[i2] - (b_new - self.b)
        self.alpha[i1], self.alpha[i2] = a1_new, a2_new
        self.b = b_new
        if self.record_objective:
            self.objective_history.append(self._dual_objective())
        return True

    def _dual_objective(self) -> float:
        v = self.alpha * self.y
        return float(self.alpha.sum() - 0.5 * v @ self.K @ v)

    def decision(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        w = (self.alpha * self.y) @ self.X
        return X @ w - self.b

    def margins(self) -> np.ndarray:
        """y_i * u(x_i) on the training points."""
        return self.y * ((self.alpha * self.y) @ self.K - self.b)

    def kkt_violation(self) -> float:
        """Largest KKT residual; at convergence this is <= config.tol."""
        m = self.margins()
        C = self.config.C
        viol = np.zeros_like(m)
        lower = self.alpha <= 0.0
        upper = self.alpha >= C
        interior = ~lower & ~upper
        viol[lower] = 1.0 - m[lower]
        viol[upper] = m[upper] - 1.0
        viol[interior] = np.abs(1.0 - m[interior])
        return float(max(0.0, viol.max()))


class SVMClassifier:
    """One-vs-one multiclass SVM over :class:`BinarySMO` submodels.

    Features are min-max scaled into [0, 1] using the training data, the
    same input filtering the reference SMO implementation applies by
    default; without it a soft margin of C=1 collapses to majority voting
    whenever the raw features live on a narrow band. Each class pair trains
    one binary model (positive label = the class earlier in class order).
    Prediction is by majority vote; vote ties resolve to the earliest class
    in class order. ``converged`` is True only when every pairwise solver
    met its KKT stopping rule.
    """

    def __init__(self, config: SMOConfig = SMOConfig(), record_objective: bool = False):
        self.config = config
        self.record_objective = record_objective
        self.classes_: list[str] = []
        self.models_: dict[tuple[str, str], BinarySMO] = {}

    def _scale(self, X: np.ndarray) -> np.ndarray:
        return (X - self._lo) / self._span

    def fit(self, X: np.ndarray, y: Sequence[str], class_order: Sequence[str] | None = None) -> "SVMClassifier":
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y)
        self.classes_ = _ordered_classes(y, class_order)
        if len(self.classes_) < 2:
            raise DegenerateTrainingError("need at least two classes to fit")
        self._lo = X.min(axis=0)
        span = X.max(axis=0) - self._lo
        self._span = np.where(span > 0.0, span, 1.0)  # constant features map to 0
        scaled = self._scale(X)
        self.models_ = {}
        for pos, neg in combinations(self.classes_, 2):
            mask = (y == pos) | (y == neg)
            sub_y = np.where(y[mask] == pos, 1.0, -1.0)
            model = BinarySMO(config=self.config, record_objective=self.record_objective)
            model.fit(scaled[mask], sub_y)
            self.models_[(pos, neg)] = model
        self.converged = all(m.converged for m in self.models_.values())
        return self

    def predict(self, X: np.ndarray) -> list[str]:
        X = self._scale(np.atleast_2d(np.asarray(X, dtype=np.float64)))
        index = {c: i for i, c in enumerate(self.classes_)}
        votes = np.zeros((X.shape[0], len(self.classes_)), dtype=int)
        for (pos, neg), model in self.models_.items():
            u = model.decision(X)
            votes[u >= 0.0, index[pos]] += 1
            votes[u < 0.0, index[neg]] += 1
        # argmax returns the first maximum: earlier class wins vote ties
        return [self.classes_[i] for i in votes.argmax(axis=1)]
