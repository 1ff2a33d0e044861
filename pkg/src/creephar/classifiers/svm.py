"""Soft-margin polynomial-kernel SVM trained by SMO, combined one-vs-one."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .base import InputError, TrainingError


def poly_kernel(U, V, degree: int = 3, offset: float = 1.0, scale: float = 1.0) -> np.ndarray:
    """``(scale * u.v + offset) ** degree`` for every row pair."""
    return (scale * np.atleast_2d(U) @ np.atleast_2d(V).T + offset) ** degree


class ConvergenceError(TrainingError):
    def __init__(self, msg: str, residual: float):
        super().__init__(f"{msg} (KKT gap {residual:.3e})")
        self.residual = residual


@dataclass
class BinarySvm:
    """Decision ``f(x) = sum_i coef_i K(sv_i, x) + bias`` with ``coef_i = alpha_i y_i``."""
    support_vectors: np.ndarray
    dual_coef: np.ndarray  # alpha_i * y_i
    alpha: np.ndarray
    sv_labels: np.ndarray  # +1 / -1
    bias: float
    positive: int  # class code mapped to +1
    negative: int
    degree: int = 3
    offset: float = 1.0
    kernel_scale: float = 1.0
    iterations: int = 0

    def decision(self, X: np.ndarray) -> np.ndarray:
        K = poly_kernel(X, self.support_vectors, self.degree, self.offset, self.kernel_scale)
        return K @ self.dual_coef + self.bias


def smo(K: np.ndarray, y: np.ndarray, C: float = 1.0, tol: float = 1e-3,
        max_iter: int = 1_000_000):
    """Solve ``min 1/2 a'Qa - e'a, 0 <= a <= C, y'a = 0`` with ``Q = yy' * K``.

    Working pairs are the maximal violating pair; iteration stops when the
    gap between the up and down sets falls below ``tol``.  Returns
    ``(alpha, bias, iterations)``.
    """
    n = len(y)
    y = y.astype(float)
    Q = (y[:, None] * y[None, :]) * K
    alpha = np.zeros(n)
    grad = -np.ones(n)  # Q @ alpha - 1
    eps = 1e-12
    for it in range(max_iter):
        yg = -y * grad
        up = ((y > 0) & (alpha < C - eps)) | ((y < 0) & (alpha > eps))
        low = ((y > 0) & (alpha > eps)) | ((y < 0) & (alpha < C - eps))
        if not up.any() or not low.any():
            break
        i = int(np.flatnonzero(up)[np.argmax(yg[up])])
        j = int(np.flatnonzero(low)[np.argmin(yg[low])])
        gap = yg[i] - yg[j]
        if gap < tol:
            break
        # move along y_i e_i - y_j e_j
        quad = K[i, i] + K[j, j] - 2.0 * K[i, j]
        if quad <= 0:
            quad = 1e-12
        step = gap / quad
        # box limits for alpha_i += y_i*step, alpha_j -= y_j*step
        lim_i = C - alpha[i] if y[i] > 0 else alpha[i]
        lim_j = alpha[j] if y[j] > 0 else C - alpha[j]
        step = min(step, lim_i, lim_j)
        da_i = y[i] * step
        da_j = -y[j] * step
        alpha[i] += da_i
        alpha[j] += da_j
        alpha[i] = min(max(alpha[i], 0.0), C)
        alpha[j] = min(max(alpha[j], 0.0), C)
        grad += Q[:, i] * da_i + Q[:, j] * da_j
    else:
        yg = -y * grad
        raise ConvergenceError(f"SMO did not converge in {max_iter} pair updates", float(_gap(alpha, y, yg, C)))
    return alpha, _bias(alpha, y, -y * grad, C), it


def _gap(alpha, y, yg, C, eps=1e-12):
    up = ((y > 0) & (alpha < C - eps)) | ((y < 0) & (alpha > eps))
    low = ((y > 0) & (alpha > eps)) | ((y < 0) & (alpha < C - eps))
    if not up.any() or not low.any():
        return 0.0
    return yg[up].max() - yg[low].min()


def _bias(alpha, y, yg, C, eps=1e-12):
    free = (alpha > eps) & (alpha < C - eps)
    if free.any():
        return float(yg[free].mean())
    up = ((y > 0) & (alpha < C - eps)) | ((y < 0) & (alpha > eps))
    low = ((y > 0) & (alpha > eps)) | ((y < 0) & (alpha < C - eps))
    hi = yg[up].max() if up.any() else np.inf
    lo = yg[low].min() if low.any() else -np.inf
    if np.isfinite(hi) and np.isfinite(lo):
        return float((hi + lo) / 2)
    return float(hi if np.isfinite(hi) else lo)


def kkt_residuals(model: BinarySvm, X: np.ndarray, y: np.ndarray, alpha: np.ndarray, C: float) -> np.ndarray:
    """Per-row violation of the soft-margin KKT conditions (0 when satisfied)."""
    coef = alpha * y
    K = poly_kernel(X, X, model.degree, model.offset, model.kernel_scale)
    margin = y * (K @ coef + model.bias)
    eps = 1e-12
    res = np.zeros(len(y))
    at0 = alpha <= eps
    atC = alpha >= C - eps
    free = ~at0 & ~atC
    res[at0] = np.maximum(0.0, 1.0 - margin[at0])
    res[atC] = np.maximum(0.0, margin[atC] - 1.0)
    res[free] = np.abs(margin[free] - 1.0)
    return res


def train_binary(X, y, positive: int, negative: int, C: float = 1.0, degree: int = 3,
                 offset: float = 1.0, kernel_scale: float = 1.0, tol: float = 1e-3,
                 max_iter: int = 1_000_000, keep_training: bool = False) -> BinarySvm:
    K = poly_kernel(X, X, degree, offset, kernel_scale)
    alpha, bias, it = smo(K, y, C, tol, max_iter)
    sv = alpha > 1e-12
    model = BinarySvm(X[sv].copy(), (alpha * y)[sv], alpha[sv], y[sv].astype(int), bias,
                      positive, negative, degree, offset, kernel_scale, it)
    if keep_training:
        model._train = (X, y, alpha)
    return model


@dataclass
class SvmModel:
    pairs: list = field(default_factory=list)  # BinarySvm, one per class pair
    classes: tuple = ()
    n_features: int = 0
    box_constraint: float = 1.0
    degree: int = 3
    offset: float = 1.0

    kind = "svm"

    def votes(self, X: np.ndarray):
        X = _check_dim(X, self.n_features)
        idx = {c: k for k, c in enumerate(self.classes)}
        votes = np.zeros((len(X), len(self.classes)))
        strength = np.zeros_like(votes)
        for m in self.pairs:
            f = m.decision(X)
            win = np.where(f >= 0, idx[m.positive], idx[m.negative])
            rows = np.arange(len(X))
            votes[rows, win] += 1
            strength[rows, win] += np.abs(f)
        return votes, strength

    def predict(self, X) -> np.ndarray:
        votes, strength = self.votes(X)
        # lexicographic: most votes, then largest summed |f|, then lowest code
        out = np.empty(len(votes), dtype=int)
        for r in range(len(votes)):
            best = np.flatnonzero(votes[r] == votes[r].max())
            if len(best) > 1:
                s = strength[r, best]
                best = best[s == s.max()]
            out[r] = self.classes[int(best[0])]
        return out


def _check_dim(X, n_features):
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if X.shape[1] != n_features:
        raise InputError(f"expected {n_features} features, got {X.shape[1]}")
    return X


def train_svm(X, labels, C: float = 1.0, kernel_degree: int = 3, offset: float = 1.0,
              tol: float = 1e-3, max_iter: int = 1_000_000, keep_training: bool = False) -> SvmModel:
    X = np.asarray(X, dtype=float)
    labels = np.asarray(labels, dtype=int)
    classes = tuple(int(c) for c in np.unique(labels))
    if len(classes) < 2:
        raise TrainingError("SVM needs at least two classes")
    pairs = []
    for a, b in combinations(classes, 2):
        mask = (labels == a) | (labels == b)
        y = np.where(labels[mask] == a, 1, -1)
        try:
            pairs.append(train_binary(X[mask], y, a, b, C, kernel_degree, offset, 1.0, tol, max_iter,
                                      keep_training))
        except ConvergenceError as exc:
            raise ConvergenceError(f"pair ({a}, {b}): {exc}", exc.residual) from None
    return SvmModel(pairs, classes, X.shape[1], C, kernel_degree, offset)


def predict_svm(model: SvmModel, row) -> int:
    return int(model.predict(np.atleast_2d(row))[0])
