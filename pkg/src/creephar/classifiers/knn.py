"""k-nearest neighbours with equal vote weights and Euclidean distance."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .base import InputError, TrainingError


@dataclass
class KnnModel:
    rows: np.ndarray
    labels: np.ndarray
    k: int = 10

    kind = "knn"

    def neighbours(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] != self.rows.shape[1]:
            raise InputError(f"expected {self.rows.shape[1]} features, got {X.shape[1]}")
        d2 = ((X[:, None, :] - self.rows[None, :, :]) ** 2).sum(axis=2)
        # stable sort keeps the lower training index first on equal distance
        return np.argsort(d2, axis=1, kind="stable")[:, : self.k]

    def predict(self, X) -> np.ndarray:
        nb = self.neighbours(X)
        n_cls = int(self.labels.max()) + 1
        out = np.empty(len(nb), dtype=int)
        for r, idx in enumerate(nb):
            counts = np.bincount(self.labels[idx], minlength=n_cls)
            out[r] = int(np.argmax(counts))  # first max = smallest class code
        return out


def train_knn(X, labels, k: int = 10) -> KnnModel:
    X = np.asarray(X, dtype=float)
    labels = np.asarray(labels, dtype=int)
    if len(X) == 0:
        raise TrainingError("KNN needs at least one training row")
    if k < 1 or k > len(X):
        raise TrainingError(f"k={k} must lie in [1, {len(X)}]")
    return KnnModel(X.copy(), labels.copy(), k)


def predict_knn(model: KnnModel, row) -> int:
    return int(model.predict(np.atleast_2d(row))[0])
