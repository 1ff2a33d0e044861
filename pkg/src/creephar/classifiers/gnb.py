"""Gaussian naive Bayes evaluated in the log domain."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .base import InputError, TrainingError

VARIANCE_FLOOR = 1e-9  # relative to each feature's global variance


@dataclass
class GnbModel:
    classes: np.ndarray
    priors: np.ndarray
    means: np.ndarray  # (n_classes, n_features)
    variances: np.ndarray

    kind = "gnb"

    def joint_log_likelihood(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] != self.means.shape[1]:
            raise InputError(f"expected {self.means.shape[1]} features, got {X.shape[1]}")
        diff = X[:, None, :] - self.means[None, :, :]
        ll = -0.5 * (np.log(2 * np.pi * self.variances)[None] + diff ** 2 / self.variances[None])
        return np.log(self.priors)[None, :] + ll.sum(axis=2)

    def log_posterior(self, X) -> np.ndarray:
        jll = self.joint_log_likelihood(X)
        top = jll.max(axis=1, keepdims=True)
        return jll - (top + np.log(np.exp(jll - top).sum(axis=1, keepdims=True)))

    def predict(self, X) -> np.ndarray:
        # argmax returns the first maximum, i.e. the smallest class code
        return self.classes[np.argmax(self.joint_log_likelihood(X), axis=1)]


def train_gnb(X, labels, priors=None) -> GnbModel:
    X = np.asarray(X, dtype=float)
    labels = np.asarray(labels, dtype=int)
    if len(X) == 0:
        raise TrainingError("naive Bayes needs training rows")
    classes = np.unique(labels)
    counts = np.array([(labels == c).sum() for c in classes])
    if np.any(counts < 2):
        bad = classes[counts < 2].tolist()
        raise TrainingError(f"class(es) {bad} have fewer than 2 rows")
    gv = X.var(axis=0)
    # constant columns still need a positive variance
    floor = VARIANCE_FLOOR * np.where(gv > 0, gv, max(float(gv.max()), 1.0))
    means = np.stack([X[labels == c].mean(axis=0) for c in classes])
    var = np.stack([X[labels == c].var(axis=0) for c in classes])
    var = np.maximum(var, floor[None, :])
    if priors is None:
        priors = counts / counts.sum()
    priors = np.asarray(priors, dtype=float)
    priors = priors / priors.sum()
    return GnbModel(classes, priors, means, var)


def predict_gnb(model: GnbModel, row) -> int:
    return int(model.predict(np.atleast_2d(row))[0])
