"""Dynamic time warping distance and nearest-template classification.

The cost is the unconstrained recurrence over the full n x m grid::

    D(a, b) = |x[a] - y[b]| + min(D(a-1, b), D(a, b-1), D(a-1, b-1))

with ``D(0, 0) = |x[0] - y[0]|``; the first row and column accumulate.
"""
from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np

# the bundled TBB is too old for numba; pick a layer that needs nothing extra
if numba.config.THREADING_LAYER == "default":
    numba.config.THREADING_LAYER = "workqueue"

from .base import ConfigurationError, InputError


@numba.njit(cache=True)
def _dtw(x, y):
    n, m = len(x), len(y)
    prev = np.empty(m)
    cur = np.empty(m)
    prev[0] = abs(x[0] - y[0])
    for b in range(1, m):
        prev[b] = prev[b - 1] + abs(x[0] - y[b])
    for a in range(1, n):
        cur[0] = prev[0] + abs(x[a] - y[0])
        for b in range(1, m):
            best = prev[b - 1]
            if prev[b] < best:
                best = prev[b]
            if cur[b - 1] < best:
                best = cur[b - 1]
            cur[b] = abs(x[a] - y[b]) + best
        prev, cur = cur, prev
    return prev[m - 1]


@numba.njit(cache=True, parallel=True)
def _pairwise(A, B):
    out = np.empty((A.shape[0], B.shape[0]))
    for i in numba.prange(A.shape[0]):
        for j in range(B.shape[0]):
            out[i, j] = _dtw(A[i], B[j])
    return out


@numba.njit(cache=True, parallel=True)
def _self_pairwise(A):
    n = A.shape[0]
    out = np.zeros((n, n))
    for i in numba.prange(n):
        for j in range(i + 1, n):
            out[i, j] = _dtw(A[i], A[j])
    for i in range(n):
        for j in range(i + 1, n):
            out[j, i] = out[i, j]
    return out


def _series(x) -> np.ndarray:
    x = np.ascontiguousarray(np.asarray(x, dtype=float).ravel())
    if len(x) == 0:
        raise InputError("DTW needs non-empty series")
    return x


def dtw_distance(x, y) -> float:
    return float(_dtw(_series(x), _series(y)))


def pairwise_dtw(A, B=None) -> np.ndarray:
    """DTW between every row of ``A`` and every row of ``B`` (or ``A``)."""
    A = np.ascontiguousarray(np.atleast_2d(np.asarray(A, dtype=float)))
    if A.shape[1] == 0:
        raise InputError("DTW needs non-empty series")
    if B is None:
        return _self_pairwise(A)
    B = np.ascontiguousarray(np.atleast_2d(np.asarray(B, dtype=float)))
    if B.shape[1] == 0:
        raise InputError("DTW needs non-empty series")
    return _pairwise(A, B)


@dataclass
class DtwTemplates:
    series: np.ndarray  # one reference series per row
    labels: np.ndarray
    source_index: np.ndarray  # row of the training set each template came from

    kind = "dtw"

    def predict(self, X) -> np.ndarray:
        D = pairwise_dtw(X, self.series)
        # order templates by class code so argmin ties resolve to the smallest
        order = np.argsort(self.labels, kind="stable")
        return self.labels[order][np.argmin(D[:, order], axis=1)]


def medoid_templates(windows, labels, train_index=None, distances=None,
                     n_classes: int | None = None) -> DtwTemplates:
    """Per class, the training window with least summed DTW to its classmates.

    ``distances`` may hold a precomputed DTW matrix over all ``windows``;
    only its train-by-train block is read.
    """
    windows = np.asarray(windows, dtype=float)
    labels = np.asarray(labels, dtype=int)
    train_index = np.arange(len(labels)) if train_index is None else np.asarray(train_index)
    classes = np.unique(labels[train_index])
    if n_classes is not None and len(classes) < n_classes:
        missing = sorted(set(range(n_classes)) - set(classes.tolist()))
        raise ConfigurationError(f"no training windows for class(es) {missing}")
    picks = []
    for c in classes:
        idx = train_index[labels[train_index] == c]
        if distances is not None:
            block = distances[np.ix_(idx, idx)]
        else:
            block = pairwise_dtw(windows[idx])
        picks.append(int(idx[int(np.argmin(block.sum(axis=1)))]))
    picks = np.array(picks)
    return DtwTemplates(windows[picks].copy(), labels[picks].copy(), picks)


def dtw_classify(window, templates: DtwTemplates, n_classes: int | None = None) -> int:
    if n_classes is not None:
        missing = sorted(set(range(n_classes)) - set(np.unique(templates.labels).tolist()))
        if missing:
            raise ConfigurationError(f"templates missing class(es) {missing}")
    return int(templates.predict(np.atleast_2d(window))[0])
