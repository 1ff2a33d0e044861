"""Gini-impurity classification tree grown best-first under a split budget."""
from __future__ import annotations

import heapq
from dataclasses import dataclass

import numpy as np

from .base import InputError, TrainingError


def gini(counts) -> float:
    counts = np.asarray(counts, dtype=float)
    n = counts.sum()
    if n == 0:
        return 0.0
    p = counts / n
    return float(1.0 - np.dot(p, p))


@dataclass
class Node:
    counts: np.ndarray  # class distribution of training rows reaching the node
    feature: int = -1
    threshold: float = 0.0
    left: "Node | None" = None
    right: "Node | None" = None

    @property
    def is_leaf(self) -> bool:
        return self.left is None

    @property
    def prediction(self) -> int:
        return int(np.argmax(self.counts))


def best_split(X: np.ndarray, y: np.ndarray, n_classes: int):
    """Return ``(gain, feature, threshold)`` of the best Gini split, or None.

    ``gain`` is the impurity decrease of the node (not weighted by its size).
    Thresholds are midpoints between consecutive distinct values.
    """
    n = len(y)
    parent = gini(np.bincount(y, minlength=n_classes))
    best = None
    for f in range(X.shape[1]):
        order = np.argsort(X[:, f], kind="stable")
        xs = X[order, f]
        onehot = np.zeros((n, n_classes))
        onehot[np.arange(n), y[order]] = 1.0
        left = np.cumsum(onehot, axis=0)[:-1]
        right = left[-1] + onehot[-1] - left
        valid = xs[1:] > xs[:-1]
        if not valid.any():
            continue
        nl = np.arange(1, n)
        nr = n - nl
        gl = 1.0 - ((left / nl[:, None]) ** 2).sum(axis=1)
        gr = 1.0 - ((right / nr[:, None]) ** 2).sum(axis=1)
        child = (nl * gl + nr * gr) / n
        child = np.where(valid, child, np.inf)
        k = int(np.argmin(child))
        gain = parent - child[k]
        if best is None or gain > best[0] + 1e-15:
            best = (gain, f, 0.5 * (xs[k] + xs[k + 1]))
    if best is None or best[0] <= 1e-15:
        return None
    return best


@dataclass
class TreeModel:
    root: Node
    n_features: int
    n_classes: int
    max_splits: int = 20
    n_splits: int = 0

    kind = "tree"

    def predict(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] != self.n_features:
            raise InputError(f"expected {self.n_features} features, got {X.shape[1]}")
        out = np.empty(len(X), dtype=int)
        for r, x in enumerate(X):
            node = self.root
            while not node.is_leaf:
                node = node.left if x[node.feature] <= node.threshold else node.right
            out[r] = node.prediction
        return out

    def internal_nodes(self) -> int:
        stack, count = [self.root], 0
        while stack:
            node = stack.pop()
            if not node.is_leaf:
                count += 1
                stack.extend((node.left, node.right))
        return count


def train_tree(X, labels, max_splits: int = 20, n_classes: int | None = None) -> TreeModel:
    X = np.asarray(X, dtype=float)
    y = np.asarray(labels, dtype=int)
    if len(X) == 0:
        raise TrainingError("tree needs training rows")
    n_classes = n_classes or int(y.max()) + 1
    n = len(y)
    root = Node(np.bincount(y, minlength=n_classes))
    # frontier ordered by size-weighted gain; the counter keeps ties in
    # creation order
    heap, counter = [], 0

    def push(node, idx):
        nonlocal counter
        if len(idx) < 2 or gini(node.counts) == 0.0:
            return
        split = best_split(X[idx], y[idx], n_classes)
        if split is None:
            return
        gain, f, thr = split
        heapq.heappush(heap, (-gain * len(idx) / n, counter, node, idx, f, thr))
        counter += 1

    push(root, np.arange(n))
    splits = 0
    while heap and splits < max_splits:
        _, _, node, idx, f, thr = heapq.heappop(heap)
        go_left = X[idx, f] <= thr
        li, ri = idx[go_left], idx[~go_left]
        node.feature, node.threshold = f, float(thr)
        node.left = Node(np.bincount(y[li], minlength=n_classes))
        node.right = Node(np.bincount(y[ri], minlength=n_classes))
        splits += 1
        push(node.left, li)
        push(node.right, ri)
    return TreeModel(root, X.shape[1], n_classes, max_splits, splits)


def predict_tree(model: TreeModel, row) -> int:
    return int(model.predict(np.atleast_2d(row))[0])
