"""The five classifiers and a common fit/predict/serialize surface."""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .base import ClassifierError, ConfigurationError, InputError, TrainingError
from .dtw import DtwTemplates, dtw_classify, dtw_distance, medoid_templates, pairwise_dtw
from .gnb import GnbModel, predict_gnb, train_gnb
from .knn import KnnModel, predict_knn, train_knn
from .svm import BinarySvm, SvmModel, poly_kernel, predict_svm, train_svm
from .tree import Node, TreeModel, gini, predict_tree, train_tree

CLASSIFIER_NAMES = ("svm", "knn", "gnb", "tree", "dtw")
FEATURE_CLASSIFIERS = ("svm", "knn", "gnb", "tree")

MODEL_FORMAT = "creephar-model"
MODEL_VERSION = 1


def fit_features(name: str, X, y, **params):
    """Train one of the feature-based classifiers with the fixed defaults."""
    if name == "svm":
        return train_svm(X, y, C=params.get("C", 1.0), kernel_degree=params.get("degree", 3),
                         offset=params.get("offset", 1.0))
    if name == "knn":
        return train_knn(X, y, k=params.get("k", 10))
    if name == "gnb":
        return train_gnb(X, y)
    if name == "tree":
        return train_tree(X, y, max_splits=params.get("max_splits", 20), n_classes=params.get("n_classes"))
    raise ConfigurationError(f"unknown classifier {name!r}; choose from {', '.join(CLASSIFIER_NAMES)}")


def _arr(a):
    return np.asarray(a).tolist()


def _node_to_dict(node: Node) -> dict:
    d = {"counts": _arr(node.counts)}
    if not node.is_leaf:
        d.update(feature=node.feature, threshold=node.threshold,
                 left=_node_to_dict(node.left), right=_node_to_dict(node.right))
    return d


def _node_from_dict(d: dict) -> Node:
    node = Node(np.asarray(d["counts"], dtype=int))
    if "feature" in d:
        node.feature = int(d["feature"])
        node.threshold = float(d["threshold"])
        node.left = _node_from_dict(d["left"])
        node.right = _node_from_dict(d["right"])
    return node


def model_to_dict(model) -> dict:
    kind = model.kind
    if kind == "svm":
        params = {
            "classes": list(model.classes), "n_features": model.n_features,
            "box_constraint": model.box_constraint, "degree": model.degree, "offset": model.offset,
            "pairs": [{
                "positive": m.positive, "negative": m.negative, "bias": m.bias,
                "support_vectors": _arr(m.support_vectors), "dual_coef": _arr(m.dual_coef),
                "alpha": _arr(m.alpha), "sv_labels": _arr(m.sv_labels),
                "kernel_scale": m.kernel_scale, "iterations": m.iterations,
            } for m in model.pairs],
        }
    elif kind == "knn":
        params = {"k": model.k, "rows": _arr(model.rows), "labels": _arr(model.labels)}
    elif kind == "gnb":
        params = {"classes": _arr(model.classes), "priors": _arr(model.priors),
                  "means": _arr(model.means), "variances": _arr(model.variances)}
    elif kind == "tree":
        params = {"n_features": model.n_features, "n_classes": model.n_classes,
                  "max_splits": model.max_splits, "n_splits": model.n_splits,
                  "root": _node_to_dict(model.root)}
    elif kind == "dtw":
        params = {"series": _arr(model.series), "labels": _arr(model.labels),
                  "source_index": _arr(model.source_index)}
    else:
        raise ConfigurationError(f"cannot serialize model kind {kind!r}")
    return {"format": MODEL_FORMAT, "version": MODEL_VERSION, "kind": kind, "params": params}


def model_from_dict(d: dict):
    if d.get("format") != MODEL_FORMAT:
        raise ConfigurationError("not a creephar model document")
    if d.get("version") != MODEL_VERSION:
        raise ConfigurationError(f"unsupported model version {d.get('version')}")
    kind, p = d["kind"], d["params"]
    if kind == "svm":
        pairs = [BinarySvm(np.asarray(m["support_vectors"], float), np.asarray(m["dual_coef"], float),
                           np.asarray(m["alpha"], float), np.asarray(m["sv_labels"], int), m["bias"],
                           m["positive"], m["negative"], p["degree"], p["offset"], m["kernel_scale"],
                           m["iterations"]) for m in p["pairs"]]
        return SvmModel(pairs, tuple(p["classes"]), p["n_features"], p["box_constraint"], p["degree"], p["offset"])
    if kind == "knn":
        return KnnModel(np.asarray(p["rows"], float), np.asarray(p["labels"], int), p["k"])
    if kind == "gnb":
        return GnbModel(np.asarray(p["classes"], int), np.asarray(p["priors"], float),
                        np.asarray(p["means"], float), np.asarray(p["variances"], float))
    if kind == "tree":
        return TreeModel(_node_from_dict(p["root"]), p["n_features"], p["n_classes"],
                         p["max_splits"], p["n_splits"])
    if kind == "dtw":
        return DtwTemplates(np.asarray(p["series"], float), np.asarray(p["labels"], int),
                            np.asarray(p["source_index"], int))
    raise ConfigurationError(f"unknown model kind {kind!r}")


def save_model(model, path, extra: dict | None = None) -> None:
    doc = model_to_dict(model)
    if extra:
        doc["header"] = extra
    Path(path).write_text(json.dumps(doc, sort_keys=True) + "\n", encoding="utf-8")


def load_model(path):
    return model_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
