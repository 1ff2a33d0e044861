"""Cross-validated evaluation: folds, confusion matrices, metrics, sweeps."""
from __future__ import annotations

import json
import warnings
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from .classifiers import (CLASSIFIER_NAMES, ConfigurationError, TrainingError, fit_features,
                          medoid_templates, pairwise_dtw)
from .features import FeatureMatrix, MinMaxScaler, build_feature_matrix
from .synth import Activity, Dataset

N_CLASSES = len(Activity)


class PlanningError(ValueError):
    pass


class EvaluationError(RuntimeError):
    pass


@dataclass(frozen=True)
class PipelineConfig:
    classifier: str = "svm"
    window_s: float = 4.0
    windows_per_recording: int = 2
    use_dwt: bool = True
    wavelet: str = "dmey"
    levels: int = 5
    boundary_mode: str = "periodic"
    normalization: str = "fold"  # "fold" (training folds only) or "global"
    fold_mode: str = "stratified"  # or "subject"
    k: int = 5
    seed: int = 0
    signal: str = "magnitude"
    reference: str = "median"
    per_band: bool = False

    def __post_init__(self):
        if self.classifier not in CLASSIFIER_NAMES:
            raise ConfigurationError(
                f"unknown classifier {self.classifier!r}; choose from {', '.join(CLASSIFIER_NAMES)}")
        if self.normalization not in ("fold", "global"):
            raise ConfigurationError(f"unknown normalization mode {self.normalization!r}")
        if self.fold_mode not in ("stratified", "subject"):
            raise ConfigurationError(f"unknown fold mode {self.fold_mode!r}")


@dataclass(frozen=True)
class FoldPlan:
    k: int
    assignments: np.ndarray  # fold index per row
    seed: int
    mode: str = "stratified"

    def test_index(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignments == fold)

    def train_index(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignments != fold)


def make_folds(labels, k: int = 5, seed: int = 0, groups=None) -> FoldPlan:
    """Stratified (or subject-grouped) k-fold assignment."""
    labels = np.asarray(labels)
    if k < 2:
        raise PlanningError("k must be at least 2 so every fold has training data")
    rng = np.random.default_rng(seed)
    assign = np.empty(len(labels), dtype=int)
    if groups is not None:
        uniq = np.unique(np.asarray(groups))
        if len(uniq) < k:
            raise PlanningError(f"{len(uniq)} groups cannot fill {k} folds")
        order = uniq[rng.permutation(len(uniq))]
        fold_of = {g: i % k for i, g in enumerate(order)}
        assign[:] = [fold_of[g] for g in groups]
        return FoldPlan(k, assign, seed, "subject")
    offset = 0
    for c in np.unique(labels):
        idx = np.flatnonzero(labels == c)
        if len(idx) < k:
            raise PlanningError(f"class {c} has {len(idx)} rows, fewer than k={k}")
        idx = idx[rng.permutation(len(idx))]
        # rotating start keeps total fold sizes within one row of each other
        assign[idx] = (offset + np.arange(len(idx))) % k
        offset = (offset + len(idx)) % k
    return FoldPlan(k, assign, seed, "stratified")


# --- metrics -----------------------------------------------------------------

def confusion_matrix(y_true, y_pred, n_classes: int = N_CLASSES) -> np.ndarray:
    cm = np.zeros((n_classes, n_classes), dtype=int)
    np.add.at(cm, (np.asarray(y_true, int), np.asarray(y_pred, int)), 1)
    return cm


@dataclass
class Metrics:
    accuracy: float
    precision: float
    recall: float
    f1: float
    per_class_precision: list
    per_class_recall: list
    per_class_f1: list


def compute_metrics(cm) -> Metrics:
    """Accuracy plus macro precision/recall/F1 over classes present in the truth.

    A class that is never predicted has precision 0.
    """
    cm = np.asarray(cm, dtype=float)
    total = cm.sum()
    if total <= 0:
        raise EvaluationError("confusion matrix is empty")
    tp = np.diag(cm)
    support = cm.sum(axis=1)
    predicted = cm.sum(axis=0)
    present = support > 0
    if not present.all():
        warnings.warn(f"class(es) {np.flatnonzero(~present).tolist()} absent from test data; "
                      "excluded from macro averages", stacklevel=2)
    with np.errstate(divide="ignore", invalid="ignore"):
        prec = np.where(predicted > 0, tp / predicted, 0.0)
        rec = np.where(support > 0, tp / support, 0.0)
        f1 = np.where(prec + rec > 0, 2 * prec * rec / (prec + rec), 0.0)
    return Metrics(
        float(tp.sum() / total),
        float(prec[present].mean()), float(rec[present].mean()), float(f1[present].mean()),
        prec.tolist(), rec.tolist(), f1.tolist(),
    )


# --- cross-validation ----------------------------------------------------------

@dataclass
class FoldResult:
    fold: int
    train_index: np.ndarray
    test_index: np.ndarray
    predictions: np.ndarray
    confusion: np.ndarray
    metrics: Metrics
    fit_index: np.ndarray  # rows used for scaling / template selection


@dataclass
class EvaluationReport:
    classifier: str
    window_s: float
    use_dwt: bool
    accuracy: float
    precision: float
    recall: float
    f1: float
    confusion: np.ndarray
    folds: list = field(default_factory=list)
    config: dict = field(default_factory=dict)

    @property
    def fold_mean(self) -> dict:
        keys = ("accuracy", "precision", "recall", "f1")
        return {k: float(np.mean([getattr(f.metrics, k) for f in self.folds])) for k in keys}

    def confusion_percent(self) -> np.ndarray:
        rows = self.confusion.sum(axis=1, keepdims=True)
        return np.where(rows > 0, 100.0 * self.confusion / np.maximum(rows, 1), 0.0)

    def to_dict(self) -> dict:
        return {
            "classifier": self.classifier,
            "window_s": self.window_s,
            "use_dwt": self.use_dwt,
            "pooled": {"accuracy": self.accuracy, "precision": self.precision,
                       "recall": self.recall, "f1": self.f1},
            "fold_mean": self.fold_mean,
            "folds": [{"fold": f.fold, "n_test": int(len(f.test_index)),
                       **{k: getattr(f.metrics, k) for k in ("accuracy", "precision", "recall", "f1")}}
                      for f in self.folds],
            "confusion": self.confusion.tolist(),
            "confusion_percent": np.round(self.confusion_percent(), 6).tolist(),
            "classes": [a.slug for a in Activity],
            "config": self.config,
        }

    def to_json(self, header: dict | None = None) -> str:
        d = self.to_dict()
        if header is not None:
            d = {"header": header, **d}
        return json.dumps(d, indent=2, sort_keys=True) + "\n"


def pipeline_features(dataset: Dataset, cfg: PipelineConfig) -> FeatureMatrix:
    return build_feature_matrix(dataset, cfg.window_s, cfg.use_dwt, cfg.wavelet, cfg.levels,
                                cfg.windows_per_recording, cfg.per_band, cfg.signal,
                                cfg.reference, cfg.boundary_mode)


def class_dtw_distances(fm: FeatureMatrix) -> np.ndarray:
    """Within-class DTW matrix over all windows (cross-class entries are NaN)."""
    n = len(fm.labels)
    D = np.full((n, n), np.nan)
    for c in np.unique(fm.labels):
        idx = np.flatnonzero(fm.labels == c)
        D[np.ix_(idx, idx)] = pairwise_dtw(fm.windows[idx])
    return D


def cross_validate(dataset: Dataset | None, config: PipelineConfig | None = None,
                   features: FeatureMatrix | None = None, plan: FoldPlan | None = None,
                   dtw_cache: np.ndarray | None = None) -> EvaluationReport:
    """Train on k-1 folds, test on the held-out one, pool the confusion counts."""
    cfg = config or PipelineConfig()
    fm = features if features is not None else pipeline_features(dataset, cfg)
    groups = fm.groups if cfg.fold_mode == "subject" else None
    plan = plan or make_folds(fm.labels, cfg.k, cfg.seed, groups)
    if cfg.classifier == "dtw" and dtw_cache is None:
        dtw_cache = class_dtw_distances(fm)
    global_scaler = MinMaxScaler.fit(fm.rows) if cfg.normalization == "global" else None

    folds = []
    pooled = np.zeros((N_CLASSES, N_CLASSES), dtype=int)
    for f in range(plan.k):
        train, test = plan.train_index(f), plan.test_index(f)
        if len(test) == 0:
            continue
        try:
            if cfg.classifier == "dtw":
                model = medoid_templates(fm.windows, fm.labels, train, dtw_cache, N_CLASSES)
                fit_index = model.source_index
                pred = model.predict(fm.windows[test])
            else:
                if global_scaler is not None:
                    scaler, fit_index = global_scaler, np.arange(len(fm))
                else:
                    scaler, fit_index = MinMaxScaler.fit(fm.rows[train]), train
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore")
                    Xtr = scaler.transform(fm.rows[train])
                    Xte = scaler.transform(fm.rows[test])
                model = fit_features(cfg.classifier, Xtr, fm.labels[train], n_classes=N_CLASSES)
                pred = model.predict(Xte)
        except (TrainingError, ConfigurationError) as exc:
            raise EvaluationError(f"fold {f}: {exc}") from exc
        if (cfg.classifier == "dtw" or cfg.normalization == "fold") and np.intersect1d(fit_index, test).size:
            raise EvaluationError(f"fold {f}: test rows leaked into fitting")
        cm = confusion_matrix(fm.labels[test], pred)
        pooled += cm
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            m = compute_metrics(cm)
        folds.append(FoldResult(f, train, test, pred, cm, m, np.asarray(fit_index)))

    overall = compute_metrics(pooled)
    return EvaluationReport(cfg.classifier, cfg.window_s, cfg.use_dwt, overall.accuracy,
                            overall.precision, overall.recall, overall.f1, pooled, folds,
                            _config_dict(cfg, plan))


def _config_dict(cfg: PipelineConfig, plan: FoldPlan) -> dict:
    d = asdict(cfg)
    d["fold_plan_mode"] = plan.mode
    return d


@dataclass(frozen=True)
class SweepPoint:
    window_s: float
    use_dwt: bool
    accuracy: float


def window_sweep(dataset: Dataset, windows, config: PipelineConfig | None = None,
                 dwt_flags=(False, True)) -> list[SweepPoint]:
    """Accuracy for every (window, DWT on/off) pair, sorted by (dwt, window)."""
    cfg = config or PipelineConfig()
    duration = min(r.duration for r in dataset.recordings)
    for w in windows:
        if w > duration + 1e-9:
            raise EvaluationError(f"window {w} s exceeds the {duration} s recordings")
    out = []
    for use_dwt in sorted(dwt_flags):
        for w in sorted(windows):
            # as many windows as fit, capped at two per recording
            per = max(1, min(2, int(np.floor(duration / w + 1e-9))))
            c = replace(cfg, window_s=float(w), use_dwt=use_dwt, windows_per_recording=per)
            out.append(SweepPoint(float(w), use_dwt, cross_validate(dataset, c).accuracy))
    return out


def summary_table(reports) -> str:
    lines = [f"{'classifier':<10} {'window':>6} {'dwt':>4} {'accuracy':>9} {'precision':>9} "
             f"{'recall':>9} {'f1':>9}"]
    for r in reports:
        lines.append(f"{r.classifier:<10} {r.window_s:>6g} {('yes' if r.use_dwt else 'no'):>4} "
                     f"{100 * r.accuracy:>8.1f}% {100 * r.precision:>8.1f}% "
                     f"{100 * r.recall:>8.1f}% {100 * r.f1:>8.1f}%")
    return "\n".join(lines)


def confusion_table(report: EvaluationReport) -> str:
    names = [a.slug[:10] for a in Activity]
    pct = report.confusion_percent()
    lines = ["true \\ pred".ljust(16) + " ".join(f"{n:>10}" for n in names)]
    for a, row in zip(Activity, pct):
        lines.append(f"{a.slug:<16}" + " ".join(f"{v:>9.1f}%" for v in row))
    return "\n".join(lines)
