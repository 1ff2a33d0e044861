"""Window statistics over DWT coefficients and min-max scaled feature matrices."""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .dwt import decompose
from .synth import Activity, Dataset, segment, windows_that_fit

FEATURE_NAMES = ("mean", "peak", "rms", "std", "kurtosis", "skewness")


class FeatureError(ValueError):
    pass


@dataclass(frozen=True)
class FeatureVector:
    mean: float
    peak: float
    rms: float
    std: float
    kurtosis: float
    skewness: float

    def as_array(self) -> np.ndarray:
        return np.array([self.mean, self.peak, self.rms, self.std, self.kurtosis, self.skewness])


def _moments(x: np.ndarray) -> np.ndarray:
    """The six statistics as an array (mean, peak, rms, std, kurtosis, skewness)."""
    if len(x) < 4:
        raise FeatureError(f"need at least 4 samples, got {len(x)}")
    mu = x.mean()
    c = x - mu
    m2 = np.mean(c * c)
    if not m2 > 0:
        raise FeatureError("zero-variance series: kurtosis and skewness are undefined")
    m3 = np.mean(c ** 3)
    m4 = np.mean(c ** 4)
    return np.array([
        mu,
        np.max(np.abs(x)),
        np.sqrt(np.mean(x * x)),
        np.sqrt(m2),
        m4 / (m2 * m2),
        m3 / m2 ** 1.5,
    ])


def extract_features(series) -> FeatureVector:
    """Mean, peak |x|, RMS, population std, Pearson kurtosis and skewness."""
    x = np.asarray(series, dtype=float).ravel()
    return FeatureVector(*map(float, _moments(x)))


def feature_input(window, use_dwt: bool = True, wavelet: str = "dmey", levels: int = 5,
                  boundary_mode: str = "periodic") -> np.ndarray:
    """Series the statistics are computed over.

    With ``use_dwt`` this is the detail bands of levels 1..``levels``
    followed by the deepest approximation, concatenated; otherwise the
    window itself.
    """
    w = np.asarray(window, dtype=float)
    if not use_dwt:
        return w
    dec = decompose(w, wavelet, levels, boundary_mode)
    return np.concatenate(dec.bands())


def band_features(window, wavelet: str = "dmey", levels: int = 5,
                  boundary_mode: str = "periodic") -> np.ndarray:
    """The six statistics per band, flattened band-major (levels + 1 bands)."""
    dec = decompose(np.asarray(window, dtype=float), wavelet, levels, boundary_mode)
    return np.concatenate([_moments(b) for b in dec.bands()])


def reference_window(window: np.ndarray, reference: str = "median") -> np.ndarray:
    """Express a window relative to its resting level.

    The static channel level differs by subject (thigh size); referencing
    removes it so features describe the movement.
    """
    if reference == "none":
        return window
    if reference == "median":
        return window - np.median(window)
    if reference == "mean":
        return window - window.mean()
    raise FeatureError(f"unknown reference mode {reference!r}")


@dataclass
class MinMaxScaler:
    lo: np.ndarray
    hi: np.ndarray

    @classmethod
    def fit(cls, X: np.ndarray) -> "MinMaxScaler":
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or len(X) == 0:
            raise FeatureError("cannot fit normalization on an empty matrix")
        return cls(X.min(axis=0), X.max(axis=0))

    def transform(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        span = self.hi - self.lo
        flat = span <= 0
        if np.any(flat):
            warnings.warn(f"degenerate feature column(s) {np.flatnonzero(flat).tolist()} scaled to 0",
                          stacklevel=2)
        out = (X - self.lo) / np.where(flat, 1.0, span)
        out[:, flat] = 0.0
        return out

    def to_dict(self) -> dict:
        return {"lo": self.lo.tolist(), "hi": self.hi.tolist()}

    @classmethod
    def from_dict(cls, d: dict) -> "MinMaxScaler":
        return cls(np.asarray(d["lo"], float), np.asarray(d["hi"], float))


@dataclass
class FeatureMatrix:
    rows: np.ndarray  # raw (unscaled) features, one row per window
    labels: np.ndarray  # Activity codes
    groups: np.ndarray  # subject id per row
    recording_index: np.ndarray  # source recording per row
    columns: tuple = FEATURE_NAMES
    normalization: MinMaxScaler | None = None
    windows: np.ndarray | None = field(default=None, repr=False)

    def __len__(self):
        return len(self.rows)

    def normalized(self) -> np.ndarray:
        if self.normalization is None:
            raise FeatureError("matrix has no fitted normalization")
        return self.normalization.transform(self.rows)

    def class_means(self, normalized: bool = True) -> dict:
        X = self.normalized() if normalized else self.rows
        return {Activity(c): X[self.labels == c].mean(axis=0) for c in np.unique(self.labels)}

    def to_text(self, normalized: bool = True) -> str:
        X = self.normalized() if normalized and self.normalization is not None else self.rows
        lines = [",".join(self.columns) + ",label"]
        for row, lab in zip(X, self.labels):
            lines.append(",".join(repr(float(v)) for v in row) + f",{Activity(int(lab)).slug}")
        return "\n".join(lines) + "\n"


def dataset_windows(dataset: Dataset, window_s: float, windows_per_recording: int | None = None,
                    signal: str = "magnitude", reference: str = "median"):
    """Referenced windows with labels, subject groups and recording indices."""
    wins, labels, groups, rec_idx = [], [], [], []
    for i, rec in enumerate(dataset.recordings):
        count = windows_per_recording or windows_that_fit(rec.duration, window_s)
        for w in segment(rec, window_s, count, signal=signal):
            wins.append(reference_window(w, reference))
            labels.append(int(rec.activity))
            groups.append(rec.subject.id)
            rec_idx.append(i)
    if not wins:
        raise FeatureError("dataset produced no windows")
    return np.stack(wins), np.array(labels), np.array(groups), np.array(rec_idx)


def build_feature_matrix(dataset: Dataset, window_s: float = 4.0, use_dwt: bool = True,
                         wavelet: str = "dmey", levels: int = 5,
                         windows_per_recording: int | None = 2, per_band: bool = False,
                         signal: str = "magnitude", reference: str = "median",
                         boundary_mode: str = "periodic") -> FeatureMatrix:
    """One feature row per window, with a min-max scaler fitted on all rows.

    Cross-validation refits the scaler on training folds; the stored one
    is the whole-dataset scaling.
    """
    if not dataset.recordings:
        raise FeatureError("empty dataset")
    wins, labels, groups, rec_idx = dataset_windows(dataset, window_s, windows_per_recording,
                                                    signal, reference)
    if per_band:
        rows = np.stack([band_features(w, wavelet, levels, boundary_mode) for w in wins])
        n_bands = levels + 1
        columns = tuple(f"{name}_b{b}" for b in range(n_bands) for name in FEATURE_NAMES)
    else:
        rows = np.stack([_moments(feature_input(w, use_dwt, wavelet, levels, boundary_mode)) for w in wins])
        columns = FEATURE_NAMES
    fm = FeatureMatrix(rows, labels, groups, rec_idx, columns, windows=wins)
    fm.normalization = MinMaxScaler.fit(rows)
    return fm
