"""Multi-level discrete wavelet transform (Mallat pyramid).

Conventions
-----------
Analysis is a full convolution with the decomposition filter followed by
keeping every second output, starting at index ``(filter_len - 1) % 2``.
For the even-length filters shipped here that means the odd-indexed outputs::

    approx[n] = sum_k dec_low[k]  * x[2n + 1 - k]
    detail[n] = sum_k dec_high[k] * x[2n + 1 - k]

with ``x`` extended past its ends according to the boundary mode.

``periodic``
    Circular extension.  Odd inputs are first made even by repeating the
    last sample, so every level has ``ceil(n / 2)`` coefficients.  For
    orthonormal filters and even lengths the transform is orthogonal.
``symmetric``
    Half-sample symmetric extension (``... x1 x0 | x0 x1 ... xn-1 | xn-1 ...``),
    giving ``floor((n + filter_len - 1) / 2)`` coefficients per level.

The high-pass filter is ``dec_high[n] = (-1)**(n + 1) * dec_low[L - 1 - n]``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import _tables

BOUNDARY_MODES = ("periodic", "symmetric")


class WaveletError(ValueError):
    """Bad wavelet name, signal, or decomposition request."""


@dataclass(frozen=True)
class WaveletFilter:
    name: str
    dec_low: np.ndarray
    dec_high: np.ndarray
    rec_low: np.ndarray
    rec_high: np.ndarray

    @property
    def length(self) -> int:
        return len(self.dec_low)

    @classmethod
    def from_scaling(cls, name: str, dec_low) -> "WaveletFilter":
        h = np.asarray(dec_low, dtype=float)
        n = np.arange(len(h))
        g = (-1.0) ** (n + 1) * h[::-1]
        for arr in (h, g):
            arr.setflags(write=False)
        return cls(name, h, g, h[::-1].copy(), g[::-1].copy())


_SCALING = {
    "haar": _tables.HAAR,
    "db4": _tables.DB4,
    "dmey": _tables.DMEY_ORTHO,
    # the raw published table, not orthonormal; kept for toolbox parity
    "dmey_table": _tables.DMEY_TABLE,
}

SUPPORTED_WAVELETS = ("haar", "db4", "dmey")


@lru_cache(maxsize=None)
def load_wavelet(name: str) -> WaveletFilter:
    key = name.lower()
    if key not in _SCALING:
        raise WaveletError(
            f"unknown wavelet {name!r}; supported: {', '.join(SUPPORTED_WAVELETS)}"
        )
    return WaveletFilter.from_scaling(key, _SCALING[key])


def _as_filter(wavelet) -> WaveletFilter:
    return wavelet if isinstance(wavelet, WaveletFilter) else load_wavelet(wavelet)


def _check_mode(mode: str) -> None:
    if mode not in BOUNDARY_MODES:
        raise WaveletError(f"unknown boundary mode {mode!r}; use one of {BOUNDARY_MODES}")


def coeff_length(n: int, filter_len: int, mode: str = "periodic") -> int:
    if mode == "periodic":
        return (n + 1) // 2
    return (n + filter_len - 1) // 2


def max_level(n: int, filter_len: int, mode: str = "periodic") -> int:
    """Deepest feasible level.

    Periodic: every step must see at least 2 samples.  Symmetric: the usual
    ``floor(log2(n / (filter_len - 1)))`` bound, past which the extension
    dominates every coefficient.
    """
    if mode == "symmetric":
        if n < filter_len - 1:
            return 0
        return int(np.floor(np.log2(n / max(filter_len - 1, 1))))
    level = 0
    while n >= 2:
        n = coeff_length(n, filter_len, mode)
        level += 1
    return level


def _symmetric_index(idx: np.ndarray, n: int) -> np.ndarray:
    period = 2 * n
    idx = np.mod(idx, period)
    return np.where(idx < n, idx, period - 1 - idx)


def _analysis(x: np.ndarray, filt: np.ndarray, mode: str) -> np.ndarray:
    n = len(x)
    L = len(filt)
    m = coeff_length(n, L, mode)
    if mode == "periodic":
        if n % 2:
            x = np.append(x, x[-1])
            n += 1
        base = 2 * np.arange(m) + 1
        idx = np.mod(base[:, None] - np.arange(L)[None, :], n)
    else:
        base = 2 * np.arange(m) + 1
        idx = _symmetric_index(base[:, None] - np.arange(L)[None, :], n)
    return x[idx] @ filt


def dwt_step(signal, wavelet="dmey", mode: str = "periodic"):
    """One analysis level.  Returns ``(approx, detail)``."""
    _check_mode(mode)
    x = np.asarray(signal, dtype=float)
    if x.ndim != 1 or len(x) == 0:
        raise WaveletError("dwt_step needs a non-empty 1-D signal")
    if len(x) < 2:
        raise WaveletError("dwt_step needs at least 2 samples")
    w = _as_filter(wavelet)
    return _analysis(x, w.dec_low, mode), _analysis(x, w.dec_high, mode)


def _synthesis(a: np.ndarray, d: np.ndarray, w: WaveletFilter, n_out: int, mode: str) -> np.ndarray:
    # adjoint of _analysis, restricted to the original n_out samples
    L = w.length
    m = len(a)
    if mode == "periodic":
        n = n_out + (n_out % 2)
        if m != n // 2:
            raise WaveletError(f"coefficient length {m} inconsistent with output length {n_out}")
        out = np.zeros(n)
        base = 2 * np.arange(m) + 1
        idx = np.mod(base[:, None] - np.arange(L)[None, :], n)
        contrib = a[:, None] * w.dec_low[None, :] + d[:, None] * w.dec_high[None, :]
        np.add.at(out, idx.ravel(), contrib.ravel())
        return out[:n_out]
    if m != coeff_length(n_out, L, mode):
        raise WaveletError(f"coefficient length {m} inconsistent with output length {n_out}")
    # symmetric extension: the adjoint folds the extension back onto the
    # signal, which is not the inverse; instead invert through the padded
    # signal, where the analysis rows form a tight frame on interior samples
    base = 2 * np.arange(m) + 1
    pos = base[:, None] - np.arange(L)[None, :]
    lo = pos.min()
    ext = np.zeros(pos.max() - lo + 1)
    contrib = a[:, None] * w.dec_low[None, :] + d[:, None] * w.dec_high[None, :]
    np.add.at(ext, (pos - lo).ravel(), contrib.ravel())
    return ext[-lo: -lo + n_out]


@dataclass
class WaveletDecomposition:
    approx: np.ndarray
    details: list  # shallowest level first
    original_length: int
    wavelet: str
    boundary_mode: str = "periodic"
    lengths: list = field(default_factory=list)  # input length at each level

    @property
    def levels(self) -> int:
        return len(self.details)

    def bands(self) -> list:
        """Detail bands (level 1..j) followed by the deepest approximation."""
        return [*self.details, self.approx]


def decompose(signal, wavelet="dmey", levels: int = 5, mode: str = "periodic") -> WaveletDecomposition:
    _check_mode(mode)
    x = np.asarray(signal, dtype=float)
    if x.ndim != 1 or len(x) == 0:
        raise WaveletError("decompose needs a non-empty 1-D signal")
    if levels < 1:
        raise WaveletError("levels must be >= 1")
    w = _as_filter(wavelet)
    deepest = max_level(len(x), w.length, mode)
    if levels > deepest:
        raise WaveletError(
            f"{levels} levels requested for {len(x)} samples; maximum feasible level is {deepest}"
        )
    details, lengths = [], []
    a = x
    for _ in range(levels):
        lengths.append(len(a))
        a, d = dwt_step(a, w, mode)
        details.append(d)
    return WaveletDecomposition(a, details, len(x), w.name, mode, lengths)


def reconstruct(decomposition: WaveletDecomposition, wavelet=None) -> np.ndarray:
    dec = decomposition
    w = _as_filter(wavelet if wavelet is not None else dec.wavelet)
    if w.name != dec.wavelet:
        raise WaveletError(f"decomposition used {dec.wavelet!r}, not {w.name!r}")
    lengths = dec.lengths or _infer_lengths(dec.original_length, dec.levels, w.length, dec.boundary_mode)
    if len(lengths) != dec.levels or lengths[0] != dec.original_length:
        raise WaveletError("level/length bookkeeping inconsistent with original_length")
    a = np.asarray(dec.approx, dtype=float)
    for level in range(dec.levels - 1, -1, -1):
        d = np.asarray(dec.details[level], dtype=float)
        if len(d) != len(a):
            raise WaveletError(f"level {level + 1}: approx/detail lengths differ ({len(a)} vs {len(d)})")
        a = _synthesis(a, d, w, lengths[level], dec.boundary_mode)
    return a


def _infer_lengths(n: int, levels: int, filter_len: int, mode: str) -> list:
    out = []
    for _ in range(levels):
        out.append(n)
        n = coeff_length(n, filter_len, mode)
    return out


def energy(dec: WaveletDecomposition) -> float:
    return float(sum(np.dot(b, b) for b in dec.bands()))


def orthonormality_error(wavelet) -> float:
    """Max deviation of the even-lag autocorrelation of dec_low from a delta."""
    h = _as_filter(wavelet).dec_low
    ac = np.correlate(h, h, mode="full")[len(h) - 1::2]
    ac[0] -= 1.0
    return float(np.abs(ac).max())


__all__ = [
    "BOUNDARY_MODES", "SUPPORTED_WAVELETS", "WaveletError", "WaveletFilter",
    "WaveletDecomposition", "load_wavelet", "dwt_step", "decompose",
    "reconstruct", "coeff_length", "max_level", "energy", "orthonormality_error",
]
