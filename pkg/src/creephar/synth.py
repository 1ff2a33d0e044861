"""Synthetic S21 activity recordings and trace I/O.

Each recording is a static channel level (the two-path creeping-wave gain at
the receiver position) modulated once per activity cycle by a waveform
template, plus Gaussian noise.  Cycle lengths jitter around a per-trial
period, and every recording draws from its own generator seeded by
``(seed, subject, activity, trial)`` so generation order never matters.
"""
from __future__ import annotations

import csv
import enum
import json
import math
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import numpy as np

from . import __version__
from .channel import BodyGeometry, ChannelParams, path_gain, receiver_arc


class SynthError(ValueError):
    pass


class TraceParseError(ValueError):
    def __init__(self, path, line: int, msg: str):
        super().__init__(f"{path}:{line}: {msg}")
        self.path = path
        self.line = line


class Activity(enum.IntEnum):
    FORWARD_SWING = 0
    FULL_SWING = 1
    BACKWARD_SWING = 2
    LIFTING_KNEE = 3
    SIDEWAYS_SWING = 4
    SQUATTING = 5

    @property
    def slug(self) -> str:
        return self.name.lower()

    @classmethod
    def parse(cls, value) -> "Activity":
        if isinstance(value, Activity):
            return value
        if isinstance(value, int) or (isinstance(value, str) and value.isdigit()):
            return cls(int(value))
        key = str(value).strip().upper().replace("-", "_").replace(" ", "_")
        try:
            return cls[key]
        except KeyError:
            names = ", ".join(a.slug for a in cls)
            raise SynthError(f"unknown activity {value!r}; expected one of {names}") from None


@dataclass(frozen=True)
class SubjectSpec:
    id: str
    height: float  # cm
    weight: float  # kg
    thigh_circumference: float  # cm
    age: float  # years
    sex: str

    def __post_init__(self):
        for name in ("height", "weight", "thigh_circumference", "age"):
            if not getattr(self, name) > 0:
                raise SynthError(f"subject {self.id}: {name} must be positive")


def default_subjects() -> list[SubjectSpec]:
    return [
        SubjectSpec("male1", 172, 62, 48, 27, "male"),
        SubjectSpec("male2", 175, 80, 54, 27, "male"),
        SubjectSpec("male3", 167, 59, 50, 25, "male"),
        SubjectSpec("female1", 162, 54, 45, 23, "female"),
        SubjectSpec("female2", 160, 49, 41, 25, "female"),
        SubjectSpec("female3", 157, 43, 43, 26, "female"),
    ]


WAVEFORM_KINDS = ("single_lobe", "double_lobe", "ramp_hold", "sinusoid")


@dataclass(frozen=True)
class ActivityTemplate:
    waveform_kind: str
    magnitude_depth: float  # dB
    phase_depth: float  # rad
    period_range: tuple = (2.0, 3.0)  # seconds
    harmonic_weights: tuple = (1.0,)
    width: float = 0.5  # fraction of the cycle occupied by a lobe

    def __post_init__(self):
        if self.waveform_kind not in WAVEFORM_KINDS:
            raise SynthError(f"unknown waveform kind {self.waveform_kind!r}")
        if self.magnitude_depth < 0:
            raise SynthError("magnitude_depth must be >= 0")
        lo, hi = self.period_range
        if not 0 < lo <= hi:
            raise SynthError(f"bad period range {self.period_range}")

    def shape(self, theta: np.ndarray) -> np.ndarray:
        """Unit-peak modulation shape over cycle phase ``theta`` in [0, 1)."""
        w = self.width
        hw = self.harmonic_weights
        if self.waveform_kind == "single_lobe":
            return _lobe(theta, 0.0, w)
        if self.waveform_kind == "double_lobe":
            back = hw[1] if len(hw) > 1 else 1.0
            return _lobe(theta, 0.0, w) - back * _lobe(theta, 0.5, w)
        if self.waveform_kind == "sinusoid":
            out = np.zeros_like(theta)
            for k, a in enumerate(hw, start=1):
                out += a * 0.5 * (1.0 - np.cos(2 * np.pi * k * theta))
            return out / sum(hw)
        # ramp_hold: smooth descent, hold, smooth rise, with short spikes at
        # both turning points
        spike = hw[1] if len(hw) > 1 else 0.0
        down = _smoothstep(theta / 0.25)
        up = 1.0 - _smoothstep((theta - 0.6) / 0.25)
        base = np.where(theta < 0.25, down, np.where(theta < 0.6, 1.0, up))
        spikes = spike * (np.exp(-0.5 * ((theta - 0.25) / 0.012) ** 2)
                          + np.exp(-0.5 * ((theta - 0.6) / 0.012) ** 2))
        return base + spikes


def _lobe(theta, start, width):
    u = (theta - start) / width
    return np.where((u >= 0) & (u < 1), np.sin(np.pi * np.clip(u, 0, 1)) ** 2, 0.0)


def _smoothstep(u):
    u = np.clip(u, 0.0, 1.0)
    return u * u * (3 - 2 * u)


def default_templates() -> dict[Activity, ActivityTemplate]:
    # depths set so the mean DWT peak feature ranks
    # sideways > full > forward > squatting > backward ~ lifting
    return {
        Activity.FORWARD_SWING: ActivityTemplate("single_lobe", 2.6, 0.30, width=0.5),
        Activity.FULL_SWING: ActivityTemplate("double_lobe", 3.0, 0.40, harmonic_weights=(1.0, 0.7), width=0.4),
        Activity.BACKWARD_SWING: ActivityTemplate("single_lobe", 0.9, 0.12, width=0.45),
        Activity.LIFTING_KNEE: ActivityTemplate("single_lobe", 0.9, 0.10, width=0.2),
        Activity.SIDEWAYS_SWING: ActivityTemplate("sinusoid", 5.5, 0.50, harmonic_weights=(1.0, 0.3)),
        Activity.SQUATTING: ActivityTemplate("ramp_hold", 2.1, 0.25, harmonic_weights=(1.0, 0.6)),
    }


@dataclass(frozen=True)
class SynthConfig:
    sample_rate: float = 50.0  # Hz
    duration: float = 20.0  # s
    noise_db: float = 0.5
    noise_phase: float = 0.05  # rad
    period_jitter: float = 0.1  # fractional, uniform per cycle
    trial_depth_spread: float = 0.08  # fractional, uniform per trial
    cycle_depth_spread: float = 0.05  # fractional, Gaussian per cycle
    randomize_timing: bool = True  # per-trial period and start phase
    receiver_angle: float = 110.0  # degrees from the transmitter
    n_trials: int = 10
    channel: ChannelParams = field(default_factory=ChannelParams)
    templates: dict = field(default_factory=default_templates)

    def __post_init__(self):
        if not self.sample_rate > 0:
            raise SynthError("sample_rate must be positive")
        if not self.duration > 0:
            raise SynthError("duration must be positive")
        if self.noise_db < 0 or self.noise_phase < 0:
            raise SynthError("noise levels must be >= 0")

    @property
    def n_samples(self) -> int:
        return int(math.floor(self.duration * self.sample_rate + 1e-9))

    def noiseless(self) -> "SynthConfig":
        return replace(self, noise_db=0.0, noise_phase=0.0, period_jitter=0.0,
                       trial_depth_spread=0.0, cycle_depth_spread=0.0, randomize_timing=False)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["templates"] = {a.slug: asdict(t) for a, t in self.templates.items()}
        return d


@dataclass
class ActivityRecording:
    subject: SubjectSpec
    activity: Activity
    trial: int
    sample_rate: float
    duration: float
    magnitude: np.ndarray  # dB
    phase: np.ndarray  # rad

    @property
    def n_samples(self) -> int:
        return len(self.magnitude)

    @property
    def time(self) -> np.ndarray:
        return np.arange(self.n_samples) / self.sample_rate

    @property
    def key(self) -> str:
        return f"{self.subject.id}_{self.activity.slug}_t{self.trial:02d}"


@dataclass
class Dataset:
    recordings: list
    manifest: dict

    def __len__(self):
        return len(self.recordings)


def baseline_channel(subject: SubjectSpec, config: SynthConfig) -> tuple[float, float]:
    geom = BodyGeometry(subject.thigh_circumference)
    d = receiver_arc(geom, config.receiver_angle)
    return path_gain(d, geom, config.channel)


def _subject_index(subject: SubjectSpec) -> int:
    # stable across runs, independent of Python's salted str hash
    return int.from_bytes(subject.id.encode("utf-8")[:8].ljust(8, b"\0"), "little")


def recording_rng(seed: int, subject: SubjectSpec, activity: Activity, trial: int) -> np.random.Generator:
    ss = np.random.SeedSequence([int(seed), _subject_index(subject), int(activity), int(trial)])
    return np.random.default_rng(ss)


def cycle_phase(n: int, fs: float, period: float, jitter: float, rng: np.random.Generator,
                start_phase: float | None = None):
    """Cycle phase in [0, 1) and cycle index for every sample."""
    if n < 1:
        raise SynthError("recording would have no samples")
    t = np.arange(n) / fs
    if start_phase is None:
        start_phase = rng.uniform(0.0, 1.0)
    start = -start_phase * period
    bounds = [start]
    while bounds[-1] <= t[-1]:
        bounds.append(bounds[-1] + period * (1.0 + jitter * rng.uniform(-1.0, 1.0)))
    bounds = np.asarray(bounds)
    idx = np.searchsorted(bounds, t, side="right") - 1
    lengths = np.diff(bounds)
    theta = (t - bounds[idx]) / lengths[idx]
    return np.clip(theta, 0.0, np.nextafter(1.0, 0.0)), idx, len(lengths)


def synth_recording(subject: SubjectSpec, activity, trial: int, seed: int,
                    config: SynthConfig | None = None) -> ActivityRecording:
    config = config or SynthConfig()
    activity = Activity.parse(activity)
    tmpl = config.templates[activity]
    rng = recording_rng(seed, subject, activity, trial)
    n, fs = config.n_samples, config.sample_rate

    if config.randomize_timing:
        period = rng.uniform(*tmpl.period_range)
        start_phase = None
    else:
        period = 0.5 * (tmpl.period_range[0] + tmpl.period_range[1])
        start_phase = 0.0
    theta, cyc, n_cycles = cycle_phase(n, fs, period, config.period_jitter, rng, start_phase)
    trial_gain = 1.0 + config.trial_depth_spread * rng.uniform(-1.0, 1.0)
    cycle_gain = 1.0 + config.cycle_depth_spread * rng.standard_normal(n_cycles)
    mod = tmpl.shape(theta) * trial_gain * cycle_gain[cyc]

    base_mag, base_phase = baseline_channel(subject, config)
    magnitude = base_mag - tmpl.magnitude_depth * mod
    phase = base_phase + tmpl.phase_depth * mod
    magnitude = magnitude + config.noise_db * rng.standard_normal(n)
    phase = phase + config.noise_phase * rng.standard_normal(n)
    phase = np.angle(np.exp(1j * phase))
    return ActivityRecording(subject, activity, int(trial), fs, n / fs, magnitude, phase)


def synth_dataset(seed: int = 0, config: SynthConfig | None = None,
                  subjects: list | None = None, n_trials: int | None = None) -> Dataset:
    config = config or SynthConfig()
    subjects = list(subjects) if subjects is not None else default_subjects()
    n_trials = config.n_trials if n_trials is None else n_trials
    recs = [
        synth_recording(s, a, t, seed, config)
        for s in subjects for a in Activity for t in range(n_trials)
    ]
    manifest = {
        "source": "synthetic",
        "generator": f"creephar {__version__}",
        "seed": int(seed),
        "config": config.to_dict(),
        "subjects": [asdict(s) for s in subjects],
        "n_trials": n_trials,
    }
    return Dataset(recs, manifest)


def segment(recording: ActivityRecording | np.ndarray, window_s: float, windows_per_recording: int,
            sample_rate: float | None = None, signal: str = "magnitude") -> list[np.ndarray]:
    """Non-overlapping windows from the start of the series."""
    if isinstance(recording, ActivityRecording):
        series = getattr(recording, signal)
        fs = recording.sample_rate
    else:
        series = np.asarray(recording, dtype=float)
        if sample_rate is None:
            raise SynthError("sample_rate is required for a bare series")
        fs = sample_rate
    if window_s <= 0 or windows_per_recording < 1:
        raise SynthError("window length and count must be positive")
    w = int(math.floor(window_s * fs + 1e-9))
    if w < 1 or w * windows_per_recording > len(series):
        raise SynthError(
            f"{windows_per_recording} windows of {window_s} s ({w} samples) do not fit "
            f"in {len(series)} samples"
        )
    return [np.asarray(series[i * w:(i + 1) * w]) for i in range(windows_per_recording)]


def windows_that_fit(duration: float, window_s: float, cap: int = 2) -> int:
    return max(0, min(cap, int(math.floor(duration / window_s + 1e-9))))


# --- trace files ----------------------------------------------------------

TRACE_COLUMNS = ("time_s", "mag_db", "phase_rad")


def write_trace(recording: ActivityRecording, path, header: dict | None = None) -> None:
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="") as fh:
        meta = {
            "subject": recording.subject.id,
            "activity": recording.activity.slug,
            "trial": recording.trial,
            "sample_rate": recording.sample_rate,
        }
        if header:
            meta = {**header, **meta}
        fh.write("# " + json.dumps(meta, sort_keys=True) + "\n")
        fh.write(",".join(TRACE_COLUMNS) + "\n")
        t = recording.time
        for ti, m, p in zip(t, recording.magnitude, recording.phase):
            fh.write(f"{float(ti)!r},{float(m)!r},{float(p)!r}\n")


def ingest_trace(path, subject: SubjectSpec, activity, trial: int = 0,
                 rate_tolerance: float = 1e-6) -> ActivityRecording:
    """Parse a ``time_s,mag_db,phase_rad`` text trace."""
    path = Path(path)
    activity = Activity.parse(activity)
    times, mags, phases = [], [], []
    header_seen = False
    with path.open("r", encoding="utf-8", newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if row[0].lstrip().startswith("#"):
                continue
            cells = [c.strip() for c in row]
            if not header_seen:
                missing = [c for c in TRACE_COLUMNS if c not in cells]
                if missing:
                    raise TraceParseError(path, lineno, f"header missing column(s) {', '.join(missing)}")
                cols = [cells.index(c) for c in TRACE_COLUMNS]
                header_seen = True
                continue
            if len(cells) < len(TRACE_COLUMNS):
                raise TraceParseError(path, lineno, f"expected {len(TRACE_COLUMNS)} columns, got {len(cells)}")
            try:
                t, m, p = (float(cells[i]) for i in cols)
            except ValueError as exc:
                raise TraceParseError(path, lineno, f"non-numeric value ({exc})") from None
            if not all(map(math.isfinite, (t, m, p))):
                raise TraceParseError(path, lineno, "non-finite value")
            if times and t <= times[-1]:
                raise TraceParseError(path, lineno, f"timestamp {t} does not increase")
            times.append(t)
            mags.append(m)
            phases.append(p)
    if not header_seen:
        raise TraceParseError(path, 1, "missing header line")
    if len(times) < 2:
        raise TraceParseError(path, 1, "need at least two samples")
    dt = np.diff(times)
    step = float(np.median(dt))
    bad = np.flatnonzero(np.abs(dt - step) > rate_tolerance * max(1.0, step) + 1e-9 * step)
    if len(bad):
        # data rows start after the comment/header lines; report the sample index
        raise TraceParseError(path, int(bad[0]) + 2, "non-uniform sample spacing")
    # VNA exports quote the rate to a handful of digits; drop float noise
    fs = float(np.round(1.0 / step, 9))
    n = len(times)
    return ActivityRecording(subject, activity, int(trial), fs, n / fs,
                             np.asarray(mags), np.asarray(phases))


# --- dataset directories ---------------------------------------------------

MANIFEST_NAME = "manifest.json"


def save_dataset(dataset: Dataset, directory, header: dict | None = None) -> Path:
    directory = Path(directory)
    rec_dir = directory / "recordings"
    rec_dir.mkdir(parents=True, exist_ok=True)
    index = []
    for rec in dataset.recordings:
        rel = f"recordings/{rec.key}.csv"
        write_trace(rec, directory / rel, header)
        index.append({"file": rel, "subject": rec.subject.id,
                      "activity": rec.activity.slug, "trial": rec.trial})
    subjects = {r.subject.id: asdict(r.subject) for r in dataset.recordings}
    manifest = {**dataset.manifest, "subjects": list(subjects.values()), "recordings": index}
    if header:
        manifest["header"] = header
    path = directory / MANIFEST_NAME
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def load_dataset(directory) -> Dataset:
    directory = Path(directory)
    manifest = json.loads((directory / MANIFEST_NAME).read_text(encoding="utf-8"))
    subjects = {s["id"]: SubjectSpec(**s) for s in manifest.get("subjects", [])}
    recs = []
    for entry in manifest.get("recordings", []):
        subj = subjects[entry["subject"]]
        recs.append(ingest_trace(directory / entry["file"], subj, entry["activity"], entry["trial"]))
    return Dataset(recs, manifest)
