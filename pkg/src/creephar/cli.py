"""Command-line entry point: profile, synth, ingest, train, evaluate, sweep.

Exit codes: 0 success, 1 runtime failure, 2 usage error.  Output files
start with a ``#`` header line holding the tool version, seed and flags.
The default output directory comes from ``$CREEPHAR_OUT`` (else ``./out``).
"""
from __future__ import annotations

import argparse
import json
import os
import re
import sys
import warnings
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .channel import BodyGeometry, ChannelParams, around_body_profile, DEFAULT_DECAY_SCALE
from .classifiers import CLASSIFIER_NAMES, fit_features, medoid_templates, save_model
from .dwt import SUPPORTED_WAVELETS
from .evaluation import (PipelineConfig, confusion_table, cross_validate, summary_table,
                         window_sweep, class_dtw_distances, pipeline_features)
from .features import MinMaxScaler
from .synth import (Activity, Dataset, SubjectSpec, SynthConfig, default_subjects, ingest_trace,
                    load_dataset, save_dataset, synth_dataset)

OUT_ENV = "CREEPHAR_OUT"
# <subject>_<activity>_t<trial>.csv, the names save_dataset writes
TRACE_NAME = re.compile(r"^(?P<subject>.+?)_(?P<activity>[a-z_]+?)_t(?P<trial>\d+)$")


class UsageError(Exception):
    pass


def default_out() -> Path:
    return Path(os.environ.get(OUT_ENV) or "out")


def _plain(v):
    if isinstance(v, Path):
        return str(v)
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    return v


def run_header(command: str, args: argparse.Namespace) -> dict:
    flags = {k: _plain(v) for k, v in sorted(vars(args).items()) if k != "func"}
    return {"tool": "creephar", "version": __version__, "command": command,
            "seed": getattr(args, "seed", None), "flags": flags}


def header_line(header: dict) -> str:
    return "# " + json.dumps(header, sort_keys=True) + "\n"


def _out_dir(args) -> Path:
    out = Path(args.out) if args.out is not None else default_out()
    out.mkdir(parents=True, exist_ok=True)
    return out


def _windows_list(text: str) -> list[float]:
    try:
        vals = [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse window list {text!r}") from None
    if not vals or any(v <= 0 for v in vals):
        raise argparse.ArgumentTypeError("windows must be a non-empty list of positive seconds")
    return vals


def _positive(kind):
    def parse(text):
        v = kind(text)
        if v <= 0:
            raise argparse.ArgumentTypeError(f"must be positive, got {text}")
        return v
    return parse


# --- subcommands -------------------------------------------------------------

def cmd_profile(args) -> int:
    geom = BodyGeometry(args.circumference_cm)
    params = ChannelParams(frequency=args.freq_mhz, decay_scale=args.decay_scale)
    rows = around_body_profile(geom, params, args.step_cm)
    path = _out_dir(args) / args.name
    with path.open("w", encoding="utf-8", newline="") as fh:
        fh.write(header_line(run_header("profile", args)))
        fh.write("arc_cm,angle_deg,mag_dB,phase_rad\n")
        for s in rows:
            fh.write(f"{s.arc_distance!r},{s.angle!r},{s.magnitude!r},{s.phase!r}\n")
    print(f"wrote {len(rows)} rows to {path}")
    return 0


def cmd_synth(args) -> int:
    subjects = default_subjects()
    if args.subjects > len(subjects):
        raise UsageError(f"--subjects: only {len(subjects)} subjects are defined")
    cfg = SynthConfig(sample_rate=args.sample_rate, duration=args.duration, noise_db=args.noise_db)
    ds = synth_dataset(args.seed, cfg, subjects[:args.subjects], args.trials)
    out = _out_dir(args)
    save_dataset(ds, out, run_header("synth", args))
    print(f"wrote {len(ds)} recordings to {out}")
    return 0


def _load_subjects(path) -> dict:
    subjects = {s.id: s for s in default_subjects()}
    if path is not None:
        for d in json.loads(Path(path).read_text(encoding="utf-8")):
            subjects[d["id"]] = SubjectSpec(**d)
    return subjects


def cmd_ingest(args) -> int:
    subjects = _load_subjects(args.subjects_json)
    recs = []
    for trace in args.traces:
        m = TRACE_NAME.match(Path(trace).stem)
        if not m:
            raise UsageError(f"{trace}: file name must look like <subject>_<activity>_t<trial>.csv")
        sid = m["subject"]
        if sid not in subjects:
            raise UsageError(f"{trace}: unknown subject {sid!r}; pass --subjects-json")
        recs.append(ingest_trace(trace, subjects[sid], m["activity"], int(m["trial"])))
    ds = Dataset(recs, {"source": "ingested", "generator": f"creephar {__version__}", "seed": None,
                        "files": [str(Path(t).name) for t in args.traces]})
    out = _out_dir(args)
    save_dataset(ds, out, run_header("ingest", args))
    print(f"ingested {len(recs)} recordings into {out}")
    return 0


def _pipeline(args, classifier: str) -> PipelineConfig:
    return PipelineConfig(
        classifier=classifier, window_s=args.window_s, windows_per_recording=args.windows_per_recording,
        use_dwt=not args.no_dwt, wavelet=args.wavelet, levels=args.levels,
        normalization="global" if args.paper_normalization else "fold",
        fold_mode="subject" if args.group_by_subject else "stratified",
        k=args.folds, seed=args.seed,
    )


def _dataset(args) -> Dataset:
    return load_dataset(args.data)


def cmd_train(args) -> int:
    ds = _dataset(args)
    cfg = _pipeline(args, args.classifier)
    fm = pipeline_features(ds, cfg)
    header = run_header("train", args)
    if cfg.classifier == "dtw":
        idx = np.arange(len(fm))
        model = medoid_templates(fm.windows, fm.labels, idx, class_dtw_distances(fm), len(Activity))
        header["scaler"] = None
    else:
        scaler = MinMaxScaler.fit(fm.rows)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            X = scaler.transform(fm.rows)
        model = fit_features(cfg.classifier, X, fm.labels, n_classes=len(Activity))
        header["scaler"] = scaler.to_dict()
    header["columns"] = list(fm.columns)
    path = _out_dir(args) / f"model_{cfg.classifier}.json"
    save_model(model, path, header)
    print(f"wrote {path}")
    return 0


def cmd_evaluate(args) -> int:
    ds = _dataset(args)
    names = CLASSIFIER_NAMES if args.classifier == "all" else (args.classifier,)
    out = _out_dir(args)
    header = run_header("evaluate", args)
    reports = []
    base = _pipeline(args, names[0])
    fm = pipeline_features(ds, base)
    dtw_cache = None
    for name in names:
        cfg = replace(base, classifier=name)
        if name == "dtw":
            dtw_cache = class_dtw_distances(fm)
        rep = cross_validate(ds, cfg, features=fm, dtw_cache=dtw_cache)
        reports.append(rep)
        (out / f"report_{name}.json").write_text(rep.to_json(header), encoding="utf-8")
        (out / f"confusion_{name}.txt").write_text(header_line(header) + confusion_table(rep) + "\n",
                                                   encoding="utf-8")
    table = summary_table(reports)
    (out / "summary.txt").write_text(header_line(header) + table + "\n", encoding="utf-8")
    print(table)
    return 0


def cmd_sweep(args) -> int:
    ds = _dataset(args)
    cfg = _pipeline(args, args.classifier)
    flags = (True,) if args.dwt_only else (False, True)
    points = window_sweep(ds, args.windows, cfg, flags)
    path = _out_dir(args) / args.name
    with path.open("w", encoding="utf-8", newline="") as fh:
        fh.write(header_line(run_header("sweep", args)))
        fh.write("window_s,dwt,accuracy\n")
        for p in points:
            fh.write(f"{p.window_s:g},{int(p.use_dwt)},{p.accuracy!r}\n")
    for p in points:
        print(f"{p.window_s:>5g} s  dwt={'yes' if p.use_dwt else 'no ':<3}  {100 * p.accuracy:6.2f}%")
    return 0


# --- parser --------------------------------------------------------------------

def _pipeline_flags(p: argparse.ArgumentParser, classifier_choices, default_classifier="svm"):
    p.add_argument("--data", type=Path, required=True, help="dataset directory (manifest.json)")
    p.add_argument("--classifier", choices=classifier_choices, default=default_classifier)
    p.add_argument("--window-s", type=_positive(float), default=4.0)
    p.add_argument("--windows-per-recording", type=_positive(int), default=2)
    p.add_argument("--wavelet", choices=SUPPORTED_WAVELETS, default="dmey")
    p.add_argument("--levels", type=_positive(int), default=5)
    p.add_argument("--no-dwt", action="store_true", help="features from the raw window")
    p.add_argument("--paper-normalization", action="store_true",
                   help="min-max scale on the whole dataset before splitting")
    p.add_argument("--group-by-subject", action="store_true",
                   help="keep each subject's windows in a single fold")
    p.add_argument("--folds", type=int, default=5)
    p.add_argument("--seed", type=int, default=0, help="fold-assignment seed")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="creephar", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"creephar {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("profile", help="around-body path gain table")
    p.add_argument("--circumference-cm", type=_positive(float), required=True)
    p.add_argument("--freq-mhz", type=_positive(float), default=2450.0)
    p.add_argument("--step-cm", type=_positive(float), default=1.0)
    p.add_argument("--decay-scale", type=_positive(float), default=DEFAULT_DECAY_SCALE)
    p.add_argument("--out", type=Path)
    p.add_argument("--name", default="profile.csv")
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("synth", help="write a synthetic dataset directory")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--subjects", type=_positive(int), default=6)
    p.add_argument("--trials", type=_positive(int), default=10)
    p.add_argument("--sample-rate", type=_positive(float), default=50.0)
    p.add_argument("--duration", type=_positive(float), default=20.0)
    p.add_argument("--noise-db", type=float, default=SynthConfig().noise_db)
    p.add_argument("--out", type=Path)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("ingest", help="collect measured traces into a dataset directory")
    p.add_argument("traces", nargs="+", type=Path)
    p.add_argument("--subjects-json", type=Path, help="list of subject records")
    p.add_argument("--out", type=Path)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("train", help="fit one classifier on a whole dataset")
    _pipeline_flags(p, CLASSIFIER_NAMES)
    p.add_argument("--out", type=Path)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("evaluate", help="k-fold cross-validation reports")
    _pipeline_flags(p, CLASSIFIER_NAMES + ("all",))
    p.add_argument("--out", type=Path)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("sweep", help="accuracy against window length")
    _pipeline_flags(p, CLASSIFIER_NAMES)
    p.add_argument("--windows", type=_windows_list, default=[1, 2, 3, 4, 5, 6, 7, 8])
    p.add_argument("--dwt-only", action="store_true")
    p.add_argument("--out", type=Path)
    p.add_argument("--name", default="sweep.csv")
    p.set_defaults(func=cmd_sweep)
    return parser


def _check_paths(parser, args):
    for attr in ("data", "subjects_json"):
        path = getattr(args, attr, None)
        if path is not None and not Path(path).exists():
            parser.error(f"--{attr.replace('_', '-')}: {path} does not exist")
    if getattr(args, "data", None) is not None and not (Path(args.data) / "manifest.json").is_file():
        parser.error(f"--data: {args.data} has no manifest.json")
    for trace in getattr(args, "traces", None) or ():
        if not Path(trace).is_file():
            parser.error(f"trace {trace} does not exist")
    if getattr(args, "folds", 5) < 2:
        parser.error("--folds must be at least 2")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _check_paths(parser, args)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"creephar {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError, RuntimeError) as exc:
        print(f"creephar {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
