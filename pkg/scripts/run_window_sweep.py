"""Accuracy against window length, with and without the wavelet features.

    python3 scripts/run_window_sweep.py [--seed 0] [--classifier svm] [--windows 1,2,...,8]
"""
import argparse

from creephar.classifiers import CLASSIFIER_NAMES
from creephar.evaluation import PipelineConfig, window_sweep
from creephar.synth import synth_dataset


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--classifier", choices=CLASSIFIER_NAMES, default="svm")
    ap.add_argument("--windows", default="1,2,3,4,5,6,7,8")
    args = ap.parse_args()

    windows = [float(w) for w in args.windows.split(",")]
    points = window_sweep(synth_dataset(args.seed), windows,
                          PipelineConfig(classifier=args.classifier, seed=args.seed))
    by_key = {(p.use_dwt, p.window_s): p.accuracy for p in points}
    print(f"{'window_s':>8} {'no DWT':>8} {'DWT':>8}")
    for w in sorted(windows):
        print(f"{w:>8g} {100 * by_key[(False, w)]:>7.1f}% {100 * by_key[(True, w)]:>7.1f}%")


if __name__ == "__main__":
    main()
