"""Cross-validate all five classifiers on the default synthetic dataset.

Prints the accuracy/precision/recall/F1 table for 4-s windows and the SVM
confusion matrix in row percentages.

    python3 scripts/run_table3.py [--seed 0] [--window-s 4] [--group-by-subject]
"""
import argparse
import time

from creephar.classifiers import CLASSIFIER_NAMES
from creephar.evaluation import (PipelineConfig, class_dtw_distances, confusion_table,
                                 cross_validate, pipeline_features, summary_table)
from creephar.synth import synth_dataset


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--window-s", type=float, default=4.0)
    ap.add_argument("--no-dwt", action="store_true")
    ap.add_argument("--group-by-subject", action="store_true")
    ap.add_argument("--paper-normalization", action="store_true")
    args = ap.parse_args()

    t0 = time.perf_counter()
    ds = synth_dataset(args.seed)
    base = PipelineConfig(window_s=args.window_s, use_dwt=not args.no_dwt, seed=args.seed,
                          fold_mode="subject" if args.group_by_subject else "stratified",
                          k=6 if args.group_by_subject else 5,
                          normalization="global" if args.paper_normalization else "fold")
    fm = pipeline_features(ds, base)
    dtw = class_dtw_distances(fm)
    reports = []
    for name in CLASSIFIER_NAMES:
        cfg = PipelineConfig(**{**base.__dict__, "classifier": name})
        reports.append(cross_validate(ds, cfg, features=fm, dtw_cache=dtw))
    print(summary_table(reports))
    print()
    print("SVM confusion (% of true class)")
    print(confusion_table(reports[0]))
    print(f"\n{time.perf_counter() - t0:.1f} s")


if __name__ == "__main__":
    main()
