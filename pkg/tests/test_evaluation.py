from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from creephar.evaluation import (EvaluationError, PipelineConfig, PlanningError, compute_metrics,
                                 confusion_matrix, confusion_table, cross_validate, make_folds,
                                 pipeline_features, summary_table, window_sweep)
from creephar.classifiers import ConfigurationError
from creephar.synth import Activity, SynthConfig, default_subjects, default_templates, synth_dataset

BALANCED = np.repeat(np.arange(6), 120)


def test_balanced_folds():
    plan = make_folds(BALANCED, 5, seed=0)
    for f in range(5):
        test = plan.test_index(f)
        assert len(test) == 144
        assert np.bincount(BALANCED[test]).tolist() == [24] * 6
    again = make_folds(BALANCED, 5, seed=0)
    assert np.array_equal(plan.assignments, again.assignments)
    assert not np.array_equal(plan.assignments, make_folds(BALANCED, 5, seed=1).assignments)


@settings(max_examples=50)
@given(counts=st.lists(st.integers(5, 40), min_size=2, max_size=6), k=st.integers(2, 5),
       seed=st.integers(0, 1000))
def test_stratified_partition(counts, k, seed):
    labels = np.repeat(np.arange(len(counts)), counts)
    plan = make_folds(labels, k, seed)
    per = np.array([np.bincount(labels[plan.test_index(f)], minlength=len(counts)) for f in range(k)])
    assert per.sum() == len(labels)
    assert np.all(per.max(axis=0) - per.min(axis=0) <= 1)
    sizes = per.sum(axis=1)
    assert sizes.max() - sizes.min() <= 1


def test_fold_planning_errors():
    with pytest.raises(PlanningError, match="at least 2"):
        make_folds(BALANCED, 1)
    with pytest.raises(PlanningError, match="fewer than k"):
        make_folds(np.array([0, 0, 0, 1, 1, 1, 1, 1]), 5)


def test_subject_folds_keep_subjects_together():
    groups = np.repeat(["a", "b", "c", "d", "e", "f"], 10)
    plan = make_folds(np.tile(np.arange(2), 30), 3, 0, groups)
    for f in range(3):
        test_groups = set(groups[plan.test_index(f)])
        assert not test_groups & set(groups[plan.train_index(f)])
    with pytest.raises(PlanningError):
        make_folds(np.zeros(4), 5, 0, np.array(["a", "a", "b", "b"]))


def test_metrics_diagonal_and_two_class():
    m = compute_metrics(np.diag([5, 3, 7]))
    assert (m.accuracy, m.precision, m.recall, m.f1) == (1.0, 1.0, 1.0, 1.0)
    m = compute_metrics([[8, 2], [3, 7]])
    assert m.accuracy == 0.75
    assert m.per_class_precision[0] == pytest.approx(8 / 11)
    assert m.per_class_recall[0] == pytest.approx(0.8)
    pa, ra = 8 / 11, 0.8
    pb, rb = 7 / 9, 0.7
    f1 = (2 * pa * ra / (pa + ra) + 2 * pb * rb / (pb + rb)) / 2
    assert m.f1 == pytest.approx(f1, abs=1e-15)


def test_metrics_from_stated_error_rates():
    # 120 windows per class; rates rounded to whole windows
    cm = np.diag([120] * 6)
    F, B, L, Q = (Activity.FORWARD_SWING, Activity.BACKWARD_SWING, Activity.LIFTING_KNEE,
                  Activity.SQUATTING)
    for true, pred, rate in ((F, Q, 0.225), (F, B, 0.02), (B, L, 0.025), (Q, F, 0.175)):
        n = int(round(rate * 120))
        cm[true, pred] += n
        cm[true, true] -= n
    assert cm.sum(axis=1).tolist() == [120] * 6
    m = compute_metrics(cm)
    assert m.accuracy == pytest.approx(np.trace(cm) / 720)
    assert m.per_class_recall[F] == pytest.approx(91 / 120)
    assert m.per_class_precision[F] == pytest.approx(91 / (91 + 21))
    assert m.per_class_precision[Q] == pytest.approx(99 / (99 + 27))
    # balanced classes: accuracy equals support-weighted recall
    assert m.accuracy == pytest.approx(np.mean(m.per_class_recall), abs=1e-15)
    for p, r, f in zip(m.per_class_precision, m.per_class_recall, m.per_class_f1):
        assert f == pytest.approx(2 * p * r / (p + r))


def test_metrics_edge_cases():
    with pytest.raises(EvaluationError):
        compute_metrics(np.zeros((3, 3)))
    with pytest.warns(UserWarning, match="absent"):
        m = compute_metrics([[5, 0, 0], [1, 4, 0], [0, 0, 0]])
    assert m.recall == pytest.approx((1 + 0.8) / 2)
    m = compute_metrics([[5, 0], [3, 0]])  # class 1 never predicted
    assert m.per_class_precision[1] == 0.0


def test_confusion_matrix_counts():
    cm = confusion_matrix([0, 1, 1, 2], [0, 2, 1, 2], 3)
    assert cm.tolist() == [[1, 0, 0], [0, 1, 1], [0, 0, 1]]


def test_config_validation():
    with pytest.raises(ConfigurationError, match="svm, knn"):
        PipelineConfig(classifier="lda")
    with pytest.raises(ConfigurationError):
        PipelineConfig(normalization="batch")


@pytest.fixture(scope="module")
def small():
    return synth_dataset(0, subjects=default_subjects()[:3], n_trials=3)


def _aligned_noiseless():
    # a 2 s period fits a 4 s window exactly, so every window of a class is
    # the same series once referenced
    templates = {a: replace(t, period_range=(2.0, 2.0)) for a, t in default_templates().items()}
    return synth_dataset(0, SynthConfig(templates=templates).noiseless(), n_trials=3)


@pytest.mark.parametrize("name", ["svm", "knn", "gnb", "tree", "dtw"])
def test_noiseless_dataset_is_perfectly_classified(name):
    rep = cross_validate(_aligned_noiseless(), PipelineConfig(classifier=name))
    assert rep.accuracy == 1.0


@pytest.mark.parametrize("name", ["svm", "knn", "gnb", "tree"])
def test_noiseless_default_periods_feature_classifiers(name):
    ds = synth_dataset(0, SynthConfig().noiseless(), n_trials=3)
    assert cross_validate(ds, PipelineConfig(classifier=name)).accuracy == 1.0


def test_report_structure_and_hygiene(small):
    rep = cross_validate(small, PipelineConfig())
    assert rep.confusion.sum() == 108
    assert sum(f.confusion.sum() for f in rep.folds) == 108
    for f in rep.folds:
        assert not np.intersect1d(f.fit_index, f.test_index).size
    d = rep.to_dict()
    assert 0 <= d["pooled"]["accuracy"] <= 1
    assert set(d["fold_mean"]) == {"accuracy", "precision", "recall", "f1"}
    assert np.allclose(rep.confusion_percent().sum(axis=1), 100)
    assert rep.to_json({"seed": 0}) == rep.to_json({"seed": 0})
    assert "svm" in summary_table([rep]) and "sideways_swing" in confusion_table(rep)


def test_dtw_templates_come_from_training_rows(small):
    rep = cross_validate(small, PipelineConfig(classifier="dtw"))
    for f in rep.folds:
        assert len(f.fit_index) == 6
        assert np.isin(f.fit_index, f.train_index).all()


def test_global_normalization_and_subject_folds(small):
    g = cross_validate(small, PipelineConfig(normalization="global"))
    assert len(g.folds[0].fit_index) == 108
    s = cross_validate(small, PipelineConfig(fold_mode="subject", k=3))
    assert s.config["fold_plan_mode"] == "subject"
    fm = pipeline_features(small, PipelineConfig())
    for f in s.folds:
        assert not set(fm.groups[f.test_index]) & set(fm.groups[f.train_index])


def test_window_sweep_grid(small):
    pts = window_sweep(small, [3, 1, 2])
    assert len(pts) == 6
    assert [(p.use_dwt, p.window_s) for p in pts] == sorted((p.use_dwt, p.window_s) for p in pts)
    assert all(0 <= p.accuracy <= 1 for p in pts)
    with pytest.raises(EvaluationError, match="21"):
        window_sweep(small, [4, 21])


def test_sweep_eight_windows_gives_sixteen_points(small):
    pts = window_sweep(small, list(range(1, 9)), replace(PipelineConfig(), classifier="gnb"))
    assert len(pts) == 16
