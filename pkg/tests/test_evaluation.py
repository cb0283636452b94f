import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from meshsteg import (Confusion, SplitPlan, category_relevance,
                      confusion_from_scores, make_splits, pearson_relevance,
                      roc_auc, roc_curve, run_experiment, write_report_files)
from meshsteg.errors import EmptyPlan, EmptyTestSet, SingleClass, SizeMismatch
from meshsteg.evaluation import RELEVANCE_CATEGORIES


# ---------------------------------------------------------------------------
# splits

def test_splits_disjoint_exhaustive_paired():
    plan = SplitPlan(trials=30, train_pairs=260, test_pairs=94, master_seed=5)
    splits = make_splits(354, plan)
    assert len(splits) == 30
    for train, test in splits:
        assert len(train) == 260 and len(test) == 94
        merged = np.concatenate([train, test])
        assert np.array_equal(np.sort(merged), np.arange(354))


def test_splits_deterministic():
    plan = SplitPlan(trials=5, train_pairs=7, test_pairs=3, master_seed=42)
    a = make_splits(10, plan)
    b = make_splits(10, plan)
    for (ta, sa), (tb, sb) in zip(a, b):
        assert np.array_equal(ta, tb) and np.array_equal(sa, sb)


def test_splits_size_mismatch():
    with pytest.raises(SizeMismatch):
        make_splits(10, SplitPlan(trials=1, train_pairs=6, test_pairs=3))


def test_splits_zero_trials():
    with pytest.raises(EmptyPlan):
        make_splits(10, SplitPlan(trials=0, train_pairs=7, test_pairs=3))


def test_splits_all_partitions_appear_over_seeds():
    # 4 pairs, (3, 1) plan: all four possible test singletons must occur
    seen = set()
    for seed in range(64):
        plan = SplitPlan(trials=1, train_pairs=3, test_pairs=1, master_seed=seed)
        (_, test), = make_splits(4, plan)
        seen.add(int(test[0]))
    assert seen == {0, 1, 2, 3}


# ---------------------------------------------------------------------------
# detection error

def test_detection_error_examples():
    assert Confusion(tp=94, fp=0, tn=94, fn=0).detection_error == 0.0
    always_cover = Confusion(tp=0, fp=0, tn=94, fn=94)
    assert always_cover.detection_error == 0.5
    mixed = Confusion(tp=91, fp=5, tn=89, fn=3)
    assert mixed.error_count == 8
    assert mixed.detection_error == pytest.approx(8 / 188)


def test_detection_error_empty():
    with pytest.raises(EmptyTestSet):
        Confusion(0, 0, 0, 0).detection_error


def test_confusion_from_scores():
    scores = np.array([-1.0, 2.0, 0.5, -0.2])
    labels = np.array([0, 1, 0, 1])
    c = confusion_from_scores(scores, labels)
    assert (c.tp, c.fp, c.tn, c.fn) == (1, 1, 1, 1)


# ---------------------------------------------------------------------------
# ROC / AUC

def brute_force_auc(scores, labels):
    pos = [s for s, l in zip(scores, labels) if l == 1]
    neg = [s for s, l in zip(scores, labels) if l == 0]
    wins = sum((p > n) + 0.5 * (p == n) for p in pos for n in neg)
    return wins / (len(pos) * len(neg))


def test_auc_perfect_and_random():
    labels = np.array([0, 0, 1, 1])
    assert roc_auc(np.array([0.1, 0.2, 0.8, 0.9]), labels) == 1.0
    assert roc_auc(np.zeros(4), labels) == 0.5


def test_roc_endpoints_and_monotonicity(rng):
    scores = rng.normal(size=200)
    labels = (rng.uniform(size=200) < 0.4).astype(np.int64)
    points, auc = roc_curve(scores, labels)
    assert np.array_equal(points[0], [0.0, 0.0])
    assert np.array_equal(points[-1], [1.0, 1.0])
    assert np.all(np.diff(points[:, 0]) >= 0)
    assert np.all(np.diff(points[:, 1]) >= 0)


def test_auc_matches_pair_counting_with_ties(rng):
    for _ in range(100):
        n = int(rng.integers(4, 40))
        scores = np.round(rng.normal(size=n), 1)    # coarse: many ties
        labels = np.zeros(n, dtype=np.int64)
        labels[rng.permutation(n)[: int(rng.integers(1, n))] ] = 1
        if labels.sum() in (0, n):
            continue
        assert roc_auc(scores, labels) == pytest.approx(
            brute_force_auc(scores, labels), abs=1e-12)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(min_value=-5, max_value=5), min_size=2, max_size=30),
       st.data())
def test_auc_pair_counting_property(score_ints, data):
    n = len(score_ints)
    labels = data.draw(st.lists(st.integers(0, 1), min_size=n, max_size=n))
    if sum(labels) in (0, n):
        return
    scores = np.asarray(score_ints, dtype=float)
    labels = np.asarray(labels)
    assert roc_auc(scores, labels) == pytest.approx(
        brute_force_auc(scores, labels), abs=1e-12)


def test_auc_single_class_rejected():
    with pytest.raises(SingleClass):
        roc_auc(np.array([1.0, 2.0]), np.array([1, 1]))


def test_auc_one_implies_zero_error_threshold(rng):
    scores = np.r_[rng.uniform(-2, -1, 20), rng.uniform(1, 2, 20)]
    labels = np.r_[np.zeros(20, dtype=np.int64), np.ones(20, dtype=np.int64)]
    assert roc_auc(scores, labels) == 1.0
    c = confusion_from_scores(scores, labels, threshold=0.0)
    assert c.error_count == 0


# ---------------------------------------------------------------------------
# Pearson relevance

def test_relevance_label_copy_is_one(rng):
    y = np.r_[np.zeros(50), np.ones(50)]
    X = np.stack([y, -y, rng.normal(size=100)], axis=1)
    rel = pearson_relevance(X, y)
    assert rel[0] == pytest.approx(1.0, abs=1e-12)
    assert rel[1] == pytest.approx(1.0, abs=1e-12)   # negated copy, same |rho|
    assert rel[2] < 0.5


def test_relevance_zero_variance_feature(rng):
    y = np.r_[np.zeros(10), np.ones(10)]
    X = np.stack([np.full(20, 3.0), y], axis=1)
    rel = pearson_relevance(X, y)
    assert rel[0] == 0.0


def test_relevance_matches_textbook_oracle(rng):
    X = rng.normal(size=(80, 5))
    y = (rng.uniform(size=80) < 0.5).astype(float)
    rel = pearson_relevance(X, y)
    for j in range(5):
        num = np.mean((X[:, j] - X[:, j].mean()) * (y - y.mean()))
        den = X[:, j].std() * y.std()
        assert rel[j] == pytest.approx(abs(num / den), abs=1e-12)


def test_relevance_single_class_rejected():
    with pytest.raises(SingleClass):
        pearson_relevance(np.ones((4, 2)), np.zeros(4))


def test_category_structure():
    phis = sorted(p for group in RELEVANCE_CATEGORIES.values() for p in group)
    assert phis == list(range(1, 20))
    rel = np.zeros(76)
    rel[4 * 10:4 * 11] = 1.0   # all four phi11 moments
    cats = category_relevance(rel)
    assert cats[7] == pytest.approx(1.0)
    assert all(cats[c] == 0.0 for c in cats if c != 7)


# ---------------------------------------------------------------------------
# experiment runner

def synthetic_pair_matrices(rng, n_pairs=40, informative=(0, 4, 52)):
    """Cover rows ~ N(0,1); stego rows shifted on a few columns."""
    X_cover = rng.normal(size=(n_pairs, 76))
    X_stego = rng.normal(size=(n_pairs, 76))
    for col in informative:
        X_stego[:, col] += 2.0
    return X_cover, X_stego


def test_run_experiment_shapes_and_medians(rng, tmp_path):
    X_cover, X_stego = synthetic_pair_matrices(rng)
    plan = SplitPlan(trials=4, train_pairs=30, test_pairs=10, master_seed=9)
    report = run_experiment(X_cover, X_stego, ["yang40", "lfs76"],
                            ["qda", "svm"], plan)
    assert len(report.records) == 4 * 2 * 2
    # medians recomputable from the per-trial records
    for cell in report.summaries:
        aucs = [r.auc for r in report.records
                if r.set_id == cell.set_id and r.classifier == cell.classifier]
        assert cell.median_auc == pytest.approx(np.median(aucs))
        errs = [r.confusion.detection_error for r in report.records
                if r.set_id == cell.set_id and r.classifier == cell.classifier]
        assert cell.median_error_rate == pytest.approx(np.median(errs))
    assert report.relevance is not None and len(report.relevance) == 76
    write_report_files(report, tmp_path / "out")
    assert (tmp_path / "out" / "report.csv").exists()
    assert (tmp_path / "out" / "summary.csv").exists()
    assert (tmp_path / "out" / "roc_lfs76_svm.csv").exists()
    assert (tmp_path / "out" / "relevance.csv").exists()


def test_run_experiment_deterministic(rng):
    X_cover, X_stego = synthetic_pair_matrices(rng)
    plan = SplitPlan(trials=3, train_pairs=30, test_pairs=10, master_seed=1)
    a = run_experiment(X_cover, X_stego, ["lfs76"], ["qda", "fld"], plan)
    b = run_experiment(X_cover, X_stego, ["lfs76"], ["qda", "fld"], plan)
    for ra, rb in zip(a.records, b.records):
        assert ra.auc == rb.auc
        assert ra.confusion == rb.confusion


def test_run_experiment_zero_trials(rng):
    X_cover, X_stego = synthetic_pair_matrices(rng, n_pairs=10)
    with pytest.raises(EmptyPlan):
        run_experiment(X_cover, X_stego, ["lfs76"], ["qda"],
                       SplitPlan(trials=0, train_pairs=8, test_pairs=2))


def test_single_trial_median_equals_trial(rng):
    X_cover, X_stego = synthetic_pair_matrices(rng, n_pairs=20)
    plan = SplitPlan(trials=1, train_pairs=15, test_pairs=5, master_seed=2)
    report = run_experiment(X_cover, X_stego, ["lfs76"], ["qda"], plan)
    assert report.summaries[0].median_auc == report.records[0].auc


def test_report_files_bit_identical(rng, tmp_path):
    X_cover, X_stego = synthetic_pair_matrices(rng)
    plan = SplitPlan(trials=2, train_pairs=30, test_pairs=10, master_seed=7)
    for d in ("a", "b"):
        report = run_experiment(X_cover, X_stego, ["lfs76"], ["qda", "svm", "fld"],
                                plan)
        write_report_files(report, tmp_path / d)
    for name in ("report.csv", "summary.csv", "relevance.csv", "roc_lfs76_fld.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
