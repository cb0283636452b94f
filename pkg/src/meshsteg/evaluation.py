"""Experiment orchestration: paired-corpus splits, detection error, ROC/AUC,
Pearson feature relevance, and median-over-trials reporting.

Pairs never straddle the train/test boundary: splitting happens at the pair
level, and both members of a pair (cover labeled 0, stego labeled 1) land on
the same side. Everything is driven by a master seed, with per-trial seeds
derived as master XOR trial index, so any report is reproducible bit for bit.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from .errors import (EmptyPlan, EmptyTestSet, SingleClass, SizeMismatch)
from .stats import FEATURE_SETS, set_columns
from .classifiers import (fld_ensemble_score, fld_ensemble_train, qda_score,
                          qda_train, svm_grid_search, svm_score, svm_train)

CLASSIFIERS = ("qda", "svm", "fld")

# relevance categories: group id -> phi indices (all four moments of each phi)
RELEVANCE_CATEGORIES: dict[int, tuple[int, ...]] = {
    1: (1, 2, 3),     # vertex position, Cartesian
    2: (7,),          # vertex norm, Cartesian
    3: (4, 5, 6),     # vertex position, Laplacian
    4: (8,),          # vertex norm, Laplacian
    5: (10,),         # face normal
    6: (9,),          # dihedral angle
    7: (11,),         # vertex normal
    8: (12, 13),      # curvature
    9: (14, 15, 16),  # vertex position, spherical
    10: (17, 18, 19),  # edge gaps, spherical
}


@dataclass(frozen=True)
class SplitPlan:
    trials: int = 30
    train_pairs: int = 260
    test_pairs: int = 94
    master_seed: int = 0


def make_splits(n_pairs: int, plan: SplitPlan) -> list[tuple[np.ndarray, np.ndarray]]:
    """One (train ids, test ids) pair-index partition per trial."""
    if plan.train_pairs + plan.test_pairs != n_pairs:
        raise SizeMismatch(f"plan {plan.train_pairs}+{plan.test_pairs} != corpus {n_pairs}")
    if plan.trials <= 0:
        raise EmptyPlan("need at least one trial")
    splits = []
    for trial in range(plan.trials):
        rng = np.random.default_rng(np.random.PCG64(plan.master_seed ^ trial))
        perm = rng.permutation(n_pairs)
        splits.append((np.sort(perm[:plan.train_pairs]),
                       np.sort(perm[plan.train_pairs:])))
    return splits


@dataclass(frozen=True)
class Confusion:
    tp: int
    fp: int
    tn: int
    fn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn

    @property
    def error_count(self) -> int:
        """Raw sum of missed detections and false alarms."""
        return self.fn + self.fp

    @property
    def detection_error(self) -> float:
        """(FN + FP) / (P + N), the normalized error rate."""
        if self.total == 0:
            raise EmptyTestSet("no test samples")
        return self.error_count / self.total


def confusion_from_scores(scores: np.ndarray, labels: np.ndarray,
                          threshold: float = 0.0) -> Confusion:
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    pred = scores > threshold
    stego = labels == 1
    return Confusion(tp=int(np.count_nonzero(pred & stego)),
                     fp=int(np.count_nonzero(pred & ~stego)),
                     tn=int(np.count_nonzero(~pred & ~stego)),
                     fn=int(np.count_nonzero(~pred & stego)))


def roc_curve(scores: np.ndarray, labels: np.ndarray) -> tuple[np.ndarray, float]:
    """ROC points over all distinct thresholds and the trapezoid AUC.

    The AUC equals the probability that a random stego outscores a random
    cover, with score ties counted one half.
    """
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    n_pos = int(np.count_nonzero(labels == 1))
    n_neg = int(np.count_nonzero(labels == 0))
    if n_pos == 0 or n_neg == 0:
        raise SingleClass("ROC needs both cover and stego samples")

    order = np.argsort(-scores, kind="stable")
    s = scores[order]
    pos = (labels[order] == 1).astype(np.int64)
    tp = np.cumsum(pos)
    fp = np.cumsum(1 - pos)
    # keep only the last entry of each tied-score group
    last = np.ones(len(s), dtype=bool)
    last[:-1] = s[1:] != s[:-1]
    tpr = np.concatenate([[0.0], tp[last] / n_pos])
    fpr = np.concatenate([[0.0], fp[last] / n_neg])
    points = np.stack([fpr, tpr], axis=1)
    auc = float(np.trapezoid(tpr, fpr))
    return points, auc


def roc_auc(scores: np.ndarray, labels: np.ndarray) -> float:
    return roc_curve(scores, labels)[1]


def pearson_relevance(X: np.ndarray, y: np.ndarray) -> np.ndarray:
    """|Pearson correlation| of each feature column with the class label.
    Zero-variance columns (or a zero-variance label) get relevance 0."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if len(np.unique(y)) < 2:
        raise SingleClass("relevance needs both labels")
    yc = y - y.mean()
    sy = np.sqrt(np.mean(yc ** 2))
    Xc = X - X.mean(axis=0)
    sx = np.sqrt(np.mean(Xc ** 2, axis=0))
    cov = np.mean(Xc * yc[:, None], axis=0)
    out = np.zeros(X.shape[1])
    live = sx > 0.0
    out[live] = np.abs(cov[live] / (sx[live] * sy))
    return out


def category_relevance(relevances: np.ndarray) -> dict[int, float]:
    """Mean relevance per feature category (full 76-dim layout required)."""
    if len(relevances) != 76:
        raise ValueError("category relevance is defined on the 76-dim feature layout")
    means = {}
    for cat, phis in RELEVANCE_CATEGORIES.items():
        cols = np.concatenate([np.arange(4 * (k - 1), 4 * k) for k in phis])
        means[cat] = float(relevances[cols].mean())
    return means


@dataclass
class TrialRecord:
    set_id: str
    classifier: str
    trial: int
    confusion: Confusion
    auc: float
    roc: np.ndarray
    params: dict = field(default_factory=dict)


@dataclass
class CellSummary:
    set_id: str
    classifier: str
    median_error_rate: float
    median_error_count: float
    median_auc: float
    auc_std: float
    roc: np.ndarray   # ROC of the trial whose AUC is closest to the median


@dataclass
class ExperimentReport:
    plan: SplitPlan
    records: list[TrialRecord]
    summaries: list[CellSummary]
    relevance: np.ndarray | None
    relevance_categories: dict[int, float] | None

    def summary(self, set_id: str, classifier: str) -> CellSummary:
        for cell in self.summaries:
            if cell.set_id == set_id and cell.classifier == classifier:
                return cell
        raise KeyError((set_id, classifier))


def _train_and_score(classifier, Xtr, ytr, Xte, seed, svm_c, svm_gamma, grid):
    if classifier == "qda":
        return qda_score(qda_train(Xtr, ytr), Xte), {}
    if classifier == "fld":
        model = fld_ensemble_train(Xtr, ytr, seed=seed)
        return fld_ensemble_score(model, Xte), {
            "d_sub": model.d_sub, "members": len(model.members)}
    if classifier == "svm":
        c, gamma = svm_c, svm_gamma
        params = {}
        if grid:
            res = svm_grid_search(Xtr, ytr, seed=seed)
            c, gamma = res.C, res.gamma
            params = {"cv_error": res.cv_error}
        model = svm_train(Xtr, ytr, C=c, gamma=gamma, seed=seed)
        return svm_score(model, Xte), dict(params, C=c, gamma=gamma)
    raise ValueError(f"unknown classifier {classifier!r}; known: {CLASSIFIERS}")


def run_experiment(X_cover: np.ndarray, X_stego: np.ndarray,
                   set_ids, classifiers, plan: SplitPlan,
                   svm_c: float = 10.0, svm_gamma: float = 2.0 ** -10,
                   grid: bool = False) -> ExperimentReport:
    """Train/evaluate every (feature set, classifier) cell over all trials.

    X_cover and X_stego are row-aligned 76-dim feature matrices (pair i in
    row i). Feature subsets are sliced out of the 76-dim layout, which is
    exact because the named sets are index groups of it.
    """
    X_cover = np.asarray(X_cover, dtype=np.float64)
    X_stego = np.asarray(X_stego, dtype=np.float64)
    if X_cover.shape != X_stego.shape:
        raise SizeMismatch("cover and stego feature matrices must align")
    if X_cover.shape[1] != 76:
        raise SizeMismatch(f"expected 76-dim features, got {X_cover.shape[1]}")
    for set_id in set_ids:
        if set_id not in FEATURE_SETS:
            raise KeyError(f"unknown feature set {set_id!r}")

    n_pairs = len(X_cover)
    splits = make_splits(n_pairs, plan)
    records: list[TrialRecord] = []
    for trial, (train_ids, test_ids) in enumerate(splits):
        seed = plan.master_seed ^ trial
        for set_id in set_ids:
            cols = set_columns(set_id)
            Xtr = np.vstack([X_cover[train_ids][:, cols], X_stego[train_ids][:, cols]])
            ytr = np.r_[np.zeros(len(train_ids), dtype=np.int64),
                        np.ones(len(train_ids), dtype=np.int64)]
            Xte = np.vstack([X_cover[test_ids][:, cols], X_stego[test_ids][:, cols]])
            yte = np.r_[np.zeros(len(test_ids), dtype=np.int64),
                        np.ones(len(test_ids), dtype=np.int64)]
            for classifier in classifiers:
                scores, params = _train_and_score(
                    classifier, Xtr, ytr, Xte, seed, svm_c, svm_gamma, grid)
                roc, auc = roc_curve(scores, yte)
                records.append(TrialRecord(
                    set_id=set_id, classifier=classifier, trial=trial,
                    confusion=confusion_from_scores(scores, yte),
                    auc=auc, roc=roc, params=params))

    summaries = []
    for set_id in set_ids:
        for classifier in classifiers:
            cell = [r for r in records
                    if r.set_id == set_id and r.classifier == classifier]
            aucs = np.array([r.auc for r in cell])
            median_auc = float(np.median(aucs))
            nearest = int(np.argmin(np.abs(aucs - median_auc)))
            summaries.append(CellSummary(
                set_id=set_id, classifier=classifier,
                median_error_rate=float(np.median(
                    [r.confusion.detection_error for r in cell])),
                median_error_count=float(np.median(
                    [r.confusion.error_count for r in cell])),
                median_auc=median_auc,
                auc_std=float(np.std(aucs)),
                roc=cell[nearest].roc))

    relevance = relevance_cats = None
    if X_cover.shape[1] == 76:
        X_all = np.vstack([X_cover, X_stego])
        y_all = np.r_[np.zeros(n_pairs), np.ones(n_pairs)]
        relevance = pearson_relevance(X_all, y_all)
        relevance_cats = category_relevance(relevance)
    return ExperimentReport(plan=plan, records=records, summaries=summaries,
                            relevance=relevance, relevance_categories=relevance_cats)


# ---------------------------------------------------------------------------
# report files

def write_report_files(report: ExperimentReport, outdir) -> list[str]:
    """Emit report.csv, summary.csv, roc_<cell>.csv and relevance.csv."""
    os.makedirs(outdir, exist_ok=True)
    written = []

    path = os.path.join(outdir, "report.csv")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("set,classifier,trial,tp,fp,tn,fn,error_count,error_rate,auc,params\n")
        for r in report.records:
            c = r.confusion
            params = ";".join(f"{k}={v!r}" for k, v in sorted(r.params.items()))
            fh.write(f"{r.set_id},{r.classifier},{r.trial},{c.tp},{c.fp},{c.tn},{c.fn},"
                     f"{c.error_count},{c.detection_error!r},{r.auc!r},{params}\n")
    written.append(path)

    path = os.path.join(outdir, "summary.csv")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("set,classifier,median_error_rate,median_error_count,"
                 "median_auc,auc_std\n")
        for s in report.summaries:
            fh.write(f"{s.set_id},{s.classifier},{s.median_error_rate!r},"
                     f"{s.median_error_count!r},{s.median_auc!r},{s.auc_std!r}\n")
    written.append(path)

    for s in report.summaries:
        path = os.path.join(outdir, f"roc_{s.set_id}_{s.classifier}.csv")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("fpr,tpr\n")
            for fpr, tpr in s.roc:
                fh.write(f"{float(fpr)!r},{float(tpr)!r}\n")
        written.append(path)

    if report.relevance is not None:
        path = os.path.join(outdir, "relevance.csv")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("feature,relevance\n")
            for i, rho in enumerate(report.relevance):
                fh.write(f"f{i:03d},{float(rho)!r}\n")
            fh.write("category,mean_relevance\n")
            for cat, value in report.relevance_categories.items():
                fh.write(f"{cat},{value!r}\n")
        written.append(path)
    return written
