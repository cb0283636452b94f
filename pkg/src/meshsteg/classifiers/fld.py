"""Majority-vote ensemble of Fisher linear discriminants on random feature
subspaces, with the subspace dimension and ensemble size chosen by
out-of-bag error.

Each base learner is trained on a bootstrap sample restricted to a random
feature subset; its OOB samples supply the running error estimate. For each
candidate subspace size on a geometric ladder the ensemble grows until the
OOB error stabilizes (or 500 learners), and the candidate with the lowest
final OOB error wins. Ties at exactly half the votes classify as cover.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import DegenerateScatter, DimensionMismatch, SingleClass
from .standardize import Standardizer

MAX_LEARNERS = 500
CHECK_EVERY = 10
STABLE_REL_CHANGE = 1e-3
SCATTER_RIDGE = 1e-6


@dataclass
class FldMember:
    feature_idx: np.ndarray
    w: np.ndarray
    b: float

    def votes(self, Z: np.ndarray) -> np.ndarray:
        return (Z[:, self.feature_idx] @ self.w - self.b > 0.0).astype(np.int64)


@dataclass
class FldEnsembleModel:
    standardizer: Standardizer
    members: list[FldMember]
    d_sub: int
    seed: int
    oob_errors: dict[int, float]        # final OOB error per candidate d_sub
    oob_trace: list[tuple[int, float]]  # (ensemble size, OOB error) for the winner
    set_id: str | None = None
    meta: dict = field(default_factory=dict)

    @property
    def n_features(self) -> int:
        return self.standardizer.n_features


def subspace_ladder(p: int) -> list[int]:
    """Candidate subspace sizes: p/8, p/4, p/2 (rounded up) and p itself."""
    sizes = {math.ceil(p / 8), math.ceil(p / 4), math.ceil(p / 2), p}
    return sorted(s for s in sizes if 1 <= s <= p)


def _fit_member(Z, y, feature_idx):
    Zs = Z[:, feature_idx]
    mu0 = Zs[y == 0].mean(axis=0)
    mu1 = Zs[y == 1].mean(axis=0)
    c0 = Zs[y == 0] - mu0
    c1 = Zs[y == 1] - mu1
    scatter = c0.T @ c0 + c1.T @ c1 + SCATTER_RIDGE * np.eye(len(feature_idx))
    try:
        w = np.linalg.solve(scatter, mu1 - mu0)
    except np.linalg.LinAlgError:
        raise DegenerateScatter("within-class scatter is singular despite ridge") from None
    b = float(w @ (mu0 + mu1) / 2.0)
    return FldMember(feature_idx=feature_idx, w=w, b=b)


def _grow_ensemble(Z, y, d_sub, rng):
    """Grow one candidate ensemble until its OOB error stabilizes.

    Returns (members, final OOB error, trace of (size, error) checkpoints).
    """
    n, p = Z.shape
    members: list[FldMember] = []
    vote_balance = np.zeros(n)    # +1 per OOB stego vote, -1 per cover vote
    seen_oob = np.zeros(n, dtype=bool)
    trace: list[tuple[int, float]] = []

    def oob_error() -> float:
        if not seen_oob.any():
            return 1.0
        pred = (vote_balance[seen_oob] > 0.0).astype(np.int64)
        return float(np.mean(pred != y[seen_oob]))

    prev = None
    while len(members) < MAX_LEARNERS:
        for _ in range(200):
            boot = rng.integers(0, n, size=n)
            if 0 < y[boot].sum() < n:   # bootstrap must contain both classes
                break
        else:
            raise SingleClass("could not draw a two-class bootstrap sample")
        feature_idx = np.sort(rng.choice(p, size=d_sub, replace=False))
        member = _fit_member(Z[boot], y[boot], feature_idx)
        members.append(member)

        oob = np.ones(n, dtype=bool)
        oob[boot] = False
        if oob.any():
            seen_oob |= oob
            vote_balance[oob] += 2 * member.votes(Z[oob]) - 1

        if len(members) % CHECK_EVERY == 0:
            err = oob_error()
            trace.append((len(members), err))
            if prev is not None:
                rel = abs(err - prev) / max(prev, 1e-12)
                if rel < STABLE_REL_CHANGE:
                    break
            prev = err
    return members, oob_error(), trace


def fld_ensemble_train(X: np.ndarray, y: np.ndarray, seed: int = 0,
                       set_id: str | None = None, meta: dict | None = None) -> FldEnsembleModel:
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    for k in (0, 1):
        if np.count_nonzero(y == k) < 10:
            raise SingleClass(f"class {k} needs at least 10 samples")
    std = Standardizer.fit(X)
    Z = std.transform(X)
    p = Z.shape[1]

    best = None
    oob_errors: dict[int, float] = {}
    for d_sub in subspace_ladder(p):
        rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(d_sub,)))
        members, err, trace = _grow_ensemble(Z, y, d_sub, rng)
        oob_errors[d_sub] = err
        if best is None or err < best[0]:
            best = (err, d_sub, members, trace)

    _, d_sub, members, trace = best
    return FldEnsembleModel(standardizer=std, members=members, d_sub=d_sub,
                            seed=seed, oob_errors=oob_errors, oob_trace=trace,
                            set_id=set_id, meta=dict(meta or {}))


def fld_ensemble_votes(model: FldEnsembleModel, X: np.ndarray) -> np.ndarray:
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    if X.shape[1] != model.n_features:
        raise DimensionMismatch(
            f"model has {model.n_features} features, input has {X.shape[1]}")
    Z = model.standardizer.transform(X)
    return np.sum([m.votes(Z) for m in model.members], axis=0)


def fld_ensemble_score(model: FldEnsembleModel, X: np.ndarray) -> np.ndarray:
    """Stego-vote fraction minus one half; exactly half the votes scores 0
    and classifies as cover."""
    return fld_ensemble_votes(model, X) / len(model.members) - 0.5


def fld_ensemble_predict(model: FldEnsembleModel, X: np.ndarray) -> np.ndarray:
    return (fld_ensemble_score(model, X) > 0.0).astype(np.int64)
