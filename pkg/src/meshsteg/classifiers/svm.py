"""Soft-margin SVM with a Gaussian RBF kernel, trained by sequential
minimal optimization (maximal-violating-pair working set selection), plus
the grid search used to pick (C, gamma).

The dual problem solved is
    min 0.5 sum_ij a_i a_j y_i y_j G(x_i, x_j) - sum_i a_i
    s.t. 0 <= a_i <= C,  sum_i a_i y_i = 0
with G(x, z) = exp(-gamma ||x - z||^2). The decision score for input x is
sum_i a_i y_i G(x_i, x) - b.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import DimensionMismatch, SingleClass
from .standardize import Standardizer

KKT_TOL = 1e-3
MAX_ITER = 100_000
_SV_EPS = 1e-9       # dual coefficients below this are dropped from the model


def rbf_kernel(A: np.ndarray, B: np.ndarray, gamma: float) -> np.ndarray:
    sq = (np.sum(A * A, axis=1)[:, None] + np.sum(B * B, axis=1)[None, :]
          - 2.0 * A @ B.T)
    return np.exp(-gamma * np.maximum(sq, 0.0))


@dataclass
class SvmModel:
    standardizer: Standardizer
    support_vectors: np.ndarray    # (s, p), standardized coordinates
    dual_coef: np.ndarray          # (s,) = alpha_i * y_i
    offset: float
    gamma: float
    C: float
    converged: bool
    n_iter: int
    set_id: str | None = None
    meta: dict = field(default_factory=dict)

    @property
    def n_features(self) -> int:
        return self.standardizer.n_features


def _smo(K: np.ndarray, y: np.ndarray, C: float,
         tol: float, max_iter: int) -> tuple[np.ndarray, float, bool, int]:
    """SMO with second-order working-set selection on a precomputed kernel.

    With F_i = sum_j a_j y_j K_ij - y_i, optimality holds when the maximal
    violation max_{I_low} F - min_{I_up} F drops below tol. The first pair
    element minimizes F over I_up; the second maximizes the second-order
    gain (F_t - F_i)^2 / (K_ii + K_tt - 2 K_it) over violating I_low members.
    """
    n = len(y)
    alpha = np.zeros(n)
    F = -y.astype(np.float64)
    Kd = np.diagonal(K).copy()
    it = 0
    converged = False
    snap = 1e-12 * max(1.0, C)   # pin near-boundary alphas onto the bounds

    def snapped(a):
        if a < snap:
            return 0.0
        if a > C - snap:
            return C
        return a

    while it < max_iter:
        up = ((y > 0) & (alpha < C)) | ((y < 0) & (alpha > 0))
        low = ((y > 0) & (alpha > 0)) | ((y < 0) & (alpha < C))
        if not up.any() or not low.any():
            converged = True
            break
        i = int(np.argmin(np.where(up, F, np.inf)))
        max_low = float(np.where(low, F, -np.inf).max())
        if max_low - F[i] <= tol:
            converged = True
            break
        violating = low & (F > F[i])
        b_vec = F - F[i]
        a_vec = np.maximum(Kd + Kd[i] - 2.0 * K[i], 1e-12)
        j = int(np.argmax(np.where(violating, b_vec * b_vec / a_vec, -np.inf)))

        # analytic two-variable subproblem on (i, j)
        s = y[i] * y[j]
        if s > 0:
            gamma_sum = alpha[i] + alpha[j]
            L = max(0.0, gamma_sum - C)
            H = min(C, gamma_sum)
        else:
            gamma_diff = alpha[i] - alpha[j]
            L = max(0.0, gamma_diff)
            H = min(C, C + gamma_diff)
        eta = K[i, i] + K[j, j] - 2.0 * K[i, j]
        old_ai, old_aj = alpha[i], alpha[j]
        if eta > 1e-15:
            ai = old_ai + y[i] * (F[j] - F[i]) / eta
            ai = min(max(ai, L), H)
        else:
            # flat direction: evaluate the dual objective change at both ends
            def gain(ai_new):
                d = ai_new - old_ai
                return d * y[i] * (F[i] - F[j]) + 0.5 * eta * d * d
            ai = L if gain(L) < gain(H) else H
        ai = snapped(ai)
        if abs(ai - old_ai) < 1e-14:
            # the maximal violating pair cannot move: stalled short of tol
            break
        aj = snapped(old_aj + s * (old_ai - ai))
        alpha[i], alpha[j] = ai, aj
        F += (ai - old_ai) * y[i] * K[i] + (aj - old_aj) * y[j] * K[j]
        it += 1

    interior = (alpha > _SV_EPS) & (alpha < C - _SV_EPS)
    if interior.any():
        b = float(F[interior].mean())
    else:
        up = ((y > 0) & (alpha < C)) | ((y < 0) & (alpha > 0))
        low = ((y > 0) & (alpha > 0)) | ((y < 0) & (alpha < C))
        hi = F[low].max() if low.any() else 0.0
        lo = F[up].min() if up.any() else 0.0
        b = float((hi + lo) / 2.0)
    return alpha, b, converged, it


def svm_train(X: np.ndarray, y: np.ndarray, C: float = 10.0,
              gamma: float = 2.0 ** -10, seed: int = 0, tol: float = KKT_TOL,
              max_iter: int = MAX_ITER, set_id: str | None = None,
              meta: dict | None = None) -> SvmModel:
    """Train on labels {0, 1} (mapped internally to -1/+1). The SMO solver
    is deterministic; `seed` is recorded in metadata only."""
    X = np.asarray(X, dtype=np.float64)
    y01 = np.asarray(y, dtype=np.int64)
    if not np.array_equal(np.unique(y01), [0, 1]):
        raise SingleClass(f"need labels {{0, 1}}, got {np.unique(y01)}")
    std = Standardizer.fit(X)
    Z = std.transform(X)
    ypm = np.where(y01 == 1, 1.0, -1.0)
    K = rbf_kernel(Z, Z, gamma)
    alpha, b, converged, n_iter = _smo(K, ypm, C, tol, max_iter)

    keep = alpha > _SV_EPS
    return SvmModel(standardizer=std, support_vectors=Z[keep],
                    dual_coef=alpha[keep] * ypm[keep], offset=b,
                    gamma=gamma, C=C, converged=converged, n_iter=n_iter,
                    set_id=set_id, meta=dict(meta or {}, seed=seed))


def svm_score(model: SvmModel, X: np.ndarray) -> np.ndarray:
    """Kernel expansion sum_i a_i y_i G(sv_i, x) - b; positive means stego."""
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    if X.shape[1] != model.n_features:
        raise DimensionMismatch(
            f"model has {model.n_features} features, input has {X.shape[1]}")
    Z = model.standardizer.transform(X)
    K = rbf_kernel(Z, model.support_vectors, model.gamma)
    return K @ model.dual_coef - model.offset


def svm_predict(model: SvmModel, X: np.ndarray) -> np.ndarray:
    return (svm_score(model, X) > 0.0).astype(np.int64)


@dataclass
class GridSearchResult:
    C: float
    gamma: float
    cv_error: float
    evaluated: dict      # (i, j) exponent pair -> CV error
    expansions: int


def _stratified_folds(y: np.ndarray, n_folds: int, rng: np.random.Generator):
    """Fold id per sample, balanced within each class."""
    fold = np.empty(len(y), dtype=np.int64)
    for k in np.unique(y):
        idx = np.nonzero(y == k)[0]
        perm = rng.permutation(len(idx))
        fold[idx[perm]] = np.arange(len(idx)) % n_folds
    return fold


def svm_grid_search(X: np.ndarray, y: np.ndarray, seed: int = 0,
                    n_folds: int = 5, tol: float = KKT_TOL,
                    max_iter: int = MAX_ITER,
                    max_expansions: int = 3) -> GridSearchResult:
    """5-fold cross-validated grid search over C = 10^i, i in 1..7 and
    gamma = 2^j, j in -12..-1. Ties prefer smaller C, then smaller gamma.
    A winner on the grid boundary extends the grid one step outward in that
    direction, up to `max_expansions` times."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    for k in (0, 1):
        if np.count_nonzero(y == k) < n_folds:
            raise SingleClass(f"class {k} needs at least {n_folds} samples")
    rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(77,)))
    fold = _stratified_folds(y, n_folds, rng)

    def cv_error(i: int, j: int) -> float:
        C, gamma = 10.0 ** i, 2.0 ** j
        errs = []
        for f in range(n_folds):
            train, val = fold != f, fold == f
            model = svm_train(X[train], y[train], C=C, gamma=gamma,
                              tol=tol, max_iter=max_iter)
            errs.append(float(np.mean(svm_predict(model, X[val]) != y[val])))
        return float(np.mean(errs))

    return run_grid(cv_error, max_expansions=max_expansions)


def expand_if_boundary(best: tuple[int, int], c_exps: list[int],
                       g_exps: list[int]) -> bool:
    """Grow the exponent ranges one step past any boundary the winner sits
    on; returns whether anything grew."""
    best_i, best_j = best
    grew = False
    if best_i == min(c_exps):
        c_exps.insert(0, best_i - 1)
        grew = True
    if best_i == max(c_exps):
        c_exps.append(best_i + 1)
        grew = True
    if best_j == min(g_exps):
        g_exps.insert(0, best_j - 1)
        grew = True
    if best_j == max(g_exps):
        g_exps.append(best_j + 1)
        grew = True
    return grew


def run_grid(error_fn, max_expansions: int = 3) -> GridSearchResult:
    """Drive the (C, gamma) exponent grid over a given error function."""
    c_exps = list(range(1, 8))
    g_exps = list(range(-12, 0))
    evaluated: dict[tuple[int, int], float] = {}
    expansions = 0
    while True:
        for i in c_exps:
            for j in g_exps:
                if (i, j) not in evaluated:
                    evaluated[(i, j)] = error_fn(i, j)
        best = min(evaluated, key=lambda ij: (evaluated[ij], ij[0], ij[1]))
        if expansions >= max_expansions:
            break
        if not expand_if_boundary(best, c_exps, g_exps):
            break
        expansions += 1
    return GridSearchResult(C=10.0 ** best[0], gamma=2.0 ** best[1],
                            cv_error=evaluated[best],
                            evaluated=evaluated, expansions=expansions)
