"""Quadratic discriminant analysis with one Gaussian per class.

The discriminant is
    delta_k(x) = -0.5 log|Sigma_k| - 0.5 (x - mu_k)^T Sigma_k^-1 (x - mu_k)
                 + log pi_k
and the stego score is delta_1 - delta_0. Class covariances that are not
positive definite get an escalating trace-scaled ridge.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import DimensionMismatch, SingleClass, SingularCovariance
from .standardize import Standardizer

_RIDGE_START = 1e-6
_RIDGE_LIMIT = 1e-2


def _regularize(cov: np.ndarray, p: int) -> np.ndarray:
    """Smallest escalating ridge that makes the covariance Cholesky-factorable."""
    base = float(np.trace(cov)) / p
    if base <= 0.0:
        base = 1.0   # all-constant class: fall back to a unit-scale ridge
    tau = _RIDGE_START
    candidate = cov
    while True:
        try:
            np.linalg.cholesky(candidate)
            return candidate
        except np.linalg.LinAlgError:
            if tau > _RIDGE_LIMIT:
                raise SingularCovariance(
                    f"covariance not positive definite after ridge {tau / 10:g}") from None
            candidate = cov + tau * base * np.eye(p)
            tau *= 10.0


@dataclass
class QdaModel:
    standardizer: Standardizer
    means: np.ndarray      # (2, p)
    covariances: np.ndarray  # (2, p, p), after regularization
    priors: np.ndarray     # (2,)
    set_id: str | None = None
    meta: dict = field(default_factory=dict)
    _inv: np.ndarray | None = field(default=None, repr=False)
    _logdet: np.ndarray | None = field(default=None, repr=False)

    @property
    def n_features(self) -> int:
        return self.means.shape[1]

    def _caches(self):
        if self._inv is None:
            self._inv = np.stack([np.linalg.inv(c) for c in self.covariances])
            self._logdet = np.array([np.linalg.slogdet(c)[1] for c in self.covariances])
        return self._inv, self._logdet


def qda_train(X: np.ndarray, y: np.ndarray, set_id: str | None = None,
              meta: dict | None = None) -> QdaModel:
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y)
    classes = np.unique(y)
    if not np.array_equal(classes, [0, 1]):
        raise SingleClass(f"need labels {{0, 1}}, got {classes}")
    std = Standardizer.fit(X)
    Z = std.transform(X)
    p = Z.shape[1]
    means, covs, priors = [], [], []
    for k in (0, 1):
        Zk = Z[y == k]
        if len(Zk) < 2:
            raise SingleClass(f"class {k} needs at least 2 samples, got {len(Zk)}")
        mu = Zk.mean(axis=0)
        centered = Zk - mu
        cov = centered.T @ centered / len(Zk)
        means.append(mu)
        covs.append(_regularize(cov, p))
        priors.append(len(Zk) / len(Z))
    return QdaModel(standardizer=std, means=np.stack(means),
                    covariances=np.stack(covs), priors=np.asarray(priors),
                    set_id=set_id, meta=dict(meta or {}))


def qda_score(model: QdaModel, X: np.ndarray) -> np.ndarray:
    """delta_1(x) - delta_0(x); positive means stego."""
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    if X.shape[1] != model.n_features:
        raise DimensionMismatch(
            f"model has {model.n_features} features, input has {X.shape[1]}")
    Z = model.standardizer.transform(X)
    inv, logdet = model._caches()
    deltas = []
    for k in (0, 1):
        d = Z - model.means[k]
        maha = np.einsum("ij,jk,ik->i", d, inv[k], d)
        deltas.append(-0.5 * logdet[k] - 0.5 * maha + np.log(model.priors[k]))
    return deltas[1] - deltas[0]


def qda_predict(model: QdaModel, X: np.ndarray) -> np.ndarray:
    return (qda_score(model, X) > 0.0).astype(np.int64)
