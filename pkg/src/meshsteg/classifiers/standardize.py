"""Per-dimension standardization fitted on training data.

Every classifier standardizes its inputs with statistics of its own
training set; dimensions that are constant in training (std below 1e-12)
map to zero so downstream scatter/kernel computations never divide by zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DimensionMismatch

STD_FLOOR = 1e-12


@dataclass(frozen=True)
class Standardizer:
    mean: np.ndarray
    std: np.ndarray

    @classmethod
    def fit(cls, X: np.ndarray) -> "Standardizer":
        X = np.asarray(X, dtype=np.float64)
        return cls(mean=X.mean(axis=0), std=X.std(axis=0))

    @property
    def n_features(self) -> int:
        return len(self.mean)

    def transform(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if X.shape[1] != self.n_features:
            raise DimensionMismatch(
                f"expected {self.n_features} features, got {X.shape[1]}")
        live = self.std >= STD_FLOOR
        out = np.zeros_like(X)
        out[:, live] = (X[:, live] - self.mean[live]) / self.std[live]
        return out
