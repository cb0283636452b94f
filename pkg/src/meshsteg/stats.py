"""Moment statistics of the raw feature arrays and the named feature sets.

Every raw array is log-transformed (with a small epsilon floor, since
unchanged elements produce exact zeros) and summarized by its first four
population moments. Feature sets are fixed index groups over phi[1..19];
their layout is phi index ascending, four moments per phi, so the 76-dim
vector literally contains the 40-dim baseline as its prefix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyArray, MissingFeature
from .features import LocalFeatures

DEFAULT_LOG_EPS = 1e-12
_VAR_FLOOR = 1e-24   # below this the distribution is treated as a point mass

MOMENT_NAMES = ("mean", "variance", "skewness", "kurtosis")

# feature-set id -> phi indices, in vector order
FEATURE_SETS: dict[str, tuple[int, ...]] = {
    "yang40": tuple(range(1, 11)),
    "yang40+vnf4": tuple(range(1, 12)),
    "yang40+cf8": tuple(range(1, 11)) + (12, 13),
    "lfs52": tuple(range(1, 14)),
    "scf24": tuple(range(14, 20)),
    "lfs76": tuple(range(1, 20)),
}

COVER, STEGO = 0, 1


def set_dimension(set_id: str) -> int:
    return 4 * len(FEATURE_SETS[set_id])


def set_columns(set_id: str) -> np.ndarray:
    """Column indices of a feature set inside the full 76-dim layout."""
    cols = []
    for k in FEATURE_SETS[set_id]:
        cols.extend(range(4 * (k - 1), 4 * k))
    return np.asarray(cols, dtype=np.int64)


@dataclass(frozen=True)
class MomentQuad:
    """Mean, population variance, skewness and non-excess kurtosis."""

    mean: float
    variance: float
    skewness: float
    kurtosis: float

    def as_array(self) -> np.ndarray:
        return np.array([self.mean, self.variance, self.skewness, self.kurtosis])


@dataclass(frozen=True)
class FeatureVector:
    """Fixed-length statistic vector for one mesh, tagged with its set id
    and (optionally) the cover/stego label."""

    values: np.ndarray
    set_id: str
    label: int | None = None

    def __post_init__(self):
        expected = set_dimension(self.set_id)
        if len(self.values) != expected:
            raise ValueError(f"{self.set_id} expects {expected} values, got {len(self.values)}")


def log_moments(raw: np.ndarray, epsilon: float = DEFAULT_LOG_EPS) -> MomentQuad:
    """Four population moments of ln(raw + epsilon).

    Skewness m3/m2^1.5 and kurtosis m4/m2^2 are set to zero when the
    variance is (numerically) zero, so constant arrays yield a well-defined
    quad instead of 0/0.
    """
    raw = np.asarray(raw, dtype=np.float64)
    if raw.size == 0:
        raise EmptyArray("cannot take moments of an empty feature array")
    if raw.min() < 0.0:
        raise ValueError("raw feature arrays are non-negative by construction")
    x = np.log(raw + epsilon)
    mean = float(x.mean())
    centered = x - mean
    m2 = float(np.mean(centered ** 2))
    if m2 < _VAR_FLOOR:
        return MomentQuad(mean, m2, 0.0, 0.0)
    m3 = float(np.mean(centered ** 3))
    m4 = float(np.mean(centered ** 4))
    return MomentQuad(mean, m2, m3 / m2 ** 1.5, m4 / m2 ** 2)


def assemble(features: LocalFeatures, set_id: str,
             epsilon: float = DEFAULT_LOG_EPS, label: int | None = None) -> FeatureVector:
    """Build the statistic vector of a named feature set from raw arrays."""
    if set_id not in FEATURE_SETS:
        raise MissingFeature(f"unknown feature set {set_id!r}; "
                             f"known: {sorted(FEATURE_SETS)}")
    indices = FEATURE_SETS[set_id]
    features.require(indices)
    values = np.empty(4 * len(indices))
    for slot, k in enumerate(indices):
        values[4 * slot:4 * slot + 4] = log_moments(features.phi[k], epsilon).as_array()
    return FeatureVector(values=values, set_id=set_id, label=label)


def feature_matrix(vectors) -> tuple[np.ndarray, np.ndarray]:
    """Stack FeatureVectors into (X, y); unlabeled rows get label -1."""
    X = np.stack([fv.values for fv in vectors])
    y = np.array([fv.label if fv.label is not None else -1 for fv in vectors], dtype=np.int64)
    return X, y


def write_feature_csv(path, X: np.ndarray, y: np.ndarray) -> None:
    """Feature matrix CSV: header 'label,f000,...', one row per mesh.

    Floats are written with repr() so a read-back reproduces them bit for
    bit. Cover/stego pairs are expected to occupy adjacent rows (cover first)
    in mesh-id order; readers rely on that alignment.
    """
    X = np.asarray(X, dtype=np.float64)
    header = "label," + ",".join(f"f{i:03d}" for i in range(X.shape[1]))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(header + "\n")
        for label, row in zip(y, X):
            fh.write(str(int(label)) + "," + ",".join(repr(float(v)) for v in row) + "\n")


def read_feature_csv(path) -> tuple[np.ndarray, np.ndarray]:
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        if not header or header[0] != "label":
            raise ValueError(f"{path}: not a feature CSV (header must start with 'label')")
        width = len(header) - 1
        labels, rows = [], []
        for lineno, line in enumerate(fh, start=2):
            parts = line.strip().split(",")
            if len(parts) != width + 1:
                raise ValueError(f"{path}:{lineno}: expected {width + 1} fields")
            labels.append(int(parts[0]))
            rows.append([float(p) for p in parts[1:]])
    if not rows:
        return np.empty((0, width)), np.empty(0, dtype=np.int64)
    return np.asarray(rows), np.asarray(labels, dtype=np.int64)
