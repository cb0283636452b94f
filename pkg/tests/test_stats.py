import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from meshsteg import (SmoothingParams, assemble, extract_local_features,
                      laplacian_smooth, log_moments, read_feature_csv,
                      set_columns, set_dimension, write_feature_csv)
from meshsteg.errors import EmptyArray, MissingFeature
from meshsteg.features import LocalFeatures
from meshsteg.stats import FEATURE_SETS, FeatureVector, MomentQuad


def brute_force_log_moments(raw, epsilon=1e-12):
    """Independent oracle: plain python sums over ln(raw + eps)."""
    x = [math.log(v + epsilon) for v in raw]
    n = len(x)
    mean = sum(x) / n
    m2 = sum((v - mean) ** 2 for v in x) / n
    m3 = sum((v - mean) ** 3 for v in x) / n
    m4 = sum((v - mean) ** 4 for v in x) / n
    if m2 < 1e-24:
        return mean, m2, 0.0, 0.0
    return mean, m2, m3 / m2 ** 1.5, m4 / m2 ** 2


def test_all_ones_degenerate_convention():
    quad = log_moments(np.ones(10))
    assert quad.mean == pytest.approx(0.0, abs=1e-9)
    assert quad.variance == pytest.approx(0.0, abs=1e-24)
    assert quad.skewness == 0.0
    assert quad.kurtosis == 0.0


def test_two_point_symmetric_distribution():
    quad = log_moments(np.array([math.e, math.e, math.e ** 3, math.e ** 3]),
                       epsilon=0.0)
    assert quad.mean == pytest.approx(2.0, abs=1e-12)
    assert quad.variance == pytest.approx(1.0, abs=1e-12)
    assert quad.skewness == pytest.approx(0.0, abs=1e-12)
    assert quad.kurtosis == pytest.approx(1.0, abs=1e-12)


def test_matches_brute_force_oracle(rng):
    for _ in range(200):
        raw = rng.exponential(scale=rng.uniform(1e-9, 10.0),
                              size=rng.integers(2, 200))
        quad = log_moments(raw)
        expected = brute_force_log_moments(raw.tolist())
        assert quad.as_array() == pytest.approx(expected, abs=1e-10)


def test_empty_array_rejected():
    with pytest.raises(EmptyArray):
        log_moments(np.empty(0))


def test_negative_input_rejected():
    with pytest.raises(ValueError):
        log_moments(np.array([1.0, -0.5]))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(min_value=0.0, max_value=1e6, allow_nan=False),
                min_size=1, max_size=60),
       st.randoms(use_true_random=False))
def test_moments_permutation_invariant(values, random):
    raw = list(values)
    shuffled = list(values)
    random.shuffle(shuffled)
    a = log_moments(np.asarray(raw)).as_array()
    b = log_moments(np.asarray(shuffled)).as_array()
    assert a == pytest.approx(b, rel=1e-9, abs=1e-9)


# ---------------------------------------------------------------------------
# feature-set assembly

@pytest.fixture
def local_feats(small_cover):
    smooth = laplacian_smooth(small_cover, SmoothingParams())
    return extract_local_features(small_cover, smooth)


@pytest.mark.parametrize("set_id,dim", [("yang40", 40), ("yang40+vnf4", 44),
                                        ("yang40+cf8", 48), ("lfs52", 52),
                                        ("scf24", 24), ("lfs76", 76)])
def test_set_dimensions(set_id, dim, local_feats):
    assert set_dimension(set_id) == dim
    fv = assemble(local_feats, set_id)
    assert len(fv.values) == dim
    assert fv.set_id == set_id


def test_lfs76_contains_subsets_exactly(local_feats):
    full = assemble(local_feats, "lfs76").values
    assert np.array_equal(assemble(local_feats, "yang40").values, full[:40])
    assert np.array_equal(assemble(local_feats, "lfs52").values, full[:52])
    assert np.array_equal(assemble(local_feats, "scf24").values, full[52:])
    for set_id in FEATURE_SETS:
        sliced = full[set_columns(set_id)]
        assert np.array_equal(assemble(local_feats, set_id).values, sliced)


def test_ordering_is_phi_major_moment_minor(local_feats):
    full = assemble(local_feats, "lfs76").values
    quad = log_moments(local_feats.phi[9]).as_array()
    assert np.array_equal(full[32:36], quad)   # phi9 occupies slots 8*4..8*4+3


def test_self_calibrated_vector_is_constant(small_cover):
    feats = extract_local_features(small_cover, small_cover)
    fv = assemble(feats, "lfs76")
    expected = np.tile([np.log(1e-12), 0.0, 0.0, 0.0], 19)
    assert fv.values == pytest.approx(expected, abs=1e-9)


def test_missing_feature_raises():
    feats = LocalFeatures(phi={1: np.ones(3)})
    with pytest.raises(MissingFeature):
        assemble(feats, "yang40")
    with pytest.raises(MissingFeature):
        assemble(feats, "nosuchset")


def test_feature_vector_dimension_checked():
    with pytest.raises(ValueError):
        FeatureVector(values=np.zeros(10), set_id="yang40")


def test_moment_quad_array():
    q = MomentQuad(1.0, 2.0, 3.0, 4.0)
    assert np.array_equal(q.as_array(), [1.0, 2.0, 3.0, 4.0])


# ---------------------------------------------------------------------------
# CSV round trip

def test_feature_csv_round_trip(tmp_path, rng):
    X = rng.standard_normal((6, 76))
    y = np.array([0, 1, 0, 1, 0, 1])
    path = tmp_path / "features.csv"
    write_feature_csv(path, X, y)
    header = path.read_text().splitlines()[0]
    assert header.startswith("label,f000,") and header.endswith(",f075")
    X2, y2 = read_feature_csv(path)
    assert np.array_equal(X, X2)   # repr round trip is exact
    assert np.array_equal(y, y2)


def test_feature_csv_rejects_garbage(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("a,b,c\n1,2,3\n")
    with pytest.raises(ValueError):
        read_feature_csv(path)
