import numpy as np
import pytest

from meshsteg import normalize, random_payload, yang_capacity
from meshsteg.embedders import (EmbedParams, chao_capacity, chao_layer_decode,
                                chao_layer_embed, cho_mean_decode,
                                cho_mean_embed, embed, payload_digest,
                                yang_hist_decode, yang_hist_embed)
from meshsteg.errors import CapacityExceeded, DegenerateAxis
from meshsteg.synthetic import icosphere, noisy_sphere


@pytest.fixture
def cover(rng):
    return normalize(noisy_sphere(3, noise=0.03, rng=rng))


@pytest.fixture
def radial_blob(rng):
    """Cover with a broad, near-uniform radial histogram."""
    base = icosphere(4)
    radii = rng.permutation(np.linspace(0.5, 1.5, base.n_vertices))
    return normalize(base.with_vertices(base.vertices * radii[:, None]))


@pytest.fixture
def elongated(rng):
    """Cover with an unambiguous principal axis."""
    base = noisy_sphere(3, noise=0.03, rng=rng)
    return normalize(base.with_vertices(base.vertices * np.array([3.0, 1.0, 0.7])))


def radial_range(mesh):
    return np.linalg.norm(mesh.vertices, axis=1)


# ---------------------------------------------------------------------------
# radial-mean embedder

def test_cho_empty_payload_is_identity(cover):
    result = cho_mean_embed(cover, np.empty(0, dtype=np.uint8))
    assert np.array_equal(result.mesh.vertices, cover.vertices)


def test_cho_round_trip_64_bits(cover):
    payload = random_payload(64, seed=7)
    result = cho_mean_embed(cover, payload, alpha=0.04)
    assert result.failed_bits == []
    assert np.array_equal(cho_mean_decode(result.mesh, 64), payload)


def test_cho_bin_means_clear_margin(cover):
    from meshsteg.embedders import _equal_count_bins
    payload = random_payload(64, seed=3)
    result = cho_mean_embed(cover, payload, alpha=0.04)
    r = radial_range(result.mesh)
    for bit, chunk in zip(payload, _equal_count_bins(r, 64)):
        radii = r[chunk]
        rho = (radii - radii.min()) / (radii.max() - radii.min())
        if bit:
            assert rho.mean() > 0.5 + 0.04
        else:
            assert rho.mean() < 0.5 - 0.04


def test_cho_displacement_bounded_by_bin_width(cover):
    from meshsteg.embedders import _equal_count_bins
    payload = random_payload(64, seed=5)
    result = cho_mean_embed(cover, payload)
    r0, r1 = radial_range(cover), radial_range(result.mesh)
    for chunk in _equal_count_bins(r0, 64):
        width = r0[chunk].max() - r0[chunk].min()
        assert np.abs(r1[chunk] - r0[chunk]).max() <= width + 1e-15


def test_cho_topology_and_determinism(cover):
    payload = random_payload(32, seed=1)
    a = cho_mean_embed(cover, payload)
    b = cho_mean_embed(cover, payload)
    assert a.mesh.same_topology(cover)
    assert np.array_equal(a.mesh.vertices, b.mesh.vertices)


def test_cho_capacity(cover):
    with pytest.raises(CapacityExceeded):
        cho_mean_embed(cover, np.zeros(cover.n_vertices + 1, dtype=np.uint8))


# ---------------------------------------------------------------------------
# radial-histogram embedder

def test_yang_capacity_formula():
    assert yang_capacity(32) == 15
    assert yang_capacity(64) == 31
    assert yang_capacity(96) == 47
    assert yang_capacity(128) == 63


def test_yang_capacity_enforced(radial_blob):
    with pytest.raises(CapacityExceeded):
        yang_hist_embed(radial_blob, np.zeros(16, dtype=np.uint8), n_bins=32)


def test_yang_empty_payload_is_identity(radial_blob):
    result = yang_hist_embed(radial_blob, np.empty(0, dtype=np.uint8))
    assert np.array_equal(result.mesh.vertices, radial_blob.vertices)


@pytest.mark.parametrize("n_bins", [32, 128])
def test_yang_round_trip(radial_blob, n_bins):
    capacity = yang_capacity(n_bins)
    payload = random_payload(capacity, seed=11)
    result = yang_hist_embed(radial_blob, payload, n_bins=n_bins, n_thr=20)
    assert result.failed_bits == []
    assert np.array_equal(yang_hist_decode(result.mesh, n_bins, capacity), payload)
    assert result.mesh.same_topology(radial_blob)


def test_yang_displacement_bound(radial_blob):
    n_bins = 64
    payload = random_payload(yang_capacity(n_bins), seed=2)
    result = yang_hist_embed(radial_blob, payload, n_bins=n_bins)
    r0, r1 = radial_range(radial_blob), radial_range(result.mesh)
    width = (r0.max() - r0.min()) / n_bins
    assert np.abs(r1 - r0).max() <= 2.0 * width


def test_yang_histogram_extremes_preserved(radial_blob):
    payload = random_payload(63, seed=9)
    result = yang_hist_embed(radial_blob, payload, n_bins=128)
    r0, r1 = radial_range(radial_blob), radial_range(result.mesh)
    assert r0.min() == r1.min() and r0.max() == r1.max()


def test_yang_infeasible_bits_reported(rng):
    # nearly all radii identical: one fat bin, the rest nearly empty
    base = icosphere(2)
    r = np.ones(base.n_vertices)
    r[:3] = [0.5, 0.75, 1.25]
    mesh = normalize(base.with_vertices(base.vertices * r[:, None]))
    result = yang_hist_embed(mesh, random_payload(15, seed=1), n_bins=32, n_thr=20)
    assert len(result.failed_bits) > 0


# ---------------------------------------------------------------------------
# principal-axis embedder

@pytest.mark.parametrize("layers", [1, 2, 3])
def test_chao_round_trip(elongated, layers):
    payload = random_payload(chao_capacity(elongated.n_vertices, layers), seed=13)
    result = chao_layer_embed(elongated, payload, layers=layers, intervals=10000)
    assert result.failed_bits == []
    decoded = chao_layer_decode(result.mesh, layers, 10000, len(payload))
    assert np.array_equal(decoded, payload)
    assert result.mesh.same_topology(elongated)


def test_chao_partial_payload(elongated):
    payload = random_payload(100, seed=3)
    result = chao_layer_embed(elongated, payload, layers=2, intervals=10000)
    assert np.array_equal(chao_layer_decode(result.mesh, 2, 10000, 100), payload)


def test_chao_capacity_enforced(elongated):
    n = elongated.n_vertices
    assert chao_capacity(n, 10) == (n - 3) * 10
    with pytest.raises(CapacityExceeded):
        chao_layer_embed(elongated, np.zeros((n - 3) * 2 + 1, dtype=np.uint8), layers=2)


def test_chao_displacement_bounded_by_slot(elongated):
    from meshsteg.embedders import _principal_frame
    axis, refs, proj = _principal_frame(elongated)
    span = proj[refs[1]] - proj[refs[0]]
    payload = random_payload(chao_capacity(elongated.n_vertices, 3), seed=21)
    result = chao_layer_embed(elongated, payload, layers=3, intervals=10000)
    disp = np.linalg.norm(result.mesh.vertices - elongated.vertices, axis=1)
    assert disp.max() <= span / 10000 + 1e-12


def test_chao_references_untouched(elongated):
    from meshsteg.embedders import _principal_frame
    _, refs, _ = _principal_frame(elongated)
    payload = random_payload(500, seed=4)
    result = chao_layer_embed(elongated, payload, layers=1)
    for vid in refs:
        assert np.array_equal(result.mesh.vertices[vid], elongated.vertices[vid])


def test_chao_degenerate_axis():
    from meshsteg.mesh import TriMesh
    mesh = TriMesh(np.zeros((8, 3)), np.array([[0, 1, 2]]))   # coincident cloud
    with pytest.raises(DegenerateAxis):
        chao_layer_embed(mesh, np.zeros(2, dtype=np.uint8), layers=1)


def test_chao_symmetric_shape_has_ambiguous_axis():
    with pytest.raises(DegenerateAxis):
        chao_layer_embed(icosphere(2), np.zeros(4, dtype=np.uint8), layers=1)


# ---------------------------------------------------------------------------
# shared surface

def test_embed_dispatch_and_payload_hash(cover):
    params = EmbedParams(variant="cho_mean", n_bits=16, rng_seed=42)
    result, payload = embed(cover, params)
    assert len(payload) == 16
    assert np.array_equal(cho_mean_decode(result.mesh, 16), payload)
    assert len(payload_digest(payload)) == 16
    assert payload_digest(payload) == payload_digest(payload.copy())


def test_embed_params_validation():
    with pytest.raises(ValueError):
        EmbedParams(variant="nonsense")


def test_random_payload_seeded():
    assert np.array_equal(random_payload(64, 5), random_payload(64, 5))
    assert not np.array_equal(random_payload(64, 5), random_payload(64, 6))
