import numpy as np
import pytest

from meshsteg import SmoothingParams, laplacian_coords, laplacian_smooth, normalize
from meshsteg.mesh import TriMesh
from meshsteg.synthetic import noisy_sphere, tetrahedron


def test_defaults_match_experiment_protocol():
    params = SmoothingParams()
    assert params.iterations == 3
    assert params.weight == 0.3


def test_weight_zero_is_identity(small_cover):
    out = laplacian_smooth(small_cover, SmoothingParams(iterations=5, weight=0.0))
    assert np.array_equal(out.vertices, small_cover.vertices)


def test_tetrahedron_single_iteration_closed_form(unit_tetra):
    # each vertex's ring mean is the centroid of the other three vertices
    out = laplacian_smooth(unit_tetra, SmoothingParams(iterations=1, weight=0.3))
    v = unit_tetra.vertices
    ring_mean = (v.sum(axis=0) - v) / 3.0
    expected = v + 0.3 * (ring_mean - v)
    assert np.abs(out.vertices - expected).max() < 1e-15


def test_topology_unchanged(small_cover):
    out = laplacian_smooth(small_cover)
    assert out.same_topology(small_cover)
    assert out.n_edges == small_cover.n_edges


def test_one_iteration_equals_coordinate_update(small_cover):
    delta = laplacian_coords(small_cover)
    out = laplacian_smooth(small_cover, SmoothingParams(iterations=1, weight=0.3))
    expected = small_cover.vertices - 0.3 * delta
    assert np.abs(out.vertices - expected).max() < 1e-12


def test_curvature_energy_decreases(rng):
    mesh = normalize(noisy_sphere(3, noise=0.08, rng=rng))

    def energy(m):
        return float(np.sum(laplacian_coords(m) ** 2))

    smoothed = laplacian_smooth(mesh, SmoothingParams(iterations=3, weight=0.3))
    assert energy(smoothed) < energy(mesh)


def test_laplacian_coords_hexagon_fan_center():
    angles = np.linspace(0.0, 2.0 * np.pi, 7)[:-1]
    ring = np.stack([np.cos(angles), np.sin(angles), np.zeros(6)], axis=1)
    verts = np.vstack([[0.0, 0.0, 0.0], ring])
    faces = np.array([[0, 1 + i, 1 + (i + 1) % 6] for i in range(6)])
    delta = laplacian_coords(TriMesh(verts, faces))
    assert np.abs(delta[0]).max() < 1e-15


def test_laplacian_coords_apex():
    verts = np.array([[0, 0, 1], [1, 0, 0], [-0.5, 0.8, 0], [-0.5, -0.8, 0]],
                     dtype=float)
    verts[1:] -= verts[1:].mean(axis=0)   # base centroid exactly at origin
    faces = np.array([[0, 1, 2], [0, 2, 3], [0, 3, 1]])
    delta = laplacian_coords(TriMesh(verts, faces))
    assert np.allclose(delta[0], [0.0, 0.0, 1.0], atol=1e-15)


def test_laplacian_coords_matches_bruteforce(small_cover):
    delta = laplacian_coords(small_cover)
    conn = small_cover.connectivity
    v = small_cover.vertices
    for i in [0, 17, 101, 640]:
        ring = conn.ring_indices[conn.ring_offsets[i]:conn.ring_offsets[i + 1]]
        expected = v[i] - v[ring].mean(axis=0)
        assert np.abs(delta[i] - expected).max() < 1e-12


def test_isolated_vertex_left_in_place():
    verts = np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0], [5, 5, 5]], dtype=float)
    mesh = TriMesh(verts, np.array([[0, 1, 2]]))
    out = laplacian_smooth(mesh, SmoothingParams(iterations=2, weight=0.5))
    assert np.array_equal(out.vertices[3], verts[3])
    assert np.abs(laplacian_coords(mesh)[3]).max() == 0.0


def test_invalid_params():
    with pytest.raises(ValueError):
        SmoothingParams(iterations=-1)
    with pytest.raises(ValueError):
        SmoothingParams(weight=1.5)
