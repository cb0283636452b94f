"""Meshes, I/O, normalization, and calibration by Laplacian smoothing.

Run:  python demos/01_meshes_and_calibration.py
"""

import os
import tempfile

import numpy as np

from meshsteg import (SmoothingParams, laplacian_coords, laplacian_smooth,
                      load_mesh, normalize, save_off)
from meshsteg.synthetic import noisy_sphere, tetrahedron, torus

print("== build a few synthetic meshes ==")
tetra = tetrahedron()
sphere = noisy_sphere(3, noise=0.05, rng=np.random.default_rng(1))
donut = torus(30, 20)
for name, mesh in [("tetrahedron", tetra), ("noisy sphere", sphere), ("torus", donut)]:
    conn = mesh.connectivity
    print(f"{name:13s} |V|={mesh.n_vertices:5d} |F|={mesh.n_faces:5d} "
          f"|E|={mesh.n_edges:5d} boundary={int(conn.boundary_mask.sum())}")

print("\n== OFF round trip ==")
with tempfile.TemporaryDirectory() as tmp:
    path = os.path.join(tmp, "sphere.off")
    save_off(sphere, path)
    back = load_mesh(path)
    print(f"wrote and reloaded {path}: max vertex error "
          f"{np.abs(back.vertices - sphere.vertices).max():.2e}")

print("\n== normalization ==")
norm = normalize(sphere)
extent = norm.vertices.max(axis=0) - norm.vertices.min(axis=0)
print(f"bounding box after normalize: {extent.round(6)} (longest side is 1)")
print(f"centroid: {norm.vertices.mean(axis=0).round(12)}")

print("\n== calibration: 3 iterations of Laplacian smoothing at weight 0.3 ==")
smoothed = laplacian_smooth(norm, SmoothingParams(iterations=3, weight=0.3))
moved = np.linalg.norm(smoothed.vertices - norm.vertices, axis=1)
print(f"vertex displacement: mean {moved.mean():.5f}, max {moved.max():.5f}")

energy_before = float(np.sum(laplacian_coords(norm) ** 2))
energy_after = float(np.sum(laplacian_coords(smoothed) ** 2))
print(f"Laplacian energy: {energy_before:.6f} -> {energy_after:.6f} "
      f"({energy_after / energy_before:.1%} of original)")

print("\nThe smoothed mesh is the calibration reference: a stego mesh moves "
      "further under smoothing\nthan its cover, and that asymmetry is what "
      "the local features measure.")
