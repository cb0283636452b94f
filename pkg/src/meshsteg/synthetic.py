"""Synthetic test meshes: icospheres, tori, noised grids, and randomized
cover corpora. Used by the demos and the verification suite; real corpora
are loaded from OFF/OBJ files instead.
"""

from __future__ import annotations

import numpy as np

from .mesh import TriMesh, normalize


def tetrahedron() -> TriMesh:
    """Regular tetrahedron with outward-wound faces."""
    v = np.array([[1.0, 1.0, 1.0],
                  [1.0, -1.0, -1.0],
                  [-1.0, 1.0, -1.0],
                  [-1.0, -1.0, 1.0]]) / np.sqrt(3.0)
    f = np.array([[0, 1, 2], [0, 3, 1], [0, 2, 3], [1, 3, 2]])
    return TriMesh(v, f)


def icosahedron() -> TriMesh:
    phi = (1.0 + np.sqrt(5.0)) / 2.0
    v = np.array([
        [-1, phi, 0], [1, phi, 0], [-1, -phi, 0], [1, -phi, 0],
        [0, -1, phi], [0, 1, phi], [0, -1, -phi], [0, 1, -phi],
        [phi, 0, -1], [phi, 0, 1], [-phi, 0, -1], [-phi, 0, 1],
    ], dtype=np.float64)
    v /= np.linalg.norm(v, axis=1)[:, None]
    f = np.array([
        [0, 11, 5], [0, 5, 1], [0, 1, 7], [0, 7, 10], [0, 10, 11],
        [1, 5, 9], [5, 11, 4], [11, 10, 2], [10, 7, 6], [7, 1, 8],
        [3, 9, 4], [3, 4, 2], [3, 2, 6], [3, 6, 8], [3, 8, 9],
        [4, 9, 5], [2, 4, 11], [6, 2, 10], [8, 6, 7], [9, 8, 1],
    ])
    return TriMesh(v, f)


def icosphere(subdivisions: int = 3, radius: float = 1.0) -> TriMesh:
    """Icosahedron subdivided `subdivisions` times, projected to the sphere.
    Vertex counts: 12, 42, 162, 642, 2562, ..."""
    mesh = icosahedron()
    verts = list(map(tuple, mesh.vertices))
    faces = mesh.faces
    for _ in range(subdivisions):
        midpoint_cache: dict[tuple[int, int], int] = {}
        new_faces = []

        def midpoint(i, j):
            key = (i, j) if i < j else (j, i)
            if key not in midpoint_cache:
                p = np.asarray(verts[i]) + np.asarray(verts[j])
                p /= np.linalg.norm(p)
                midpoint_cache[key] = len(verts)
                verts.append(tuple(p))
            return midpoint_cache[key]

        for a, b, c in faces:
            ab, bc, ca = midpoint(a, b), midpoint(b, c), midpoint(c, a)
            new_faces += [(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)]
        faces = np.asarray(new_faces)
    v = np.asarray(verts)
    v = radius * v / np.linalg.norm(v, axis=1)[:, None]
    return TriMesh(v, faces)


def noisy_sphere(subdivisions: int = 3, noise: float = 0.02,
                 rng: np.random.Generator | None = None) -> TriMesh:
    """Icosphere with radial noise, a stand-in for an organic closed shape."""
    rng = rng or np.random.default_rng(0)
    base = icosphere(subdivisions)
    r = 1.0 + noise * rng.standard_normal(base.n_vertices)
    return base.with_vertices(base.vertices * r[:, None])


def bumpy_sphere(subdivisions: int = 3, amplitude: float = 0.04,
                 n_waves: int = 6, rng: np.random.Generator | None = None) -> TriMesh:
    """Smooth organic-looking blob: an icosphere with random directional
    radial undulations. The surface is smooth (wavelengths span several
    edges) but the radius field varies at edge scale, like scanned shapes."""
    rng = rng or np.random.default_rng(0)
    base = icosphere(subdivisions)
    unit = base.vertices
    r = np.ones(base.n_vertices)
    for _ in range(n_waves):
        direction = rng.standard_normal(3)
        direction /= np.linalg.norm(direction)
        freq = rng.uniform(4.0, 12.0)
        phase = rng.uniform(0.0, 2.0 * np.pi)
        r += (amplitude / n_waves) * np.cos(freq * (unit @ direction) + phase)
    return base.with_vertices(unit * r[:, None])


def torus(n_major: int = 24, n_minor: int = 16,
          major_radius: float = 1.0, minor_radius: float = 0.4) -> TriMesh:
    """Closed torus triangulated on an n_major x n_minor grid."""
    u = 2.0 * np.pi * np.arange(n_major) / n_major
    w = 2.0 * np.pi * np.arange(n_minor) / n_minor
    uu, ww = np.meshgrid(u, w, indexing="ij")
    x = (major_radius + minor_radius * np.cos(ww)) * np.cos(uu)
    y = (major_radius + minor_radius * np.cos(ww)) * np.sin(uu)
    z = minor_radius * np.sin(ww)
    v = np.stack([x.ravel(), y.ravel(), z.ravel()], axis=1)

    def vid(i, j):
        return (i % n_major) * n_minor + (j % n_minor)

    faces = []
    for i in range(n_major):
        for j in range(n_minor):
            faces.append((vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)))
            faces.append((vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)))
    return TriMesh(v, np.asarray(faces))


def noised_grid(nx: int = 25, ny: int = 25, noise: float = 0.05,
                rng: np.random.Generator | None = None) -> TriMesh:
    """Open rectangular height-field patch with Gaussian z noise."""
    rng = rng or np.random.default_rng(0)
    xs = np.linspace(-0.5, 0.5, nx)
    ys = np.linspace(-0.5, 0.5, ny)
    xx, yy = np.meshgrid(xs, ys, indexing="ij")
    zz = noise * rng.standard_normal((nx, ny))
    v = np.stack([xx.ravel(), yy.ravel(), zz.ravel()], axis=1)
    faces = []
    for i in range(nx - 1):
        for j in range(ny - 1):
            a = i * ny + j
            b = (i + 1) * ny + j
            faces.append((a, b, b + 1))
            faces.append((a, b + 1, a + 1))
    return TriMesh(v, np.asarray(faces))


def random_rotation(rng: np.random.Generator) -> np.ndarray:
    """Uniform random rotation matrix (QR of a Gaussian, det fixed to +1)."""
    q, r = np.linalg.qr(rng.standard_normal((3, 3)))
    q *= np.sign(np.diagonal(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def random_cover(rng: np.random.Generator, kind: str | None = None) -> TriMesh:
    """One normalized random cover mesh: a noisy sphere, torus, or grid with
    randomized shape parameters, in a random orientation. Sizes fall in the
    450..2600 vertex range."""
    kind = kind or rng.choice(["sphere", "torus", "grid"])
    if kind == "sphere":
        sub = int(rng.integers(3, 5))          # 642 or 2562 vertices
        mesh = noisy_sphere(sub, noise=float(rng.uniform(0.01, 0.05)), rng=rng)
        stretch = rng.uniform(0.6, 1.0, size=3)
        mesh = mesh.with_vertices(mesh.vertices * stretch)
    elif kind == "torus":
        n_major = int(rng.integers(26, 46))
        n_minor = int(rng.integers(18, 34))
        mesh = torus(n_major, n_minor, 1.0, float(rng.uniform(0.25, 0.5)))
        jitter = float(rng.uniform(0.002, 0.01))
        mesh = mesh.with_vertices(mesh.vertices
                                  + jitter * rng.standard_normal(mesh.vertices.shape))
    elif kind == "grid":
        nx = int(rng.integers(24, 42))
        ny = int(rng.integers(24, 42))
        mesh = noised_grid(nx, ny, noise=float(rng.uniform(0.02, 0.08)), rng=rng)
    else:
        raise ValueError(f"unknown cover kind {kind!r}")
    return normalize(mesh)


def cover_corpus(n: int, seed: int = 0) -> list[TriMesh]:
    """n random normalized covers with per-mesh seeds derived from `seed`."""
    return [random_cover(np.random.default_rng(np.random.SeedSequence((seed, i))))
            for i in range(n)]
