"""The 19 raw per-element feature arrays measured between a mesh and its
smoothed version: positional and Laplacian differences, dihedral and normal
angles, principal-curvature statistics, and spherical-coordinate descriptors.

All arrays are non-negative; angle-valued features live in [0, pi]. Degenerate
elements (zero-area faces, tiny rings, vanishing normals) contribute zeros and
are counted in the result metadata instead of aborting the extraction.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import MissingFeature, TopologyMismatch
from .mesh import TriMesh
from .smoothing import laplacian_coords

_AREA_EPS = 1e-300   # squared-norm floor below which a face is degenerate


@dataclass(frozen=True)
class SphericalCoords:
    """Per-vertex spherical coordinates about the vertex centroid.

    radius is the Euclidean distance to the centroid, azimuth = atan2(y, x)
    in [-pi, pi], elevation = asin(z / radius) in [-pi/2, pi/2]. A vertex at
    the centroid maps to (0, 0, 0) by convention.
    """

    center: np.ndarray
    radius: np.ndarray
    azimuth: np.ndarray
    elevation: np.ndarray

    def to_cartesian(self) -> np.ndarray:
        cos_el = np.cos(self.elevation)
        return self.center + self.radius[:, None] * np.stack(
            [cos_el * np.cos(self.azimuth),
             cos_el * np.sin(self.azimuth),
             np.sin(self.elevation)], axis=1)


@dataclass
class LocalFeatures:
    """The raw arrays phi[1..19] plus counts of skipped degenerate elements.

    Array lengths: per-vertex features have length |V|; phi[9] runs over
    interior non-degenerate edges; phi[10] over faces; phi[17..19] over the
    full canonical edge list.
    """

    phi: dict[int, np.ndarray]
    skipped: dict[str, int] = field(default_factory=dict)

    def require(self, indices) -> None:
        missing = [k for k in indices if k not in self.phi]
        if missing:
            raise MissingFeature(f"raw feature arrays missing: {missing}")


def _check_topology(mesh: TriMesh, smoothed: TriMesh) -> None:
    if not mesh.same_topology(smoothed):
        raise TopologyMismatch("feature differencing requires identical connectivity")


def _face_geometry(mesh: TriMesh):
    """Unit face normals, areas, and the degenerate-face mask (area ~ 0)."""
    v = mesh.vertices
    f = mesh.faces
    e1 = v[f[:, 1]] - v[f[:, 0]]
    e2 = v[f[:, 2]] - v[f[:, 0]]
    cross = np.cross(e1, e2)
    two_area = np.linalg.norm(cross, axis=1)
    degenerate = two_area <= _AREA_EPS
    normals = np.zeros_like(cross)
    ok = ~degenerate
    normals[ok] = cross[ok] / two_area[ok, None]
    return normals, 0.5 * two_area, degenerate


def _angle_between(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Angle between rows of unit-vector arrays via 2*atan2(|u-v|, |u+v|).

    Unlike arccos of the dot product this is exactly zero for identical
    inputs and loses no precision near 0 or pi, which the self-calibration
    nullity invariant relies on.
    """
    diff = np.linalg.norm(u - v, axis=1)
    summ = np.linalg.norm(u + v, axis=1)
    return 2.0 * np.arctan2(diff, summ)


def positional_features(mesh: TriMesh, smoothed: TriMesh, lap=None, lap_s=None):
    """phi1..phi8: per-axis absolute differences of Cartesian and Laplacian
    coordinates plus the absolute differences of their Euclidean norms."""
    _check_topology(mesh, smoothed)
    if lap is None:
        lap = laplacian_coords(mesh)
    if lap_s is None:
        lap_s = laplacian_coords(smoothed)
    dv = np.abs(mesh.vertices - smoothed.vertices)
    dl = np.abs(lap - lap_s)
    phi7 = np.abs(np.linalg.norm(mesh.vertices, axis=1)
                  - np.linalg.norm(smoothed.vertices, axis=1))
    phi8 = np.abs(np.linalg.norm(lap, axis=1) - np.linalg.norm(lap_s, axis=1))
    return dv[:, 0], dv[:, 1], dv[:, 2], dl[:, 0], dl[:, 1], dl[:, 2], phi7, phi8


def dihedral_features(mesh: TriMesh, smoothed: TriMesh, geo=None, geo_s=None):
    """phi9 over interior edges: absolute change of the angle between the two
    incident-face normals (0 = coplanar). Edges touching a zero-area face in
    either mesh are skipped; the skip count is returned alongside."""
    _check_topology(mesh, smoothed)
    conn = mesh.connectivity
    normals, _, bad = geo if geo is not None else _face_geometry(mesh)
    normals_s, _, bad_s = geo_s if geo_s is not None else _face_geometry(smoothed)

    fa = conn.interior_faces[:, 0]
    fb = conn.interior_faces[:, 1]
    usable = ~(bad[fa] | bad[fb] | bad_s[fa] | bad_s[fb])
    theta = _angle_between(normals[fa], normals[fb])
    theta_s = _angle_between(normals_s[fa], normals_s[fb])
    phi9 = np.abs(theta - theta_s)[usable]
    return phi9, int(np.count_nonzero(~usable))


def face_normal_features(mesh: TriMesh, smoothed: TriMesh, geo=None, geo_s=None):
    """phi10 per face: angle between the face normal before and after
    smoothing. Faces degenerate in either mesh contribute 0."""
    _check_topology(mesh, smoothed)
    normals, _, bad = geo if geo is not None else _face_geometry(mesh)
    normals_s, _, bad_s = geo_s if geo_s is not None else _face_geometry(smoothed)
    unusable = bad | bad_s
    phi10 = _angle_between(normals, normals_s)
    phi10[unusable] = 0.0
    return phi10, int(np.count_nonzero(unusable))


def vertex_normals(mesh: TriMesh, geo=None) -> tuple[np.ndarray, np.ndarray]:
    """Area-weighted vertex normals: each incident face contributes its unit
    normal scaled by area / (|e1|^2 |e2|^2), where e1, e2 are the two face
    edges leaving the vertex. Returns (unit normals, zero-normal mask)."""
    v = mesh.vertices
    f = mesh.faces
    normals, areas, bad = geo if geo is not None else _face_geometry(mesh)
    acc = np.zeros_like(v)
    for corner in range(3):
        i = f[:, corner]
        e1 = v[f[:, (corner + 1) % 3]] - v[i]
        e2 = v[f[:, (corner + 2) % 3]] - v[i]
        denom = np.einsum("ij,ij->i", e1, e1) * np.einsum("ij,ij->i", e2, e2)
        w = np.zeros(len(f))
        ok = ~bad & (denom > _AREA_EPS)
        w[ok] = areas[ok] / denom[ok]
        np.add.at(acc, i, w[:, None] * normals)
    norms = np.linalg.norm(acc, axis=1)
    zero = norms <= _AREA_EPS
    unit = np.zeros_like(acc)
    unit[~zero] = acc[~zero] / norms[~zero, None]
    return unit, zero


def vertex_normal_features(mesh: TriMesh, smoothed: TriMesh, geo=None, geo_s=None):
    """phi11 per vertex: angle between the vertex normals of the mesh and its
    smoothed version. Vertices with a vanishing normal in either mesh get 0."""
    _check_topology(mesh, smoothed)
    n, zero = vertex_normals(mesh, geo)
    n_s, zero_s = vertex_normals(smoothed, geo_s)
    unusable = zero | zero_s
    phi11 = _angle_between(n, n_s)
    phi11[unusable] = 0.0
    return phi11, int(np.count_nonzero(unusable))


def principal_curvatures(mesh: TriMesh, geo=None):
    """Per-vertex principal curvatures (k_min, k_max) from a least-squares
    quadric height field z = a x^2 + b xy + c y^2 fitted over the tangent
    plane of the vertex normal, using the one-ring as samples.

    Vertices with fewer than 3 neighbors or no usable normal get (0, 0).
    Returns (k_min, k_max, n_skipped).
    """
    v = mesh.vertices
    conn = mesh.connectivity
    unit_n, zero_n = vertex_normals(mesh, geo)
    val = conn.valences

    k_min = np.zeros(len(v))
    k_max = np.zeros(len(v))
    usable = (val >= 3) & ~zero_n
    skipped = int(np.count_nonzero(~usable))
    if not usable.any():
        return k_min, k_max, skipped

    # orthonormal tangent frame per vertex: t1 from the least-aligned axis
    n = unit_n
    pick = np.argmin(np.abs(n), axis=1)
    helper = np.zeros_like(n)
    helper[np.arange(len(n)), pick] = 1.0
    t1 = np.cross(n, helper)
    t1_norm = np.linalg.norm(t1, axis=1)
    ok_frame = t1_norm > _AREA_EPS
    t1[ok_frame] = t1[ok_frame] / t1_norm[ok_frame, None]
    t2 = np.cross(n, t1)
    usable &= ok_frame

    offsets = conn.ring_offsets
    ring = conn.ring_indices
    for valence in np.unique(val[usable]):
        group = np.nonzero(usable & (val == valence))[0]
        # (g, valence) neighbor index matrix for this valence class
        nbr = ring[offsets[group, None] + np.arange(valence)[None, :]]
        d = v[nbr] - v[group][:, None, :]
        x = np.einsum("gkj,gj->gk", d, t1[group])
        y = np.einsum("gkj,gj->gk", d, t2[group])
        z = np.einsum("gkj,gj->gk", d, n[group])
        design = np.stack([x * x, x * y, y * y], axis=-1)      # (g, valence, 3)
        gram = np.einsum("gki,gkj->gij", design, design)        # (g, 3, 3)
        rhs = np.einsum("gki,gk->gi", design, z)                # (g, 3)
        try:
            coef = np.linalg.solve(gram, rhs[..., None])[..., 0]
        except np.linalg.LinAlgError:
            coef = np.stack([np.linalg.lstsq(design[i], z[i], rcond=None)[0]
                             for i in range(len(group))])
        a, b, c = coef[:, 0], coef[:, 1], coef[:, 2]
        # shape operator [[2a, b], [b, 2c]]: eigenvalues are the curvatures
        mean = a + c
        spread = np.sqrt((a - c) ** 2 + b * b)
        k_min[group] = mean - spread
        k_max[group] = mean + spread
    return k_min, k_max, skipped


def gaussian_and_ratio(k_min: np.ndarray, k_max: np.ndarray):
    """Gaussian curvature k_min*k_max and the |min|/|max| curvature ratio,
    with ratio defined as 0 where the larger magnitude vanishes."""
    k_g = k_min * k_max
    lo = np.minimum(np.abs(k_min), np.abs(k_max))
    hi = np.maximum(np.abs(k_min), np.abs(k_max))
    ratio = np.zeros_like(hi)
    nz = hi > 0.0
    ratio[nz] = lo[nz] / hi[nz]
    return k_g, ratio


def curvature_features(mesh: TriMesh, smoothed: TriMesh, geo=None, geo_s=None):
    """phi12, phi13 per vertex: absolute change of Gaussian curvature and of
    the curvature ratio under smoothing."""
    _check_topology(mesh, smoothed)
    k1, k2, skip = principal_curvatures(mesh, geo)
    k1s, k2s, skip_s = principal_curvatures(smoothed, geo_s)
    kg, kr = gaussian_and_ratio(k1, k2)
    kg_s, kr_s = gaussian_and_ratio(k1s, k2s)
    return np.abs(kg - kg_s), np.abs(kr - kr_s), skip + skip_s


def to_spherical(mesh: TriMesh) -> SphericalCoords:
    """Spherical coordinates of every vertex about the vertex centroid."""
    center = mesh.vertices.mean(axis=0)
    d = mesh.vertices - center
    radius = np.linalg.norm(d, axis=1)
    at_center = radius <= 0.0
    azimuth = np.where(at_center, 0.0, np.arctan2(d[:, 1], d[:, 0]))
    with np.errstate(invalid="ignore", divide="ignore"):
        ratio = np.where(at_center, 0.0, d[:, 2] / np.where(at_center, 1.0, radius))
    elevation = np.arcsin(np.clip(ratio, -1.0, 1.0))
    return SphericalCoords(center=center, radius=radius,
                           azimuth=azimuth, elevation=elevation)


def _wrap_angle_diff(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Absolute azimuth difference reduced to [0, pi] across the +-pi seam."""
    d = np.abs(a - b)
    return np.minimum(d, 2.0 * np.pi - d)


def spherical_vertex_features(mesh: TriMesh, smoothed: TriMesh, sph=None, sph_s=None):
    """phi14..phi16: absolute spherical-coordinate differences per vertex.
    Each mesh is converted about its own centroid."""
    _check_topology(mesh, smoothed)
    if sph is None:
        sph = to_spherical(mesh)
    if sph_s is None:
        sph_s = to_spherical(smoothed)
    phi14 = _wrap_angle_diff(sph.azimuth, sph_s.azimuth)
    phi15 = np.abs(sph.elevation - sph_s.elevation)
    phi16 = np.abs(sph.radius - sph_s.radius)
    return phi14, phi15, phi16


def spherical_edge_features(mesh: TriMesh, smoothed: TriMesh, sph=None, sph_s=None):
    """phi17..phi19 per canonical edge: absolute change, under smoothing, of
    the per-edge spherical coordinate gaps between the edge's endpoints."""
    _check_topology(mesh, smoothed)
    if sph is None:
        sph = to_spherical(mesh)
    if sph_s is None:
        sph_s = to_spherical(smoothed)
    i = mesh.connectivity.edges[:, 0]
    j = mesh.connectivity.edges[:, 1]

    def edge_gaps(s: SphericalCoords):
        return (_wrap_angle_diff(s.azimuth[i], s.azimuth[j]),
                np.abs(s.elevation[i] - s.elevation[j]),
                np.abs(s.radius[i] - s.radius[j]))

    k_t, k_e, k_r = edge_gaps(sph)
    k_t_s, k_e_s, k_r_s = edge_gaps(sph_s)
    return np.abs(k_t - k_t_s), np.abs(k_e - k_e_s), np.abs(k_r - k_r_s)


def extract_local_features(mesh: TriMesh, smoothed: TriMesh) -> LocalFeatures:
    """Compute all 19 raw feature arrays between a mesh and its smoothed
    version. Face geometry and spherical coordinates are computed once and
    shared across the individual feature groups."""
    _check_topology(mesh, smoothed)
    geo = _face_geometry(mesh)
    geo_s = _face_geometry(smoothed)
    sph = to_spherical(mesh)
    sph_s = to_spherical(smoothed)

    phi = {}
    skipped = {}
    pos = positional_features(mesh, smoothed,
                              lap=laplacian_coords(mesh), lap_s=laplacian_coords(smoothed))
    for k, arr in enumerate(pos, start=1):
        phi[k] = arr
    phi[9], skipped["dihedral_edges"] = dihedral_features(mesh, smoothed, geo, geo_s)
    phi[10], skipped["degenerate_faces"] = face_normal_features(mesh, smoothed, geo, geo_s)
    phi[11], skipped["zero_vertex_normals"] = vertex_normal_features(mesh, smoothed, geo, geo_s)
    phi[12], phi[13], skipped["curvature_vertices"] = curvature_features(mesh, smoothed, geo, geo_s)
    phi[14], phi[15], phi[16] = spherical_vertex_features(mesh, smoothed, sph, sph_s)
    phi[17], phi[18], phi[19] = spherical_edge_features(mesh, smoothed, sph, sph_s)
    skipped["nonmanifold_edges"] = int(np.count_nonzero(mesh.connectivity.nonmanifold_mask))
    skipped["boundary_edges"] = int(np.count_nonzero(mesh.connectivity.boundary_mask))
    return LocalFeatures(phi=phi, skipped=skipped)


def dump_local_features_csv(features: LocalFeatures, path) -> None:
    """Per-element dump: one row per (element id, phi index, value)."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("element,phi,value\n")
        for k in sorted(features.phi):
            for i, value in enumerate(features.phi[k]):
                fh.write(f"{i},{k},{value!r}\n")
