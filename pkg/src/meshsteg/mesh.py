"""Triangle mesh container, ASCII OFF/OBJ I/O, normalization, connectivity.

A TriMesh is immutable after construction (vertex/face buffers are marked
read-only) so meshes can be shared freely across workers. Connectivity is
derived lazily from the face list and cached; meshes that share a face list
(cover / smoothed / stego) can share one Connectivity object.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateMesh, ParseError, TopologyMismatch, UnsupportedFormat


@dataclass(frozen=True)
class Connectivity:
    """Edge and one-ring structure derived from a face list.

    edges are canonical (min index, max index) pairs in lexicographic order,
    so per-edge feature arrays are reproducible across runs. Edges with one
    incident face are flagged as boundary; edges with more than two are
    non-manifold and excluded from dihedral-angle features.
    """

    edges: np.ndarray            # (E, 2) int64, lexicographically sorted
    edge_face_count: np.ndarray  # (E,) number of incident faces
    interior_edges: np.ndarray   # (K,) edge ids with exactly 2 incident faces
    interior_faces: np.ndarray   # (K, 2) the two incident face ids
    boundary_mask: np.ndarray    # (E,) exactly one incident face
    nonmanifold_mask: np.ndarray  # (E,) more than two incident faces
    ring_offsets: np.ndarray     # (n+1,) CSR offsets into ring_indices
    ring_indices: np.ndarray     # concatenated sorted one-ring neighbor ids
    ring_owner: np.ndarray       # vertex id owning each ring_indices entry

    @property
    def valences(self) -> np.ndarray:
        return np.diff(self.ring_offsets)

    @property
    def n_edges(self) -> int:
        return len(self.edges)


def _build_connectivity(n_vertices: int, faces: np.ndarray) -> Connectivity:
    if len(faces) == 0:
        empty = np.empty((0, 2), dtype=np.int64)
        zeros = np.zeros(0, dtype=np.int64)
        return Connectivity(
            edges=empty, edge_face_count=zeros,
            interior_edges=zeros, interior_faces=np.empty((0, 2), dtype=np.int64),
            boundary_mask=np.zeros(0, dtype=bool), nonmanifold_mask=np.zeros(0, dtype=bool),
            ring_offsets=np.zeros(n_vertices + 1, dtype=np.int64),
            ring_indices=zeros, ring_owner=zeros)

    m = len(faces)
    half = np.concatenate([faces[:, [0, 1]], faces[:, [1, 2]], faces[:, [2, 0]]])
    half = np.sort(half, axis=1)
    face_ids = np.concatenate([np.arange(m)] * 3)
    order = np.lexsort((half[:, 1], half[:, 0]))
    half = half[order]
    face_ids = face_ids[order]

    new_group = np.ones(len(half), dtype=bool)
    new_group[1:] = np.any(half[1:] != half[:-1], axis=1)
    starts = np.nonzero(new_group)[0]
    counts = np.diff(np.append(starts, len(half)))
    edges = half[starts].astype(np.int64)

    interior = np.nonzero(counts == 2)[0]
    interior_faces = np.stack(
        [face_ids[starts[interior]], face_ids[starts[interior] + 1]], axis=1)

    # one-rings from the unique edge list, both directions
    both = np.concatenate([edges, edges[:, ::-1]])
    ring_order = np.lexsort((both[:, 1], both[:, 0]))
    both = both[ring_order]
    ring_owner = both[:, 0]
    ring_indices = both[:, 1]
    ring_offsets = np.zeros(n_vertices + 1, dtype=np.int64)
    np.add.at(ring_offsets, ring_owner + 1, 1)
    ring_offsets = np.cumsum(ring_offsets)

    return Connectivity(
        edges=edges,
        edge_face_count=counts.astype(np.int64),
        interior_edges=interior.astype(np.int64),
        interior_faces=interior_faces.astype(np.int64),
        boundary_mask=counts == 1,
        nonmanifold_mask=counts > 2,
        ring_offsets=ring_offsets,
        ring_indices=ring_indices.astype(np.int64),
        ring_owner=ring_owner.astype(np.int64),
    )


class TriMesh:
    """Indexed triangle mesh with lazily derived connectivity."""

    __slots__ = ("vertices", "faces", "_conn")

    def __init__(self, vertices, faces, _conn: Connectivity | None = None):
        v = np.ascontiguousarray(vertices, dtype=np.float64)
        f = np.ascontiguousarray(faces, dtype=np.int64)
        if v.ndim != 2 or v.shape[1] != 3:
            raise ParseError(f"vertex array must be (n, 3), got {v.shape}")
        if f.size == 0:
            f = f.reshape(0, 3)
        if f.ndim != 2 or f.shape[1] != 3:
            raise ParseError(f"face array must be (m, 3), got {f.shape}")
        if len(f) > 0:
            if f.min() < 0 or f.max() >= len(v):
                raise ParseError("face index out of range")
            degenerate = (f[:, 0] == f[:, 1]) | (f[:, 1] == f[:, 2]) | (f[:, 0] == f[:, 2])
            if degenerate.any():
                raise ParseError(
                    f"face {int(np.nonzero(degenerate)[0][0])} repeats a vertex index")
        v.setflags(write=False)
        f.setflags(write=False)
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "faces", f)
        object.__setattr__(self, "_conn", _conn)

    def __setattr__(self, name, value):
        raise AttributeError("TriMesh is immutable")

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_faces(self) -> int:
        return len(self.faces)

    @property
    def connectivity(self) -> Connectivity:
        if self._conn is None:
            object.__setattr__(self, "_conn", _build_connectivity(self.n_vertices, self.faces))
        return self._conn

    @property
    def n_edges(self) -> int:
        return self.connectivity.n_edges

    def with_vertices(self, vertices) -> "TriMesh":
        """New mesh with replaced vertex positions; connectivity is shared."""
        return TriMesh(vertices, self.faces, _conn=self._conn or self.connectivity)

    def same_topology(self, other: "TriMesh") -> bool:
        return (self.n_vertices == other.n_vertices
                and self.faces.shape == other.faces.shape
                and bool(np.array_equal(self.faces, other.faces)))

    def __repr__(self):
        return f"TriMesh(|V|={self.n_vertices}, |F|={self.n_faces})"


@dataclass(frozen=True)
class MeshPair:
    """A cover mesh and the stego mesh derived from it; topology identical."""

    cover: TriMesh
    stego: TriMesh

    def __post_init__(self):
        if not self.cover.same_topology(self.stego):
            raise TopologyMismatch("cover and stego differ in vertex count or face list")


def derive_connectivity(mesh: TriMesh) -> TriMesh:
    """Force derivation of edges, one-rings, and incident-face pairs.

    Connectivity is derived lazily on first access anyway; this entry point
    exists for callers that want the cost paid at a known time.
    """
    mesh.connectivity
    return mesh


def normalize(mesh: TriMesh) -> TriMesh:
    """Translate the centroid to the origin and scale the mesh uniformly so
    the largest bounding-box side is exactly one. Aspect ratios are kept."""
    if mesh.n_vertices == 0:
        raise DegenerateMesh("cannot normalize an empty mesh")
    centered = mesh.vertices - mesh.vertices.mean(axis=0)
    extent = centered.max(axis=0) - centered.min(axis=0) if mesh.n_vertices > 1 else np.zeros(3)
    max_extent = float(extent.max()) if mesh.n_vertices > 1 else 0.0
    if max_extent <= 0.0:
        raise DegenerateMesh("all vertices coincide; bounding box has zero extent")
    return mesh.with_vertices(centered / max_extent)


def _tokens(path):
    """Yield (line_number, token_list) skipping blanks and '#' comments."""
    with open(path, "r", encoding="utf-8", errors="replace") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.split("#", 1)[0].strip()
            if stripped:
                yield lineno, stripped.split()


def _load_off(path) -> TriMesh:
    rows = _tokens(path)
    try:
        lineno, tok = next(rows)
    except StopIteration:
        raise ParseError(f"{path}: empty file") from None
    counts = None
    if tok[0] != "OFF":
        raise UnsupportedFormat(f"{path}:{lineno}: expected 'OFF' header, got {tok[0]!r}")
    if len(tok) > 1:   # counts may share the header line
        counts = tok[1:]
    if counts is None:
        try:
            lineno, counts = next(rows)
        except StopIteration:
            raise ParseError(f"{path}: missing counts line") from None
    if len(counts) < 2:
        raise ParseError(f"{path}:{lineno}: counts line needs at least |V| |F|")
    try:
        nv, nf = int(counts[0]), int(counts[1])
    except ValueError as exc:
        raise ParseError(f"{path}:{lineno}: bad counts line: {exc}") from None

    vertices = np.empty((nv, 3), dtype=np.float64)
    for i in range(nv):
        try:
            lineno, tok = next(rows)
        except StopIteration:
            raise ParseError(f"{path}: expected {nv} vertices, file ended at {i}") from None
        if len(tok) < 3:
            raise ParseError(f"{path}:{lineno}: vertex line needs 3 coordinates")
        try:
            vertices[i] = [float(tok[0]), float(tok[1]), float(tok[2])]
        except ValueError as exc:
            raise ParseError(f"{path}:{lineno}: bad vertex: {exc}") from None

    faces = np.empty((nf, 3), dtype=np.int64)
    for i in range(nf):
        try:
            lineno, tok = next(rows)
        except StopIteration:
            raise ParseError(f"{path}: expected {nf} faces, file ended at {i}") from None
        try:
            arity = int(tok[0])
        except ValueError as exc:
            raise ParseError(f"{path}:{lineno}: bad face arity: {exc}") from None
        if arity != 3:
            raise UnsupportedFormat(f"{path}:{lineno}: only triangles supported, got {arity}-gon")
        if len(tok) < 4:
            raise ParseError(f"{path}:{lineno}: face line needs 3 indices")
        try:
            faces[i] = [int(tok[1]), int(tok[2]), int(tok[3])]
        except ValueError as exc:
            raise ParseError(f"{path}:{lineno}: bad face index: {exc}") from None

    try:
        return TriMesh(vertices, faces)
    except ParseError as exc:
        raise ParseError(f"{path}: {exc}") from None


def _load_obj(path) -> TriMesh:
    vertices = []
    faces = []
    for lineno, tok in _tokens(path):
        if tok[0] == "v":
            if len(tok) < 4:
                raise ParseError(f"{path}:{lineno}: vertex line needs 3 coordinates")
            try:
                vertices.append((float(tok[1]), float(tok[2]), float(tok[3])))
            except ValueError as exc:
                raise ParseError(f"{path}:{lineno}: bad vertex: {exc}") from None
        elif tok[0] == "f":
            refs = tok[1:]
            if len(refs) != 3:
                raise UnsupportedFormat(
                    f"{path}:{lineno}: only triangles supported, got {len(refs)}-gon")
            idx = []
            for ref in refs:
                # "f v/vt/vn" style suffixes are ignored
                head = ref.split("/", 1)[0]
                try:
                    k = int(head)
                except ValueError as exc:
                    raise ParseError(f"{path}:{lineno}: bad face index: {exc}") from None
                if k < 1:
                    raise ParseError(f"{path}:{lineno}: OBJ indices are positive and 1-based")
                idx.append(k - 1)
            faces.append(tuple(idx))
        # vt / vn / vp / usemtl / o / g / s records are ignored

    if not vertices:
        raise ParseError(f"{path}: no vertex records")
    try:
        return TriMesh(np.asarray(vertices), np.asarray(faces, dtype=np.int64).reshape(-1, 3))
    except ParseError as exc:
        raise ParseError(f"{path}: {exc}") from None


def load_mesh(path, format: str | None = None) -> TriMesh:
    """Load an ASCII OFF or OBJ file. Format inferred from the extension
    unless given explicitly."""
    if format is None:
        ext = os.path.splitext(str(path))[1].lower()
        if ext == ".off":
            format = "off"
        elif ext == ".obj":
            format = "obj"
        else:
            raise UnsupportedFormat(f"{path}: cannot infer format from extension {ext!r}")
    format = format.lower()
    if format == "off":
        return _load_off(path)
    if format == "obj":
        return _load_obj(path)
    raise UnsupportedFormat(f"unknown format {format!r}")


def save_off(mesh: TriMesh, path) -> None:
    """Write ASCII OFF with 9 significant digits per coordinate."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("OFF\n")
        fh.write(f"{mesh.n_vertices} {mesh.n_faces} {mesh.n_edges}\n")
        for v in mesh.vertices:
            fh.write(f"{v[0]:.9g} {v[1]:.9g} {v[2]:.9g}\n")
        for f in mesh.faces:
            fh.write(f"3 {f[0]} {f[1]} {f[2]}\n")
