"""Corpus manifests and batch helpers shared by the CLI and the demos.

A manifest is plain text, one record per line, tab-separated:
    mesh id, cover path, stego path, variant, parameter string, payload hash
Lines starting with '#' are comments. Paths are stored as written; relative
paths are resolved against the manifest's directory when loading meshes.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .errors import EmptyCorpus, ParseError
from .features import extract_local_features
from .mesh import TriMesh, load_mesh
from .smoothing import SmoothingParams, laplacian_smooth
from .stats import DEFAULT_LOG_EPS, assemble


@dataclass(frozen=True)
class ManifestEntry:
    mesh_id: str
    cover_path: str
    stego_path: str
    variant: str
    params: str
    payload_hash: str


def write_manifest(entries, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("# mesh_id\tcover\tstego\tvariant\tparams\tpayload_hash\n")
        for e in entries:
            fh.write(f"{e.mesh_id}\t{e.cover_path}\t{e.stego_path}\t"
                     f"{e.variant}\t{e.params}\t{e.payload_hash}\n")


def read_manifest(path) -> list[ManifestEntry]:
    entries = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 6:
                raise ParseError(f"{path}:{lineno}: expected 6 tab-separated fields, "
                                 f"got {len(parts)}")
            entries.append(ManifestEntry(*parts))
    if not entries:
        raise EmptyCorpus(f"{path}: manifest has no records")
    return entries


def resolve_path(manifest_path, recorded: str) -> str:
    if os.path.isabs(recorded):
        return recorded
    return os.path.join(os.path.dirname(os.path.abspath(manifest_path)), recorded)


def list_mesh_files(directory) -> list[str]:
    """Sorted .off/.obj files directly inside a directory."""
    try:
        names = sorted(os.listdir(directory))
    except FileNotFoundError:
        raise EmptyCorpus(f"input directory {directory!r} does not exist") from None
    files = [os.path.join(directory, n) for n in names
             if os.path.splitext(n)[1].lower() in (".off", ".obj")]
    if not files:
        raise EmptyCorpus(f"no .off/.obj files in {directory!r}")
    return files


def extract_pair_features(mesh: TriMesh, set_id: str,
                          smoothing: SmoothingParams = SmoothingParams(),
                          epsilon: float = DEFAULT_LOG_EPS, label=None):
    """Smooth one mesh and assemble the statistic vector of its differences
    against the smoothed reference."""
    smoothed = laplacian_smooth(mesh, smoothing)
    return assemble(extract_local_features(mesh, smoothed), set_id,
                    epsilon=epsilon, label=label)


def extract_features_from_file(path, set_id: str,
                               smoothing: SmoothingParams = SmoothingParams(),
                               epsilon: float = DEFAULT_LOG_EPS, label=None):
    return extract_pair_features(load_mesh(path), set_id, smoothing, epsilon, label)


def corpus_feature_matrices(cover_vectors, stego_vectors) -> tuple[np.ndarray, np.ndarray]:
    """Stack row-aligned cover / stego FeatureVector lists into matrices."""
    X_cover = np.stack([fv.values for fv in cover_vectors])
    X_stego = np.stack([fv.values for fv in stego_vectors])
    return X_cover, X_stego
