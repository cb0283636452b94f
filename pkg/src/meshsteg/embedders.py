"""Three information-hiding algorithms used to synthesize stego corpora.

These re-create, at the level of their embedding domains and parameters,
a radial-mean watermark, a radial-histogram watermark, and a multi-layer
principal-axis steganographic scheme. Each comes with a decode counterpart
used purely as a self-consistency oracle; none of them changes mesh
topology, so cover/stego pairs stay index-aligned for feature differencing.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np

from .errors import CapacityExceeded, DegenerateAxis, DegenerateMesh
from .mesh import TriMesh

VARIANTS = ("cho_mean", "yang_hist", "chao_layers")


@dataclass
class EmbedParams:
    """Parameters for the three embedders; unused fields are ignored by the
    variants that do not read them. Defaults follow the common experimental
    settings (strength 0.04, step 0.001, 128 histogram bins, threshold 20,
    10000 intervals)."""

    variant: str
    payload: np.ndarray | None = None     # bits; generated from rng_seed if None
    n_bits: int = 64
    alpha: float = 0.04
    delta_k: float = 0.001
    K: int = 128
    n_thr: int = 20
    layers: int = 3
    intervals: int = 10000
    rng_seed: int = 0

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}; known: {VARIANTS}")

    def resolve_payload(self) -> np.ndarray:
        if self.payload is not None:
            return np.asarray(self.payload, dtype=np.uint8)
        return random_payload(self.n_bits, self.rng_seed)

    def param_string(self) -> str:
        if self.variant == "cho_mean":
            items = {"alpha": self.alpha, "delta_k": self.delta_k}
        elif self.variant == "yang_hist":
            items = {"K": self.K, "n_thr": self.n_thr}
        else:
            items = {"layers": self.layers, "intervals": self.intervals}
        return ";".join(f"{k}={v}" for k, v in items.items())


@dataclass
class EmbedResult:
    """Stego mesh plus the indices of payload bits that could not be
    embedded (degenerate bins, infeasible histogram moves, guard skips)."""

    mesh: TriMesh
    failed_bits: list[int] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failed_bits


def random_payload(n_bits: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(np.random.PCG64(seed))
    return rng.integers(0, 2, size=n_bits, dtype=np.uint8)


def payload_digest(payload: np.ndarray) -> str:
    bits = "".join("1" if b else "0" for b in np.asarray(payload, dtype=np.uint8))
    return hashlib.sha256(bits.encode("ascii")).hexdigest()[:16]


def _radial(mesh: TriMesh):
    """Radial frame about the origin.

    Covers are normalized before embedding, so the origin coincides with the
    vertex centroid; pinning the frame to the origin (instead of recomputing
    the centroid, which drifts once radii change) makes the radial embedders
    and their decode oracles see the exact same bins.
    """
    d = np.asarray(mesh.vertices)
    r = np.linalg.norm(d, axis=1)
    return np.zeros(3), d, r


def _equal_count_bins(r: np.ndarray, n_bins: int) -> list[np.ndarray]:
    """Vertex index chunks of (near) equal size in ascending radial order."""
    order = np.argsort(r, kind="stable")
    return np.array_split(order, n_bins)


# ---------------------------------------------------------------------------
# radial-mean watermark

def cho_mean_embed(mesh: TriMesh, payload, alpha: float = 0.04,
                   delta_k: float = 0.001, max_k: float = 100.0) -> EmbedResult:
    """Shift the normalized radial mean of each equal-count bin beyond
    0.5 +/- alpha to encode one bit per bin.

    Radii within a bin are mapped affinely to [0, 1] and raised to a power k,
    stepped by delta_k from 1 until the bin mean clears the margin; bit 1
    pushes the mean up (k decreasing), bit 0 pushes it down. Bin endpoints
    are fixed points of the map, so bins are recoverable from the stego mesh.
    """
    payload = np.asarray(payload, dtype=np.uint8)
    n_bits = len(payload)
    if n_bits == 0:
        return EmbedResult(mesh.with_vertices(mesh.vertices))
    if n_bits > mesh.n_vertices:
        raise CapacityExceeded(
            f"{n_bits} bits exceed {mesh.n_vertices} vertices (one bin per bit)")

    center, d, r = _radial(mesh)
    new_r = r.copy()
    failed: list[int] = []
    for bit_index, (bit, chunk) in enumerate(zip(payload, _equal_count_bins(r, n_bits))):
        if len(chunk) == 0:
            failed.append(bit_index)   # empty bin: nothing to carry the bit
            continue
        radii = r[chunk]
        lo, hi = float(radii.min()), float(radii.max())
        width = hi - lo
        if width <= 0.0:
            failed.append(bit_index)   # degenerate bin, power map has no effect
            continue
        rho = (radii - lo) / width
        k = 1.0
        if bit:
            target = 0.5 + alpha
            while np.mean(rho ** k) <= target:
                k -= delta_k
                if k <= delta_k:
                    break
            if np.mean(rho ** k) <= target:
                failed.append(bit_index)
                continue
        else:
            target = 0.5 - alpha
            while np.mean(rho ** k) >= target:
                k += delta_k
                if k > max_k:
                    break
            if np.mean(rho ** k) >= target:
                failed.append(bit_index)
                continue
        new_r[chunk] = lo + (rho ** k) * width

    scale = np.ones_like(r)
    moving = r > 0.0
    scale[moving] = new_r[moving] / r[moving]
    return EmbedResult(mesh.with_vertices(center + d * scale[:, None]), failed)


def cho_mean_decode(mesh: TriMesh, n_bits: int) -> np.ndarray:
    """Read each equal-count bin's normalized radial mean against 0.5."""
    _, _, r = _radial(mesh)
    bits = np.zeros(n_bits, dtype=np.uint8)
    for i, chunk in enumerate(_equal_count_bins(r, n_bits)):
        if len(chunk) == 0:
            continue
        radii = r[chunk]
        lo, hi = float(radii.min()), float(radii.max())
        if hi - lo <= 0.0:
            continue
        bits[i] = 1 if np.mean((radii - lo) / (hi - lo)) > 0.5 else 0
    return bits


# ---------------------------------------------------------------------------
# radial-histogram watermark

def yang_capacity(n_bins: int) -> int:
    return max(0, (n_bins - 2) // 2)


def _hist_assign(r: np.ndarray, n_bins: int):
    rmin, rmax = float(r.min()), float(r.max())
    width = (rmax - rmin) / n_bins
    if width <= 0.0:
        raise DegenerateMesh("radial distribution has zero spread")
    idx = np.minimum((np.floor((r - rmin) / width)).astype(np.int64), n_bins - 1)
    idx = np.maximum(idx, 0)
    return idx, rmin, width


def yang_hist_embed(mesh: TriMesh, payload, n_bins: int = 128,
                    n_thr: int = 20) -> EmbedResult:
    """Encode each bit as the sign of the count difference between a pair of
    adjacent radial-histogram bins (2i, 2i+1), i >= 1.

    The strict inequality is enforced by radially shifting the minimum number
    of vertices nearest the shared bin boundary across it, never more than
    n_eff = min(n_thr, smallest nonzero bin count) per pair. The global
    radial extremes are never moved so the histogram edges of the stego mesh
    match the cover's.
    """
    payload = np.asarray(payload, dtype=np.uint8)
    capacity = yang_capacity(n_bins)
    if len(payload) > capacity:
        raise CapacityExceeded(f"{len(payload)} bits exceed capacity {capacity} for K={n_bins}")
    if len(payload) == 0:
        return EmbedResult(mesh.with_vertices(mesh.vertices))

    center, d, r = _radial(mesh)
    bins, rmin, width = _hist_assign(r, n_bins)
    counts = np.bincount(bins, minlength=n_bins)
    nonzero = counts[counts > 0]
    n_eff = int(min(n_thr, nonzero.min())) if len(nonzero) else 0
    protected = {int(np.argmin(r)), int(np.argmax(r))}

    new_r = r.copy()
    failed: list[int] = []
    for bit_index, bit in enumerate(payload):
        left = 2 * (bit_index + 1)
        right = left + 1
        boundary = rmin + width * right   # shared edge between the two bins
        diff = int(counts[left]) - int(counts[right])
        want_positive = bool(bit)
        if (diff > 0) == want_positive and diff != 0:
            continue
        need = (1 - diff + 1) // 2 if want_positive else (1 + diff + 1) // 2
        src, dst = (right, left) if want_positive else (left, right)
        candidates = [v for v in np.nonzero(bins == src)[0] if v not in protected]
        if len(candidates) < need or need > n_eff:
            failed.append(bit_index)
            continue
        candidates.sort(key=lambda v: (abs(new_r[v] - boundary), v))
        offset = -width / 8.0 if dst == left else width / 8.0
        for v in candidates[:need]:
            new_r[v] = boundary + offset
            bins[v] = dst
        counts[src] -= need
        counts[dst] += need

    scale = np.ones_like(r)
    moving = r > 0.0
    scale[moving] = new_r[moving] / r[moving]
    return EmbedResult(mesh.with_vertices(center + d * scale[:, None]), failed)


def yang_hist_decode(mesh: TriMesh, n_bins: int, n_bits: int) -> np.ndarray:
    """Read bits back from the signs of the paired-bin count differences."""
    _, _, r = _radial(mesh)
    bins, _, _ = _hist_assign(r, n_bins)
    counts = np.bincount(bins, minlength=n_bins)
    bits = np.zeros(n_bits, dtype=np.uint8)
    for i in range(min(n_bits, yang_capacity(n_bins))):
        left = 2 * (i + 1)
        bits[i] = 1 if counts[left] > counts[left + 1] else 0
    return bits


# ---------------------------------------------------------------------------
# multi-layer principal-axis embedding

def chao_capacity(n_vertices: int, layers: int) -> int:
    return max(0, n_vertices - 3) * layers


def _principal_frame(mesh: TriMesh):
    """Principal axis, reference vertex ids (min, max, next-extreme), and the
    projection array. References bound the normalized interval and are never
    displaced."""
    v = mesh.vertices
    if mesh.n_vertices <= 3:
        raise DegenerateMesh("need more than 3 vertices (3 are reserved as references)")
    centered = v - v.mean(axis=0)
    cov = centered.T @ centered / len(v)
    evals, evecs = np.linalg.eigh(cov)
    if evals[-1] <= 1e-12 * max(float(np.trace(cov)), 1e-30):
        raise DegenerateAxis("vertex cloud has no spread")
    if evals[-1] - evals[-2] <= 1e-9 * evals[-1]:
        raise DegenerateAxis("top two covariance eigenvalues tie; axis undefined")
    axis = evecs[:, -1]
    for component in axis:
        if component != 0.0:
            if component < 0.0:
                axis = -axis
            break
    proj = v @ axis
    order = np.argsort(proj, kind="stable")
    refs = (int(order[0]), int(order[-1]), int(order[-2]))
    return axis, refs, proj


def _descend(u: float, bits) -> tuple[float, float]:
    """Interval of [0, 1) whose depth-l sub-slot parities equal the given
    bits; descent keeps earlier layers' parities intact."""
    lo, hi = 0.0, 1.0
    for b in bits:
        mid = 0.5 * (lo + hi)
        if b:
            lo = mid      # odd child
        else:
            hi = mid      # even child
    return lo, hi


def chao_layer_embed(mesh: TriMesh, payload, layers: int = 3,
                     intervals: int = 10000) -> EmbedResult:
    """Store bits in sub-slot parities of normalized principal-axis
    projections, one bit per carrier vertex per layer.

    Carrier projections are normalized to (0, 1) between the two extreme
    (reference) projections and quantized into `intervals` slots. Within its
    slot a vertex descends one binary split per layer, landing in the unique
    child of the required parity, so deeper layers never disturb shallower
    ones. Bits are assigned in vertex-index order with the layer as the
    outer loop. A carrier that would land at or above the next-extreme
    reference projection is left unmodified and its bits are reported as
    failed, keeping the reference identities recoverable from the stego mesh.
    """
    if layers < 1:
        raise ValueError("layers must be >= 1")
    payload = np.asarray(payload, dtype=np.uint8)
    axis, refs, proj = _principal_frame(mesh)
    carriers = np.array([i for i in range(mesh.n_vertices) if i not in refs], dtype=np.int64)
    capacity = len(carriers) * layers
    if len(payload) > capacity:
        raise CapacityExceeded(f"{len(payload)} bits exceed capacity {capacity} "
                               f"({len(carriers)} carriers x {layers} layers)")
    if len(payload) == 0:
        return EmbedResult(mesh.with_vertices(mesh.vertices))

    p_min, p_max = proj[refs[0]], proj[refs[1]]
    p_guard = proj[refs[2]]
    span = p_max - p_min
    if span <= 0.0:
        raise DegenerateAxis("all projections coincide")

    bits_per_carrier: list[list[int]] = [[] for _ in carriers]
    positions: list[list[int]] = [[] for _ in carriers]
    for bit_index in range(len(payload)):
        carrier_rank = bit_index % len(carriers)
        bits_per_carrier[carrier_rank].append(int(payload[bit_index]))
        positions[carrier_rank].append(bit_index)

    new_proj = proj.copy()
    failed: list[int] = []
    half_slot = 0.5 * span / intervals
    for rank, vid in enumerate(carriers):
        bits = bits_per_carrier[rank]
        if not bits:
            continue
        t = (proj[vid] - p_min) / span
        slot = min(int(t * intervals), intervals - 1)
        u = t * intervals - slot
        lo, hi = _descend(u, bits)
        # always snap to the interval center: an unmoved vertex could sit
        # arbitrarily close to a parity boundary, where the recomputed axis
        # of the stego mesh would read it back wrongly
        u_new = 0.5 * (lo + hi)
        p_new = p_min + (slot + u_new) / intervals * span
        if p_new >= p_guard - half_slot:
            failed.extend(positions[rank])
            continue
        new_proj[vid] = p_new

    shift = new_proj - proj
    return EmbedResult(mesh.with_vertices(mesh.vertices + shift[:, None] * axis), failed)


def chao_layer_decode(mesh: TriMesh, layers: int, intervals: int,
                      n_bits: int) -> np.ndarray:
    """Read sub-slot parities back from the recomputed principal frame."""
    _, refs, proj = _principal_frame(mesh)
    carriers = np.array([i for i in range(mesh.n_vertices) if i not in refs], dtype=np.int64)
    p_min, p_max = proj[refs[0]], proj[refs[1]]
    span = p_max - p_min
    if span <= 0.0:
        raise DegenerateAxis("all projections coincide")
    bits = np.zeros(n_bits, dtype=np.uint8)
    for bit_index in range(min(n_bits, len(carriers) * layers)):
        layer = bit_index // len(carriers) + 1
        vid = carriers[bit_index % len(carriers)]
        t = (proj[vid] - p_min) / span
        slot = min(int(t * intervals), intervals - 1)
        u = t * intervals - slot
        bits[bit_index] = int(u * (1 << layer)) & 1
    return bits


# ---------------------------------------------------------------------------

def embed(mesh: TriMesh, params: EmbedParams) -> tuple[EmbedResult, np.ndarray]:
    """Dispatch on the variant; returns the result and the payload used."""
    payload = params.resolve_payload()
    if params.variant == "cho_mean":
        result = cho_mean_embed(mesh, payload, alpha=params.alpha, delta_k=params.delta_k)
    elif params.variant == "yang_hist":
        result = yang_hist_embed(mesh, payload, n_bins=params.K, n_thr=params.n_thr)
    else:
        result = chao_layer_embed(mesh, payload, layers=params.layers,
                                  intervals=params.intervals)
    return result, payload
