"""Exception hierarchy shared across the package.

Raised errors abort the operation that hit them; recoverable per-element
conditions (degenerate faces, isolated vertices, infeasible payload bits)
are instead counted in result metadata so corpus runs survive imperfect
meshes.
"""


class MeshStegError(Exception):
    """Base class for all package errors."""


class ParseError(MeshStegError):
    """Malformed mesh file: bad header, bad line, or index out of range."""


class UnsupportedFormat(MeshStegError):
    """File is recognizable but outside the supported subset (quads, binary)."""


class DegenerateMesh(MeshStegError):
    """Mesh geometry too degenerate for the operation (e.g. zero extent)."""


class TopologyMismatch(MeshStegError):
    """Two meshes expected to share vertex count / face list do not."""


class EmptyArray(MeshStegError):
    """Statistic requested on an empty feature array."""


class MissingFeature(MeshStegError):
    """Feature-set assembly requires a raw feature array that is absent."""


class CapacityExceeded(MeshStegError):
    """Payload longer than the embedder variant can carry on this mesh."""


class DegenerateAxis(MeshStegError):
    """Principal axis of the vertex cloud is undefined (no spread or tie)."""


class SingularCovariance(MeshStegError):
    """Class covariance not positive definite even after ridge escalation."""


class DegenerateScatter(MeshStegError):
    """Within-class scatter matrix unusable for a Fisher discriminant."""


class DimensionMismatch(MeshStegError):
    """Input vector dimension differs from the trained model's."""


class SizeMismatch(MeshStegError):
    """Split plan does not add up to the corpus size."""


class EmptyTestSet(MeshStegError):
    """Metrics requested over zero test samples."""


class SingleClass(MeshStegError):
    """Both labels are required (ROC, relevance, training)."""


class EmptyPlan(MeshStegError):
    """Experiment plan with zero trials."""


class EmptyCorpus(MeshStegError):
    """No usable input meshes found."""
