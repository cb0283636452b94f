"""meshsteg: a 3D triangle-mesh steganalysis laboratory.

The pipeline: normalize meshes, smooth them to obtain a calibration
reference, measure 19 local difference features, summarize each by four
log-moments into fixed-length vectors (the 76-dim set and its subsets),
synthesize stego corpora with three embedders, and train/evaluate QDA,
FLD-ensemble, and RBF-SVM detectors.
"""

from .errors import MeshStegError
from .mesh import (MeshPair, TriMesh, derive_connectivity, load_mesh,
                   normalize, save_off)
from .smoothing import SmoothingParams, laplacian_coords, laplacian_smooth
from .features import (LocalFeatures, SphericalCoords, extract_local_features,
                       to_spherical)
from .stats import (FEATURE_SETS, FeatureVector, MomentQuad, assemble,
                    feature_matrix, log_moments, read_feature_csv,
                    set_columns, set_dimension, write_feature_csv)
from .embedders import (EmbedParams, EmbedResult, chao_layer_decode,
                        chao_layer_embed, cho_mean_decode, cho_mean_embed,
                        embed, random_payload, yang_capacity, yang_hist_decode,
                        yang_hist_embed)
from .evaluation import (Confusion, ExperimentReport, SplitPlan,
                         category_relevance, confusion_from_scores,
                         make_splits, pearson_relevance, roc_auc, roc_curve,
                         run_experiment, write_report_files)

__version__ = "0.1.0"

__all__ = [
    "MeshStegError", "TriMesh", "MeshPair", "load_mesh", "save_off", "normalize",
    "derive_connectivity",
    "SmoothingParams", "laplacian_smooth", "laplacian_coords",
    "LocalFeatures", "SphericalCoords", "extract_local_features", "to_spherical",
    "FEATURE_SETS", "FeatureVector", "MomentQuad", "assemble", "feature_matrix",
    "log_moments", "set_columns", "set_dimension",
    "write_feature_csv", "read_feature_csv",
    "EmbedParams", "EmbedResult", "embed", "random_payload",
    "cho_mean_embed", "cho_mean_decode", "yang_hist_embed", "yang_hist_decode",
    "yang_capacity", "chao_layer_embed", "chao_layer_decode",
    "SplitPlan", "Confusion", "ExperimentReport", "make_splits",
    "confusion_from_scores", "roc_curve", "roc_auc", "pearson_relevance",
    "category_relevance", "run_experiment", "write_report_files",
    "__version__",
]
