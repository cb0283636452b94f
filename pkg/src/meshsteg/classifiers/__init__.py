"""Trainable binary steganalyzers: QDA, FLD ensemble, RBF-SVM."""

from .standardize import Standardizer
from .qda import QdaModel, qda_predict, qda_score, qda_train
from .fld import (FldEnsembleModel, FldMember, fld_ensemble_predict,
                  fld_ensemble_score, fld_ensemble_train, fld_ensemble_votes,
                  subspace_ladder)
from .svm import (GridSearchResult, SvmModel, rbf_kernel, svm_grid_search,
                  svm_predict, svm_score, svm_train)
from .io import load_model, save_model

__all__ = [
    "Standardizer",
    "QdaModel", "qda_train", "qda_score", "qda_predict",
    "FldEnsembleModel", "FldMember", "fld_ensemble_train", "fld_ensemble_score",
    "fld_ensemble_votes", "fld_ensemble_predict", "subspace_ladder",
    "SvmModel", "GridSearchResult", "rbf_kernel", "svm_train", "svm_score",
    "svm_predict", "svm_grid_search",
    "save_model", "load_model",
]
