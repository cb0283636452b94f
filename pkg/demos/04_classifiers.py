"""Training and scoring the three steganalyzers on synthetic data.

Run:  python demos/04_classifiers.py
"""

import os
import tempfile

import numpy as np

from meshsteg.classifiers import (fld_ensemble_score, fld_ensemble_train,
                                  load_model, qda_score, qda_train, save_model,
                                  svm_grid_search, svm_score, svm_train)

rng = np.random.default_rng(0)
n = 120
X = np.vstack([rng.normal(size=(n, 8)), rng.normal(size=(n, 8))])
X[n:, 0] += 2.0          # mean shift on one dimension
X[n:, 3] *= 2.5          # variance change on another
y = np.r_[np.zeros(n, dtype=int), np.ones(n, dtype=int)]
X_test = np.vstack([rng.normal(size=(400, 8)),
                    np.c_[rng.normal(2.0, 1.0, (400, 1)),
                          rng.normal(size=(400, 2)),
                          rng.normal(0.0, 2.5, (400, 1)),
                          rng.normal(size=(400, 4))]])
y_test = np.r_[np.zeros(400, dtype=int), np.ones(400, dtype=int)]


def accuracy(scores):
    return float(np.mean((scores > 0).astype(int) == y_test))


print("== quadratic discriminant ==")
qda = qda_train(X, y)
print(f"priors {qda.priors.round(2)}, test accuracy {accuracy(qda_score(qda, X_test)):.3f}")

print("\n== FLD ensemble (subspace size picked by OOB error) ==")
fld = fld_ensemble_train(X, y, seed=1)
print(f"chosen subspace size: {fld.d_sub} of 8, members: {len(fld.members)}")
print(f"OOB error per candidate: { {k: round(v, 3) for k, v in fld.oob_errors.items()} }")
print(f"test accuracy {accuracy(fld_ensemble_score(fld, X_test)):.3f}")

print("\n== RBF-SVM ==")
svm = svm_train(X, y, C=10.0, gamma=2.0 ** -4)
print(f"support vectors: {len(svm.dual_coef)}, converged: {svm.converged}, "
      f"iterations: {svm.n_iter}")
print(f"dual balance sum(a_i y_i) = {svm.dual_coef.sum():.2e}")
print(f"test accuracy {accuracy(svm_score(svm, X_test)):.3f}")

print("\n== grid search over C = 10^1..10^7, gamma = 2^-12..2^-1 ==")
res = svm_grid_search(X[::4], y[::4], seed=2)   # subsample to keep the demo fast
print(f"evaluated {len(res.evaluated)} grid points "
      f"({res.expansions} boundary expansions)")
print(f"picked C={res.C:g}, gamma=2^{int(np.log2(res.gamma))}, "
      f"5-fold CV error {res.cv_error:.3f}")

print("\n== plain-text model serialization ==")
with tempfile.TemporaryDirectory() as tmp:
    path = os.path.join(tmp, "svm.model")
    save_model(svm, path)
    again = load_model(path)
    same = np.array_equal(svm_score(svm, X_test), svm_score(again, X_test))
    size = os.path.getsize(path)
    print(f"saved {size} bytes; reloaded scores identical: {bool(same)}")
