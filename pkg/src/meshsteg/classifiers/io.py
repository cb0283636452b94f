"""Plain-text model serialization.

Format: one `key = value` pair per line, '#' comments allowed. Scalars are
written with repr() (full precision, exact round trip); arrays as
space-separated scalars; matrices row by row under `<key>.row.<i>` keys.
The standardizer, feature-set id, and training metadata travel with the
model so a saved model is self-contained.
"""

from __future__ import annotations

import json

import numpy as np

from .fld import FldEnsembleModel, FldMember
from .qda import QdaModel
from .standardize import Standardizer
from .svm import SvmModel


def _fmt(value) -> str:
    if isinstance(value, (np.floating, float)):
        return repr(float(value))
    if isinstance(value, (np.integer, int)):
        return str(int(value))
    return str(value)


def _fmt_vec(arr) -> str:
    return " ".join(_fmt(v) for v in np.asarray(arr).ravel())


class _Writer:
    def __init__(self, fh):
        self.fh = fh

    def put(self, key, value):
        self.fh.write(f"{key} = {_fmt(value)}\n")

    def put_vec(self, key, arr):
        self.fh.write(f"{key} = {_fmt_vec(arr)}\n")

    def put_mat(self, key, mat):
        for i, row in enumerate(np.asarray(mat)):
            self.put_vec(f"{key}.row.{i}", row)


def save_model(model, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        w = _Writer(fh)
        w.put("format", "meshsteg-model/1")
        w.put("set_id", model.set_id if model.set_id is not None else "")
        w.put("meta", json.dumps(model.meta, sort_keys=True))
        w.put_vec("standardizer.mean", model.standardizer.mean)
        w.put_vec("standardizer.std", model.standardizer.std)
        if isinstance(model, QdaModel):
            w.put("model_type", "qda")
            w.put_vec("priors", model.priors)
            for k in (0, 1):
                w.put_vec(f"mean.{k}", model.means[k])
                w.put_mat(f"cov.{k}", model.covariances[k])
        elif isinstance(model, FldEnsembleModel):
            w.put("model_type", "fld_ensemble")
            w.put("d_sub", model.d_sub)
            w.put("seed", model.seed)
            w.put("n_members", len(model.members))
            w.put("oob_errors", json.dumps({str(k): v for k, v in model.oob_errors.items()}))
            w.put("oob_trace", json.dumps(model.oob_trace))
            for i, m in enumerate(model.members):
                w.put_vec(f"member.{i}.features", m.feature_idx)
                w.put_vec(f"member.{i}.w", m.w)
                w.put(f"member.{i}.b", m.b)
        elif isinstance(model, SvmModel):
            w.put("model_type", "svm")
            w.put("C", model.C)
            w.put("gamma", model.gamma)
            w.put("offset", model.offset)
            w.put("converged", int(model.converged))
            w.put("n_iter", model.n_iter)
            w.put("n_support", len(model.dual_coef))
            w.put_vec("dual_coef", model.dual_coef)
            w.put_mat("support_vectors", model.support_vectors)
        else:
            raise TypeError(f"cannot serialize {type(model).__name__}")


def _parse(path) -> dict[str, str]:
    entries: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if " = " in line:
                key, value = line.split(" = ", 1)
            elif line.endswith(" ="):   # empty value, trailing space stripped
                key, value = line[:-2], ""
            else:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            entries[key.strip()] = value
    return entries


def _vec(entries, key) -> np.ndarray:
    raw = entries[key]
    return np.array([float(t) for t in raw.split()]) if raw else np.empty(0)


def _mat(entries, key, n_rows) -> np.ndarray:
    return np.stack([_vec(entries, f"{key}.row.{i}") for i in range(n_rows)])


def load_model(path):
    e = _parse(path)
    if e.get("format") != "meshsteg-model/1":
        raise ValueError(f"{path}: unknown model format {e.get('format')!r}")
    std = Standardizer(mean=_vec(e, "standardizer.mean"), std=_vec(e, "standardizer.std"))
    set_id = e["set_id"] or None
    meta = json.loads(e["meta"])
    kind = e["model_type"]
    p = std.n_features
    if kind == "qda":
        return QdaModel(
            standardizer=std,
            means=np.stack([_vec(e, "mean.0"), _vec(e, "mean.1")]),
            covariances=np.stack([_mat(e, "cov.0", p), _mat(e, "cov.1", p)]),
            priors=_vec(e, "priors"), set_id=set_id, meta=meta)
    if kind == "fld_ensemble":
        members = []
        for i in range(int(e["n_members"])):
            members.append(FldMember(
                feature_idx=_vec(e, f"member.{i}.features").astype(np.int64),
                w=_vec(e, f"member.{i}.w"),
                b=float(e[f"member.{i}.b"])))
        return FldEnsembleModel(
            standardizer=std, members=members, d_sub=int(e["d_sub"]),
            seed=int(e["seed"]),
            oob_errors={int(k): v for k, v in json.loads(e["oob_errors"]).items()},
            oob_trace=[tuple(t) for t in json.loads(e["oob_trace"])],
            set_id=set_id, meta=meta)
    if kind == "svm":
        n_sv = int(e["n_support"])
        return SvmModel(
            standardizer=std,
            support_vectors=(_mat(e, "support_vectors", n_sv)
                             if n_sv else np.empty((0, p))),
            dual_coef=_vec(e, "dual_coef"), offset=float(e["offset"]),
            gamma=float(e["gamma"]), C=float(e["C"]),
            converged=bool(int(e["converged"])), n_iter=int(e["n_iter"]),
            set_id=set_id, meta=meta)
    raise ValueError(f"{path}: unknown model type {kind!r}")
