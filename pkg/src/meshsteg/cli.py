"""Command-line front end.

Subcommands: embed, smooth, extract, train, evaluate, relevance, rerun.
Every run writes a config echo file (JSON) capturing all effective
parameters; `meshsteg rerun <echo.json>` reproduces the run bit for bit.

Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import corpus as corpuslib
from .classifiers import (fld_ensemble_train, qda_train, save_model,
                          svm_grid_search, svm_train)
from .embedders import EmbedParams, embed, payload_digest
from .errors import EmptyCorpus, MeshStegError
from .evaluation import (SplitPlan, category_relevance, pearson_relevance,
                         run_experiment, write_report_files)
from .mesh import load_mesh, normalize, save_off
from .smoothing import SmoothingParams, laplacian_smooth
from .stats import (DEFAULT_LOG_EPS, FEATURE_SETS, read_feature_csv,
                    write_feature_csv)

log = logging.getLogger("meshsteg")

USAGE_EXIT = 1
DATA_EXIT = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE_EXIT, f"{self.prog}: error: {message}\n")


def _echo_config(command: str, args: dict, echo_path: str) -> None:
    os.makedirs(os.path.dirname(os.path.abspath(echo_path)), exist_ok=True)
    payload = {"command": command, "args": args}
    with open(echo_path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _abspath(p):
    return os.path.abspath(p) if p is not None else None


def _n_jobs(requested: int | None, n_items: int) -> int:
    jobs = requested if requested and requested > 0 else (os.cpu_count() or 1)
    return max(1, min(jobs, n_items))


def _pmap(fn, items, jobs: int):
    """Order-preserving map, optionally across processes; output order (and
    therefore every downstream file) does not depend on the job count."""
    if jobs <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------------------
# embed

_VARIANT_NAMES = {"cho": "cho_mean", "yang": "yang_hist", "chao": "chao_layers"}


def _embed_one(task):
    index, path, args = task
    params = EmbedParams(
        variant=_VARIANT_NAMES[args["variant"]], n_bits=args["bits"], alpha=args["alpha"],
        delta_k=args["delta_k"], K=args["K"], n_thr=args["n_thr"],
        layers=args["layers"], intervals=args["intervals"],
        rng_seed=args["seed"] ^ index)   # per-mesh payload seed
    cover = normalize(load_mesh(path))
    result, payload = embed(cover, params)
    mesh_id = os.path.splitext(os.path.basename(path))[0]
    cover_out = os.path.join(args["out_dir"], "covers", f"{mesh_id}.off")
    stego_out = os.path.join(args["out_dir"], "stegos", f"{mesh_id}.off")
    save_off(cover, cover_out)
    save_off(result.mesh, stego_out)
    return corpuslib.ManifestEntry(
        mesh_id=mesh_id,
        cover_path=os.path.join("covers", f"{mesh_id}.off"),
        stego_path=os.path.join("stegos", f"{mesh_id}.off"),
        variant=params.variant,
        params=params.param_string() + f";bits={len(payload)};seed={params.rng_seed}",
        payload_hash=payload_digest(payload)), result.failed_bits


def cmd_embed(args: dict) -> int:
    files = corpuslib.list_mesh_files(args["covers_dir"])
    os.makedirs(os.path.join(args["out_dir"], "covers"), exist_ok=True)
    os.makedirs(os.path.join(args["out_dir"], "stegos"), exist_ok=True)
    jobs = _n_jobs(args["jobs"], len(files))
    entries = []
    failures = 0
    for (entry, failed_bits), path in zip(
            _pmap(_embed_one, [(i, p, args) for i, p in enumerate(files)], jobs), files):
        entries.append(entry)
        if failed_bits:
            failures += 1
            log.warning("%s: %d payload bits not embeddable", path, len(failed_bits))
        log.info("embedded %s", entry.mesh_id)
    manifest = os.path.join(args["out_dir"], "manifest.txt")
    corpuslib.write_manifest(entries, manifest)
    _echo_config("embed", args, os.path.join(args["out_dir"], "config_echo.json"))
    log.info("wrote %s (%d pairs, %d with skipped bits)", manifest, len(entries), failures)
    return 0


# ---------------------------------------------------------------------------
# smooth

def cmd_smooth(args: dict) -> int:
    mesh = load_mesh(args["input"])
    params = SmoothingParams(iterations=args["iterations"], weight=args["weight"])
    save_off(laplacian_smooth(mesh, params), args["output"])
    _echo_config("smooth", args, args["output"] + ".config.json")
    return 0


# ---------------------------------------------------------------------------
# extract

def _extract_one(task):
    manifest_path, entry, args = task
    smoothing = SmoothingParams(iterations=args["iterations"], weight=args["weight"])
    rows = []
    for label, recorded in ((0, entry.cover_path), (1, entry.stego_path)):
        path = corpuslib.resolve_path(manifest_path, recorded)
        if not os.path.exists(path):
            return entry.mesh_id, None, f"missing mesh file {recorded!r}"
        fv = corpuslib.extract_features_from_file(
            path, args["set"], smoothing, args["epsilon"], label=label)
        rows.append(fv.values)
    return entry.mesh_id, rows, None


def cmd_extract(args: dict) -> int:
    manifest_path = args["manifest"]
    entries = corpuslib.read_manifest(manifest_path)
    jobs = _n_jobs(args["jobs"], len(entries))
    results = _pmap(_extract_one, [(manifest_path, e, args) for e in entries], jobs)
    X, y, bad = [], [], []
    for mesh_id, rows, error in results:
        if error is not None:
            bad.append((mesh_id, error))
            log.error("%s: %s", mesh_id, error)
            continue
        X.extend(rows)
        y.extend([0, 1])
        log.info("extracted %s", mesh_id)
    if bad and not args["skip_missing"]:
        raise EmptyCorpus(f"{len(bad)} manifest rows failed; "
                          "rerun with --skip-missing to drop them")
    if not X:
        raise EmptyCorpus("no rows extracted")
    write_feature_csv(args["output"], np.asarray(X), np.asarray(y))
    _echo_config("extract", args, args["output"] + ".config.json")
    log.info("wrote %s (%d rows)", args["output"], len(X))
    return 0


# ---------------------------------------------------------------------------
# train

def cmd_train(args: dict) -> int:
    X, y = read_feature_csv(args["features"])
    set_id = _set_for_width(X.shape[1])
    meta = {"seed": args["seed"], "features": os.path.basename(args["features"])}
    if args["clf"] == "qda":
        model = qda_train(X, y, set_id=set_id, meta=meta)
    elif args["clf"] == "fld":
        model = fld_ensemble_train(X, y, seed=args["seed"], set_id=set_id, meta=meta)
    else:
        c, gamma = args["svm_c"], args["svm_gamma"]
        if args["grid"]:
            res = svm_grid_search(X, y, seed=args["seed"])
            c, gamma = res.C, res.gamma
            log.info("grid search chose C=%g gamma=%g (cv error %.4f)",
                     c, gamma, res.cv_error)
        model = svm_train(X, y, C=c, gamma=gamma, seed=args["seed"],
                          set_id=set_id, meta=meta)
    save_model(model, args["output"])
    _echo_config("train", args, args["output"] + ".config.json")
    log.info("wrote %s", args["output"])
    return 0


def _set_for_width(width: int) -> str | None:
    from .stats import set_dimension
    for name in FEATURE_SETS:
        if set_dimension(name) == width:
            return name
    return None


# ---------------------------------------------------------------------------
# evaluate

def _split_pairs(X, y):
    if len(X) % 2 != 0 or not np.array_equal(y[0::2], np.zeros(len(X) // 2)) \
            or not np.array_equal(y[1::2], np.ones(len(X) // 2)):
        raise EmptyCorpus("feature CSV must hold cover/stego pairs in "
                          "adjacent rows (cover first)")
    return X[0::2], X[1::2]


def cmd_evaluate(args: dict) -> int:
    X, y = read_feature_csv(args["features"])
    if X.shape[1] != 76:
        raise EmptyCorpus(f"evaluate needs a 76-dim feature CSV "
                          f"(subsets are sliced from it), got {X.shape[1]} columns")
    X_cover, X_stego = _split_pairs(X, y)
    plan = SplitPlan(trials=args["trials"], train_pairs=args["train"],
                     test_pairs=args["test"], master_seed=args["seed"])
    report = run_experiment(X_cover, X_stego, args["sets"], args["clf"], plan,
                            svm_c=args["svm_c"], svm_gamma=args["svm_gamma"],
                            grid=args["grid"])
    written = write_report_files(report, args["out_dir"])
    _echo_config("evaluate", args, os.path.join(args["out_dir"], "config_echo.json"))
    for path in written:
        log.info("wrote %s", path)
    return 0


# ---------------------------------------------------------------------------
# relevance

def cmd_relevance(args: dict) -> int:
    X, y = read_feature_csv(args["features"])
    rel = pearson_relevance(X, y)
    with open(args["output"], "w", encoding="utf-8") as fh:
        fh.write("feature,relevance\n")
        for i, rho in enumerate(rel):
            fh.write(f"f{i:03d},{rho!r}\n")
        if X.shape[1] == 76:
            fh.write("category,mean_relevance\n")
            for cat, value in category_relevance(rel).items():
                fh.write(f"{cat},{value!r}\n")
    _echo_config("relevance", args, args["output"] + ".config.json")
    log.info("wrote %s", args["output"])
    return 0


# ---------------------------------------------------------------------------

def cmd_rerun(args: dict) -> int:
    with open(args["config"], "r", encoding="utf-8") as fh:
        echo = json.load(fh)
    command = echo["command"]
    handler = _HANDLERS.get(command)
    if handler is None:
        raise MeshStegError(f"config echo names unknown command {command!r}")
    return handler(echo["args"])


_HANDLERS = {
    "embed": cmd_embed,
    "smooth": cmd_smooth,
    "extract": cmd_extract,
    "train": cmd_train,
    "evaluate": cmd_evaluate,
    "relevance": cmd_relevance,
}


def _csv_list(valid, kind):
    def parse(text):
        items = [t.strip() for t in text.split(",") if t.strip()]
        for item in items:
            if item not in valid:
                raise argparse.ArgumentTypeError(
                    f"unknown {kind} {item!r}; choose from {sorted(valid)}")
        if not items:
            raise argparse.ArgumentTypeError(f"need at least one {kind}")
        return items
    return parse


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="meshsteg",
                     description="3D mesh steganalysis laboratory")
    parser.add_argument("--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("embed", help="embed payloads into a directory of covers")
    p.add_argument("covers_dir")
    p.add_argument("out_dir")
    p.add_argument("--variant", required=True, choices=("cho", "yang", "chao"))
    p.add_argument("--bits", type=int, default=64)
    p.add_argument("--alpha", type=float, default=0.04)
    p.add_argument("--delta-k", dest="delta_k", type=float, default=0.001)
    p.add_argument("--K", type=int, default=128)
    p.add_argument("--n-thr", dest="n_thr", type=int, default=20)
    p.add_argument("--layers", type=int, default=3)
    p.add_argument("--intervals", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=0)

    p = sub.add_parser("smooth", help="Laplacian-smooth one mesh")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--iterations", type=int, default=3)
    p.add_argument("--weight", type=float, default=0.3)

    p = sub.add_parser("extract", help="extract feature vectors for a corpus")
    p.add_argument("manifest")
    p.add_argument("output")
    p.add_argument("--set", default="lfs76", choices=sorted(FEATURE_SETS))
    p.add_argument("--iterations", type=int, default=3)
    p.add_argument("--weight", type=float, default=0.3)
    p.add_argument("--epsilon", type=float, default=DEFAULT_LOG_EPS)
    p.add_argument("--skip-missing", dest="skip_missing", action="store_true")
    p.add_argument("--jobs", type=int, default=0)

    p = sub.add_parser("train", help="train one classifier on a feature CSV")
    p.add_argument("features")
    p.add_argument("output")
    p.add_argument("--clf", required=True, choices=("qda", "svm", "fld"))
    p.add_argument("--svm-c", dest="svm_c", type=float, default=10.0)
    p.add_argument("--svm-gamma", dest="svm_gamma", type=float, default=2.0 ** -10)
    p.add_argument("--grid", action="store_true")
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("evaluate", help="repeated-split evaluation")
    p.add_argument("features")
    p.add_argument("out_dir")
    p.add_argument("--sets", type=_csv_list(set(FEATURE_SETS), "feature set"),
                   default=["yang40", "lfs52", "lfs76"])
    p.add_argument("--clf", type=_csv_list({"qda", "svm", "fld"}, "classifier"),
                   default=["qda", "svm", "fld"])
    p.add_argument("--trials", type=int, default=30)
    p.add_argument("--train", type=int, default=260)
    p.add_argument("--test", type=int, default=94)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--svm-c", dest="svm_c", type=float, default=10.0)
    p.add_argument("--svm-gamma", dest="svm_gamma", type=float, default=2.0 ** -10)
    p.add_argument("--grid", action="store_true")

    p = sub.add_parser("relevance", help="Pearson feature relevance table")
    p.add_argument("features")
    p.add_argument("output")

    p = sub.add_parser("rerun", help="re-execute a run from its config echo file")
    p.add_argument("config")
    return parser


_PATH_KEYS = {"covers_dir", "out_dir", "input", "output", "manifest", "features",
              "config"}


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    logging.basicConfig(stream=sys.stderr,
                        level=logging.DEBUG if ns.verbose else logging.INFO,
                        format="%(levelname)s %(message)s")
    args = {k: v for k, v in vars(ns).items() if k not in ("command", "verbose")}
    for key in _PATH_KEYS & set(args):
        args[key] = _abspath(args[key])
    handler = _HANDLERS.get(ns.command, cmd_rerun)
    try:
        return handler(args)
    except MeshStegError as exc:
        log.error("%s", exc)
        return DATA_EXIT


if __name__ == "__main__":
    sys.exit(main())
