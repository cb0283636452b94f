import json
import os

import numpy as np
import pytest

from meshsteg import normalize, read_feature_csv, save_off, write_feature_csv
from meshsteg.classifiers import load_model
from meshsteg.cli import main
from meshsteg.corpus import read_manifest
from meshsteg.synthetic import cover_corpus


@pytest.fixture(scope="module")
def covers_dir(tmp_path_factory):
    d = tmp_path_factory.mktemp("covers")
    for i, mesh in enumerate(cover_corpus(14, seed=77)):
        save_off(mesh, d / f"mesh{i:03d}.off")
    return d


@pytest.fixture(scope="module")
def corpus_dir(covers_dir, tmp_path_factory):
    out = tmp_path_factory.mktemp("corpus")
    rc = main(["embed", str(covers_dir), str(out), "--variant", "cho",
               "--bits", "16", "--seed", "5", "--jobs", "1"])
    assert rc == 0
    return out


@pytest.fixture(scope="module")
def features_csv(corpus_dir, tmp_path_factory):
    out = tmp_path_factory.mktemp("features") / "features.csv"
    rc = main(["extract", str(corpus_dir / "manifest.txt"), str(out),
               "--set", "lfs76", "--jobs", "1"])
    assert rc == 0
    return out


def test_embed_writes_manifest_and_echo(corpus_dir):
    entries = read_manifest(corpus_dir / "manifest.txt")
    assert len(entries) == 14
    for e in entries:
        assert (corpus_dir / e.cover_path).exists()
        assert (corpus_dir / e.stego_path).exists()
        assert e.variant == "cho_mean"
        assert "alpha=0.04" in e.params
    assert (corpus_dir / "config_echo.json").exists()


def test_embed_unknown_variant_is_usage_error(covers_dir, tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["embed", str(covers_dir), str(tmp_path), "--variant", "rot13"])
    assert exc.value.code == 1


def test_embed_empty_input_dir(tmp_path):
    empty = tmp_path / "empty"
    empty.mkdir()
    rc = main(["embed", str(empty), str(tmp_path / "out"), "--variant", "cho"])
    assert rc == 2


def test_extract_column_counts(features_csv):
    X, y = read_feature_csv(features_csv)
    assert X.shape == (28, 76)
    assert features_csv.read_text().splitlines()[0].count(",") == 76
    assert np.array_equal(y[0::2], np.zeros(14))
    assert np.array_equal(y[1::2], np.ones(14))


def test_extract_yang40_has_41_columns(corpus_dir, tmp_path):
    out = tmp_path / "yang40.csv"
    rc = main(["extract", str(corpus_dir / "manifest.txt"), str(out),
               "--set", "yang40", "--jobs", "1"])
    assert rc == 0
    assert out.read_text().splitlines()[0].count(",") == 40


def test_extract_missing_stego_reports_row(corpus_dir, tmp_path):
    manifest = (corpus_dir / "manifest.txt").read_text().splitlines()
    # relative mesh paths resolve against the manifest's own directory
    broken = corpus_dir / "broken_manifest.txt"
    rows = [line for line in manifest if not line.startswith("#")]
    rows[0] = rows[0].replace("stegos/", "missing/")
    broken.write_text("\n".join(rows) + "\n")
    out = tmp_path / "f.csv"
    rc = main(["extract", str(broken), str(out), "--jobs", "1"])
    assert rc == 2
    rc = main(["extract", str(broken), str(out), "--jobs", "1", "--skip-missing"])
    assert rc == 0
    X, _ = read_feature_csv(out)
    assert len(X) == 26   # one pair dropped


def test_extract_jobs_parallel_identical(corpus_dir, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["extract", str(corpus_dir / "manifest.txt"), str(a), "--jobs", "1"]) == 0
    assert main(["extract", str(corpus_dir / "manifest.txt"), str(b), "--jobs", "2"]) == 0
    assert a.read_bytes() == b.read_bytes()


@pytest.mark.parametrize("clf", ["qda", "svm", "fld"])
def test_train_writes_model(features_csv, tmp_path, clf):
    out = tmp_path / f"{clf}.model"
    rc = main(["train", str(features_csv), str(out), "--clf", clf, "--seed", "3"])
    assert rc == 0
    model = load_model(out)
    assert model.set_id == "lfs76"
    assert model.meta["seed"] == 3


def test_evaluate_and_rerun_bit_identical(features_csv, tmp_path):
    out1, out2 = tmp_path / "run1", tmp_path / "run2"
    rc = main(["evaluate", str(features_csv), str(out1),
               "--sets", "yang40,lfs76", "--clf", "qda,fld",
               "--trials", "3", "--train", "10", "--test", "4", "--seed", "11"])
    assert rc == 0
    echo = json.loads((out1 / "config_echo.json").read_text())
    assert echo["command"] == "evaluate"
    echo["args"]["out_dir"] = str(out2)
    moved = tmp_path / "echo_for_rerun.json"
    moved.write_text(json.dumps(echo))
    rc = main(["rerun", str(moved)])
    assert rc == 0
    for name in sorted(os.listdir(out1)):
        if name.endswith(".csv"):
            assert (out1 / name).read_bytes() == (out2 / name).read_bytes(), name


def test_evaluate_rejects_non_lfs76(tmp_path, rng):
    path = tmp_path / "small.csv"
    write_feature_csv(path, rng.normal(size=(8, 40)),
                      np.array([0, 1] * 4))
    rc = main(["evaluate", str(path), str(tmp_path / "out"),
               "--trials", "1", "--train", "3", "--test", "1"])
    assert rc == 2


def test_evaluate_plan_mismatch_is_data_error(features_csv, tmp_path):
    rc = main(["evaluate", str(features_csv), str(tmp_path / "out"),
               "--trials", "2", "--train", "200", "--test", "94"])
    assert rc == 2


def test_smooth_command(covers_dir, tmp_path):
    src = sorted(covers_dir.iterdir())[0]
    out = tmp_path / "smoothed.off"
    rc = main(["smooth", str(src), str(out), "--iterations", "3", "--weight", "0.3"])
    assert rc == 0
    from meshsteg import SmoothingParams, laplacian_smooth, load_mesh
    direct = laplacian_smooth(load_mesh(src), SmoothingParams(3, 0.3))
    assert np.abs(load_mesh(out).vertices - direct.vertices).max() < 1e-9


def test_relevance_command(features_csv, tmp_path):
    out = tmp_path / "relevance.csv"
    rc = main(["relevance", str(features_csv), str(out)])
    assert rc == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "feature,relevance"
    assert sum(1 for l in lines if l.startswith("f")) == 77   # header + 76 rows
    assert any(l.startswith("category,") for l in lines)


def test_missing_subcommand_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 1
