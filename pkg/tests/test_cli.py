import json
import os

import numpy as np
import pandas as pd
import pytest

from src.cli import main, ParsRun
from src.core import load_matrix, matrix_from_json, Purification
from src.bundle import curvature_hh, save_curve
from src.metric import bures_distance, bures_metric, fidelity_root


def test_verify_json(capsys):
    status = main(["verify", "--dim", "2", "--seed", "3", "--samples", "3"])
    captured = capsys.readouterr()
    assert status == 0
    report = json.loads(captured.out)
    assert report["dim"] == 2
    assert report["seed"] == 3
    assert report["samples"] == 3
    assert report["passed"] is True
    assert report["tolerance"] == 1e-10
    assert len(report["per_probe"]) == 3 * (4 + 3)


def test_verify_normalized_and_formats(capsys):
    status = main(
        ["verify", "--dim", "4", "--seed", "5", "--samples", "2", "--normalized", "--format", "csv"]
    )
    captured = capsys.readouterr()
    assert status == 0
    lines = captured.out.strip().splitlines()
    assert lines[0] == "dim,seed,sample,probe_id,residual,scale"
    assert len(lines) == 1 + 2 * (16 + 3)

    status = main(["verify", "--dim", "3", "--samples", "2", "--format", "human"])
    captured = capsys.readouterr()
    assert status == 0
    assert "PASSED" in captured.out
    assert "Verifying n=3" in captured.err


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_verify_failure_exit_status(capsys):
    status = main(["verify", "--dim", "3", "--samples", "2", "--tol", "1e-300"])
    captured = capsys.readouterr()
    assert status == 1
    assert json.loads(captured.out)["passed"] is False


def test_usage_errors(capsys):
    assert main(["verify", "--dim", "0"]) == 2
    captured = capsys.readouterr()
    assert "ValueError" in captured.err
    assert "usage" in captured.err

    assert main(["verify", "--cond-cap", "0.5"]) == 2
    assert main(["no_such_command"]) == 2
    assert main(["distance", "only_one_file.json"]) == 2
    assert main(["verify", "--format", "xml"]) == 2
    assert main(["--help"]) == 0


def test_run_parameters():
    config = ParsRun(cfg_file=False, command="metric", inputs=["a", "b", "c"])
    assert config.format == "json"

    with pytest.raises(ValueError):
        ParsRun(cfg_file=False, command="metric", inputs=["a"])
    with pytest.raises(ValueError):
        ParsRun(cfg_file=False, command="plot")
    with pytest.raises(ValueError):
        ParsRun(cfg_file=False, format="xml")


def test_distance(capsys, matrix_file):
    rho = matrix_file(np.diag([0.5, 0.5]), "rho.json")
    mu = matrix_file(np.diag([0.75, 0.25]), "mu.json")

    assert main(["distance", rho, rho]) == 0
    output = json.loads(capsys.readouterr().out)
    assert output["bures_distance"] < 1e-7
    assert abs(output["fidelity_root"] - 1) < 1e-14

    assert main(["distance", rho, mu]) == 0
    output = json.loads(capsys.readouterr().out)
    expected = bures_distance(np.diag([0.5, 0.5]), np.diag([0.75, 0.25]))
    assert abs(output["bures_distance"] - expected) < 1e-15
    assert abs(output["fidelity_root"] - 0.9659258263) < 1e-10

    assert main(["distance", rho, mu, "--format", "csv"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "bures_distance,fidelity_root"
    assert abs(float(lines[1].split(",")[0]) - expected) < 1e-15


def test_distance_input_errors(capsys, matrix_file, tmp_path):
    rho = matrix_file(np.diag([0.5, 0.5]), "rho.json")
    bad = matrix_file(np.diag([1.5, -0.5]), "bad.json")

    assert main(["distance", rho, bad]) == 2
    assert "NotPositiveDefinite" in capsys.readouterr().err

    unnormalized = matrix_file(np.diag([0.5, 0.6]), "unnormalized.json")
    assert main(["distance", rho, unnormalized]) == 2
    assert "NotNormalized" in capsys.readouterr().err

    missing = str(tmp_path / "missing.json")
    assert main(["distance", rho, missing]) == 2
    assert "FileNotFoundError" in capsys.readouterr().err

    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    assert main(["distance", rho, str(broken)]) == 2
    assert capsys.readouterr().out == ""


@pytest.mark.parametrize(
    "content",
    [
        [[1, 0], [0, 1]],
        {"dim": 1, "entries": 5},
        {"dim": 2, "entries": [[1, 0], [0, 1]]},
        {"dim": 1, "entries": [[[None, 0]]]},
        {"dim": 1, "entries": [[["1", 0]]]},
        {"dim": 1, "entries": [[5]]},
        {"dim": 1, "entries": [[[True, 0]]]},
        {"dim": "2", "entries": []},
        {"dim": 2, "entries": [[[1, 0]], [[0, 0], [1, 0]]]},
    ],
)
def test_malformed_matrix_files(content, capsys, matrix_file, tmp_path):
    rho = matrix_file(np.diag([0.5, 0.5]), "rho.json")
    bad = tmp_path / "malformed.json"
    bad.write_text(json.dumps(content))

    assert main(["distance", rho, str(bad)]) == 2
    captured = capsys.readouterr()
    assert captured.out == ""
    assert "Traceback" not in captured.err
    assert captured.err.split(":")[0] in ("ValueError", "DimensionMismatch")

    # curves hold matrix objects, so the same files fail there too
    curve = tmp_path / "curve.json"
    curve.write_text(json.dumps([content]))
    assert main(["transport", str(curve), rho]) == 2


def test_metric(capsys, matrix_file, density_factory, hermitian_factory):
    d = density_factory(n=3, seed=1)
    x = hermitian_factory(n=3, seed=2, traceless=True)
    y = hermitian_factory(n=3, seed=3, traceless=True)
    files = [matrix_file(d, "d.json"), matrix_file(x, "x.json"), matrix_file(y, "y.json")]

    assert main(["metric", *files]) == 0
    output = json.loads(capsys.readouterr().out)
    expected = bures_metric(load_matrix(files[0]), load_matrix(files[1]), load_matrix(files[2]))
    assert abs(output["bures_metric"] - expected) < 1e-15 * max(1.0, abs(expected))

    assert main(["metric", *files, "--format", "human"]) == 0
    assert capsys.readouterr().out.startswith("bures_metric: ")


def test_curvature(capsys, matrix_file, purification_factory, hermitian_factory):
    w = purification_factory(n=3, seed=4)
    g = hermitian_factory(n=3, seed=5)
    g_prime = hermitian_factory(n=3, seed=6)
    files = [matrix_file(w, "w.json"), matrix_file(g, "g.json"), matrix_file(g_prime, "gp.json")]

    assert main(["curvature", *files]) == 0
    value = matrix_from_json(json.loads(capsys.readouterr().out))
    expected = curvature_hh(Purification(load_matrix(files[0])), load_matrix(files[1]), load_matrix(files[2]))
    assert value.shape == (3, 3)
    assert np.allclose(value, expected, rtol=0, atol=1e-14 * max(1.0, np.linalg.norm(expected)))

    # a non hermitian generator is an input error
    bad = matrix_file(np.array([[0.0, 1.0], [0.0, 0.0]]), "bad.json")
    assert main(["curvature", files[0], bad, files[2]]) == 2
    assert "NotHermitian" in capsys.readouterr().err


def test_transport(capsys, matrix_file, tmp_path):
    states = [np.diag([p, 1 - p]) for p in (0.5, 0.55, 0.6, 0.55, 0.5)]
    curve_file = str(tmp_path / "loop.json")
    save_curve(states, curve_file)
    w0 = np.diag(np.sqrt([0.5, 0.5]))
    start = matrix_file(w0, "w0.json")

    assert main(["transport", curve_file, start]) == 0
    output = json.loads(capsys.readouterr().out)
    assert output["steps"] == 4
    assert output["closed"] is True
    assert np.allclose(matrix_from_json(output["final"]), w0, atol=1e-10)
    assert np.allclose(matrix_from_json(output["holonomy"]), np.eye(2), atol=1e-10)

    # a single point curve returns the start point and is trivially closed
    single = str(tmp_path / "single.json")
    save_curve(states[:1], single)
    assert main(["transport", single, start]) == 0
    output = json.loads(capsys.readouterr().out)
    assert output["steps"] == 0
    assert np.array_equal(matrix_from_json(output["final"]), w0)

    # an open curve has no holonomy
    open_curve = str(tmp_path / "open.json")
    save_curve(states[:3], open_curve)
    assert main(["transport", open_curve, start]) == 0
    output = json.loads(capsys.readouterr().out)
    assert output["closed"] is False
    assert output["holonomy"] is None


def test_output_file(capsys, matrix_file, tmp_path, monkeypatch):
    rho = matrix_file(np.diag([0.5, 0.5]), "rho.json")
    mu = matrix_file(np.diag([0.75, 0.25]), "mu.json")

    folder = tmp_path / "results"
    monkeypatch.setenv("BYM_OUT_DIR", str(folder))
    assert main(["distance", rho, mu, "--out", "distance.json"]) == 0
    assert capsys.readouterr().out == ""

    filename = os.path.join(folder, "distance.json")
    with open(filename) as file:
        output = json.load(file)
    assert abs(output["fidelity_root"] - fidelity_root(np.diag([0.5, 0.5]), np.diag([0.75, 0.25]))) < 1e-15

    # absolute paths ignore the folder
    absolute = str(tmp_path / "report.csv")
    assert main(["verify", "--samples", "2", "--format", "csv", "--out", absolute]) == 0
    df = pd.read_csv(absolute)
    assert list(df.columns) == ["dim", "seed", "sample", "probe_id", "residual", "scale"]
    assert len(df) == 2 * 7
