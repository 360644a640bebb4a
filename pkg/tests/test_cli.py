import csv
import json

import numpy as np
import pytest

from limitroots.main import EXIT_COMPUTATION, EXIT_OK, EXIT_USAGE, run_cli


def _error(capsys):
    err = capsys.readouterr().err.strip().splitlines()
    return json.loads(err[-1])


def test_enum_writes_csv(tmp_path):
    out = tmp_path / "roots.csv"
    assert run_cli(["enum", "--spec", "a2", "--max-depth", "3", "--out", str(out)]) == EXIT_OK
    with open(out, newline="") as f:
        rows = list(csv.DictReader(f))
    assert [int(r["depth"]) for r in rows] == [1, 1, 2]
    assert all(abs(float(r["q_residual"])) <= 1e-12 for r in rows)
    assert rows[2]["c0"] == rows[2]["c1"] == "1.0"


def test_limits_json_to_stdout(capsys):
    assert run_cli(["limits", "--spec", "g533", "--mode", "e2", "--max-depth", "4"]) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert data["mode"] == "e2"
    assert data["rank"] == 3
    assert data["count"] == len(data["points"]) > 0
    assert data["experimental"] is False
    for point in data["points"]:
        assert abs(point["q"]) <= 1e-9
        assert point["source"] == "pair"
        assert sum(point["barycentric"]) == pytest.approx(1.0)


def test_limits_csv(capsys):
    args = ["limits", "--spec", "dihedral_101", "--mode", "e2circ", "--max-depth", "6", "--format", "csv"]
    assert run_cli(args) == EXIT_OK
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "mode,b0,b1,q,source"
    assert len(lines) > 1


def test_limits_f0_is_experimental(capsys):
    args = ["limits", "--spec", "g533", "--mode", "f0", "--orbit-length", "1"]
    assert run_cli(args) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert data["experimental"] is True
    assert data["count"] > 0


def test_classify_hyperbolic(capsys):
    assert run_cli(["classify", "--spec", "g237"]) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report["signature"] == [2, 1, 0]
    assert report["form_type"] == "hyperbolic"
    assert report["hyperbolic"] is True
    assert report["radical_cone_trivial"] is True
    assert report["kappa"] is None


def test_classify_affine_with_enumeration(capsys):
    args = ["classify", "--spec", "a2_affine", "--enumerate", "--max-depth", "5", "--tol", "1e-8"]
    assert run_cli(args) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report["form_type"] == "affine"
    assert report["radical_point"] == pytest.approx([1 / 3, 1 / 3, 1 / 3])
    assert report["level_counts"][0] == 3
    assert report["kappa"] == pytest.approx(0.5)


def test_audit_passes(capsys):
    args = ["audit", "--spec", "dihedral_affine", "--max-depth", "12", "--trials", "100"]
    assert run_cli(args) == EXIT_OK
    captured = capsys.readouterr()
    report = json.loads(captured.out)
    assert {s["name"] for s in report["suites"]} >= {"residual_identity", "depth_norm", "rank2_ordering"}
    assert all(s["violations"] == 0 for s in report["suites"])
    assert "0 violations" in captured.err


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["limits", "--spec", "a2", "--mode", "bogus"],
        ["enum", "--spec", "a2", "--max-depth", "0"],
        ["enum"],
        ["classify", "--spec", "a2", "--tol", "0.5"],
    ],
)
def test_usage_errors(capsys, argv):
    assert run_cli(argv) == EXIT_USAGE
    assert _error(capsys)["error"] == "UsageError"


def test_unknown_preset(capsys):
    assert run_cli(["enum", "--spec", "no_such_system"]) == EXIT_USAGE
    assert _error(capsys)["error"] == "UnknownSystem"


def test_invalid_spec_file(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"rank": 2, "labels": [[1, 3], [4, 1]]}))
    assert run_cli(["classify", "--spec", str(path)]) == EXIT_USAGE
    assert _error(capsys)["error"] == "ValidationError"


def test_spec_file_path(tmp_path, capsys):
    path = tmp_path / "mine.json"
    path.write_text(json.dumps({"rank": 2, "labels": [[1, 0], [0, 1]]}))
    assert run_cli(["classify", "--spec", str(path)]) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report["system"] == "mine"
    assert report["form_type"] == "affine"


def test_render_rank_five_fails(capsys):
    args = ["render", "--spec", "cex5", "--mode", "none", "--max-depth", "3"]
    assert run_cli(args) == EXIT_COMPUTATION
    assert _error(capsys)["error"] == "UnsupportedRank"


def test_hyperplane_errors(capsys):
    assert run_cli(["limits", "--spec", "a2", "--hyperplane", "custom:1,-1"]) == EXIT_COMPUTATION
    assert _error(capsys)["error"] == "NotPositivelyIndependent"

    assert run_cli(["limits", "--spec", "a2", "--hyperplane", "sideways"]) == EXIT_USAGE
    assert _error(capsys)["error"] == "UsageError"


def test_numerical_failure_is_a_computation_error(capsys, monkeypatch):
    def singular(*args, **kwargs):
        raise np.linalg.LinAlgError("Singular matrix")

    monkeypatch.setattr("limitroots.main.e2_circ_points", singular)
    assert run_cli(["limits", "--spec", "g533", "--max-depth", "3"]) == EXIT_COMPUTATION
    assert _error(capsys)["error"] == "LinAlgError"


def test_unreadable_spec_file(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    assert run_cli(["classify", "--spec", str(path)]) == EXIT_USAGE
    assert _error(capsys)["error"] == "UsageError"


def test_render_svg_and_data(tmp_path):
    svg_path = tmp_path / "g533.svg"
    data_path = tmp_path / "g533.csv"
    args = [
        "render", "--spec", "g533", "--max-depth", "5", "--mode", "e2circ",
        "--out", str(svg_path), "--data", str(data_path),
    ]
    assert run_cli(args) == EXIT_OK
    assert svg_path.read_text().startswith("<?xml")
    header = data_path.read_text().splitlines()[0]
    assert header == "layer,b0,b1,b2"


def test_enum_normalized(tmp_path):
    out = tmp_path / "normalized.csv"
    args = ["enum", "--spec", "dihedral_affine", "--max-depth", "3", "--normalized", "--out", str(out)]
    assert run_cli(args) == EXIT_OK
    with open(out, newline="") as f:
        rows = list(csv.DictReader(f))
    assert len(rows) == 6
    simple = [r for r in rows if r["depth"] == "1"]
    assert {(r["b0"], r["b1"]) for r in simple} == {("1.0", "0.0"), ("0.0", "1.0")}
    assert all(float(r["abs_q"]) <= 1.0 for r in rows)


def test_render_exact_layer_and_lines(tmp_path):
    data_path = tmp_path / "a2_affine.csv"
    args = [
        "render", "--spec", "a2_affine", "--max-depth", "3", "--mode", "none", "--exact",
        "--line", "0,1", "--out", str(tmp_path / "a2_affine.svg"), "--data", str(data_path),
    ]
    assert run_cli(args) == EXIT_OK
    with open(data_path, newline="") as f:
        exact = [r for r in csv.DictReader(f) if r["layer"] == "exact"]
    assert len(exact) == 1
    assert [float(exact[0][f"b{i}"]) for i in range(3)] == pytest.approx([1 / 3] * 3)


@pytest.mark.parametrize("line", ["0", "0,x", "0,999"])
def test_render_bad_line(tmp_path, capsys, line):
    args = ["render", "--spec", "g533", "--max-depth", "2", "--line", line, "--out", str(tmp_path / "x.svg")]
    assert run_cli(args) == EXIT_USAGE
    assert _error(capsys)["error"] == "UsageError"
