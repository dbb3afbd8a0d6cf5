import json

import numpy as np
import pytest

from dualalpha.cli import EXIT_MISMATCH, EXIT_OK, EXIT_USAGE, main
from dualalpha.sampling import circle_points


def _csv(path, coords):
    np.savetxt(path, np.asarray(coords, dtype=float).reshape(len(coords), -1), delimiter=",", fmt="%.17g")
    return str(path)


@pytest.fixture
def collinear(tmp_path):
    return _csv(tmp_path / "line.csv", [0.0, 1.0, 2.0])


def test_build_collinear(collinear, tmp_path):
    out = tmp_path / "line.alpha"
    assert main(["build", "--points", collinear, "--radius", "1", "--dim", "2", "--out", str(out)]) == EXIT_OK
    assert out.read_text() == (
        "#alpha v1\n#ambient 1\n#a1 1\n"
        "0 0 0\n0 0 1\n0 0 2\n1 0.25 0 1\n1 0.25 1 2\n"
    )


def test_radius_equals_alpha_squared(collinear, capsys):
    main(["build", "--points", collinear, "--radius", "0.5", "--dim", "1"])
    by_radius = capsys.readouterr().out
    main(["build", "--points", collinear, "--alpha", "0.25", "--dim", "1"])
    assert capsys.readouterr().out == by_radius


def test_betti_on_circle(tmp_path, capsys):
    pts = _csv(tmp_path / "circle.csv", circle_points(60))
    code = main(["betti", "--points", pts, "--radius", "0.2", "--prime", "2", "--upto", "1"])
    assert code == EXIT_OK
    assert capsys.readouterr().out == "1\n1\n"


def test_graph_edges(collinear, capsys):
    assert main(["graph", "--points", collinear, "--alpha", "0.25"]) == EXIT_OK
    assert capsys.readouterr().out == "0 1\n1 2\n"


def test_verify_random_points(tmp_path, capsys):
    rng = np.random.default_rng(15)
    pts = _csv(tmp_path / "rand.csv", rng.uniform(-1, 1, size=(15, 2)))
    assert main(["verify", "--points", pts, "--alpha", "0.15", "--dim", "2"]) == EXIT_OK
    assert "OK: complexes identical" in capsys.readouterr().out


def test_verify_reports_mismatch(tmp_path, capsys, monkeypatch):
    from dualalpha import cli
    from dualalpha.complex import FilteredComplex

    pts = _csv(tmp_path / "tri.csv", [[0.0, 0.0], [1.0, 0.0], [0.5, 0.8]])
    real = cli.brute_alpha
    monkeypatch.setattr(cli, "brute_alpha", lambda points, d, tol: (FilteredComplex(), real(points, d, tol)[1]))
    assert main(["verify", "--points", pts, "--alpha", "1", "--dim", "2"]) == EXIT_MISMATCH
    assert "MISMATCH" in capsys.readouterr().out


def test_verify_size_cap(tmp_path):
    pts = _csv(tmp_path / "big.csv", np.random.default_rng(0).uniform(size=(30, 2)))
    assert main(["verify", "--points", pts, "--alpha", "0.1"]) == EXIT_USAGE


@pytest.mark.parametrize(
    "extra",
    [
        ["--alpha", "1", "--radius", "1"],
        [],
        ["--alpha", "1", "--bogus"],
        ["--radius", "-1"],
    ],
)
def test_usage_errors(collinear, extra):
    assert main(["build", "--points", collinear, "--dim", "1", *extra]) == EXIT_USAGE


def test_radius_rejected_with_weights(collinear, tmp_path):
    w = tmp_path / "w.txt"
    w.write_text("0\n0\n0\n")
    assert main(["build", "--points", collinear, "--weights", str(w), "--radius", "1", "--dim", "1"]) == EXIT_USAGE


def test_bad_points_file(tmp_path, capsys):
    f = tmp_path / "bad.csv"
    f.write_text("0,0\n1\n")
    assert main(["build", "--points", str(f), "--alpha", "1", "--dim", "1"]) == EXIT_USAGE
    assert "bad.csv:2" in capsys.readouterr().err


def test_non_prime(collinear):
    assert main(["betti", "--points", collinear, "--alpha", "1", "--prime", "4"]) == EXIT_USAGE


def test_threads_do_not_change_output(tmp_path):
    pts = _csv(tmp_path / "r.csv", np.random.default_rng(2).uniform(-1, 1, size=(40, 3)))
    outs = []
    for t in ("1", "8"):
        out = tmp_path / f"t{t}.alpha"
        main(["build", "--points", pts, "--alpha", "0.2", "--dim", "3", "--threads", t, "--witness", "--out", str(out)])
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_export_geom_and_stats(tmp_path, capsys):
    pts = _csv(tmp_path / "tri.csv", [[0.0, 0.0], [1.0, 0.0], [0.5, 0.8660254037844386]])
    cx = tmp_path / "tri.alpha"
    assert main(["build", "--points", pts, "--alpha", "0.4", "--dim", "2", "--witness", "--out", str(cx)]) == EXIT_OK

    off = tmp_path / "tri.off"
    assert main(["export-geom", "--complex", str(cx), "--out", str(off)]) == EXIT_OK
    lines = off.read_text().splitlines()
    assert lines[0] == "OFF"
    assert lines[1] == "7 18 0"  # 12 segments + 6 triangles

    capsys.readouterr()
    assert main(["stats", "--complex", str(cx), "--vertex", "0"]) == EXIT_OK
    summary = json.loads(capsys.readouterr().out)
    assert summary["sizes"] == [3, 3, 1]
    assert summary["euler_characteristic"] == 1
    assert summary["star_sizes"] == [1, 2, 1]
    assert summary["max_weight"] == pytest.approx(1 / 3)


def test_export_geom_needs_witnesses(collinear, tmp_path):
    cx = tmp_path / "plain.alpha"
    main(["build", "--points", collinear, "--alpha", "1", "--dim", "1", "--out", str(cx)])
    assert main(["export-geom", "--complex", str(cx), "--out", str(tmp_path / "x.off")]) == EXIT_USAGE


def test_graph_edges_to_file(collinear, tmp_path, capsys):
    out = tmp_path / "edges.txt"
    assert main(["graph", "--points", collinear, "--alpha", "0.25", "--out", str(out)]) == EXIT_OK
    assert out.read_text() == "0 1\n1 2\n"
    assert capsys.readouterr().out == ""


def test_betti_over_odd_prime(tmp_path, capsys):
    pts = _csv(tmp_path / "circle.csv", circle_points(60))
    assert main(["betti", "--points", pts, "--radius", "0.2", "--prime", "3", "--upto", "1"]) == EXIT_OK
    assert capsys.readouterr().out == "1\n1\n"


def test_betti_prime_is_validated(collinear, capsys, monkeypatch):
    from dualalpha import cli

    monkeypatch.setattr(cli, "build_alpha", lambda *a, **k: pytest.fail("built before validating --prime"))
    assert main(["betti", "--points", collinear, "--alpha", "1", "--prime", "6"]) == EXIT_USAGE
    assert "prime" in capsys.readouterr().err
