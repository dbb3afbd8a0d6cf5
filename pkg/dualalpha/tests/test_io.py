import numpy as np
import pytest

from dualalpha.cech import build_cech_graph
from dualalpha.complex import ComplexError, FilteredComplex, barycentric_embed
from dualalpha.io import (
    ComplexFormatError,
    PointsFormatError,
    format_complex,
    format_edges,
    format_off,
    format_real,
    parse_complex,
    parse_points,
    read_complex,
    write_complex,
)


def test_parse_line_points(tmp_path):
    f = tmp_path / "pts.csv"
    f.write_text("0\n1\n2\n")
    pts = parse_points(f)
    assert pts.coords.shape == (3, 1)
    assert pts.power.tolist() == [0.0, 0.0, 0.0]


def test_parse_triangle_with_weights(tmp_path):
    f = tmp_path / "pts.csv"
    f.write_text("0,0\n1,0\n0.5,0.8660254\n")
    w = tmp_path / "w.txt"
    w.write_text("3\n1\n0\n")
    pts = parse_points(f, w, a1=0.5)
    assert pts.coords[2].tolist() == [0.5, 0.8660254]
    assert pts.power.tolist() == [3.0, 1.0, 0.0]
    assert pts.a1 == 0.5


def test_blank_and_comment_lines_keep_line_numbers(tmp_path):
    f = tmp_path / "pts.csv"
    f.write_text("# header\n0,0\n\n1,x\n")
    with pytest.raises(PointsFormatError, match=r"pts.csv:4: field 2"):
        parse_points(f)


def test_ragged_rows(tmp_path):
    f = tmp_path / "pts.csv"
    f.write_text("0,0\n1,0\n1,2,3\n")
    with pytest.raises(PointsFormatError, match=r":3: expected 2 fields, found 3"):
        parse_points(f)


@pytest.mark.parametrize("text", ["0 0\n1 0\n0.5 2\n", "0\t0\n1   0\n0.5\t 2\n", "0, 0\n1 ,0\n0.5,2\n"])
def test_whitespace_and_comma_separators(tmp_path, text):
    f = tmp_path / "pts.txt"
    f.write_text(text)
    assert parse_points(f).coords.tolist() == [[0.0, 0.0], [1.0, 0.0], [0.5, 2.0]]


def test_empty_field_is_reported(tmp_path):
    f = tmp_path / "pts.csv"
    f.write_text("0,0,0\n1,,0\n")
    with pytest.raises(PointsFormatError, match=r"pts.csv:2: field 2 is not a finite number: ''"):
        parse_points(f)


def test_weights_length_mismatch(tmp_path):
    f = tmp_path / "pts.csv"
    f.write_text("0\n1\n")
    w = tmp_path / "w.txt"
    w.write_text("3\n")
    with pytest.raises(PointsFormatError, match="1 weights for 2 points"):
        parse_points(f, w)


def test_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        parse_points(tmp_path / "nope.csv")


def test_mesh_vertices(tmp_path):
    f = tmp_path / "tri.off"
    f.write_text("OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 2\n")
    pts = parse_points(f)
    assert pts.coords.shape == (3, 3)


@pytest.mark.parametrize("v, s", [(0.25, "0.25"), (-0.0, "0"), (0.1, "0.10000000000000001"), (1e-20, "9.9999999999999995e-21")])
def test_format_real(v, s):
    assert format_real(v) == s


def test_empty_complex_is_header_only():
    assert format_complex(FilteredComplex(), {}, 2, 0.04) == "#alpha v1\n#ambient 2\n#a1 0.040000000000000001\n"


def test_complex_round_trip(tmp_path):
    cx = FilteredComplex({(0,): 0.0, (1,): -0.1, (2,): 0.0, (0, 1): 0.3, (1, 2): 1 / 3, (0, 1, 2): 0.7})
    rng = np.random.default_rng(0)
    wit = {s: rng.normal(size=2) for s in cx}
    path = tmp_path / "x.alpha"
    write_complex(cx, wit, path, ambient=2, a1=0.7)
    back = read_complex(path)
    assert back.complex == cx
    assert back.ambient == 2 and back.a1 == 0.7
    assert back.has_witnesses
    for s in cx:
        assert back.witness[s].tolist() == wit[s].tolist()
    assert format_complex(back.complex, back.witness, 2, 0.7) == path.read_text()


def test_complex_without_witnesses():
    cx = FilteredComplex.closure([(0, 1)], 0.5)
    back = parse_complex(format_complex(cx, None, 3, 1.0))
    assert back.complex == cx
    assert not back.has_witnesses


@pytest.mark.parametrize(
    "text, match",
    [
        ("0 0 1\n", "header"),
        ("#alpha v1\n#ambient 2\n1 0.5 0\n", ":3:"),
        ("#alpha v1\n#ambient 2\n0 0 0 1.0\n", "witness has 1"),
        ("#alpha v1\n#ambient x\n", "bad #ambient"),
        ("#alpha v1\n0 abc 0\n", ":2:"),
    ],
)
def test_complex_format_errors(text, match):
    with pytest.raises(ComplexFormatError, match=match):
        parse_complex(text)


def test_missing_witness_on_write():
    with pytest.raises(ComplexError):
        format_complex(FilteredComplex({(0,): 0.0}), {}, 1, 0.0)


def test_edge_list():
    from dualalpha.cech import WeightedPoints

    g = build_cech_graph(WeightedPoints(np.array([[0.0], [1.0], [5.0], [5.5]]), None, 0.5))
    assert format_edges(g) == "0 1\n2 3\n"


def test_off_export_of_edge():
    cx = FilteredComplex.closure([(0, 1)])
    wit = {(0,): np.array([0.0, 0.0]), (1,): np.array([2.0, 0.0]), (0, 1): np.array([1.0, 0.0])}
    off = format_off(barycentric_embed(cx, wit, 1)).splitlines()
    assert off[:2] == ["OFF", "3 2 0"]
    assert off[2:5] == ["0 0 0", "2 0 0", "1 0 0"]
    assert sorted(off[5:]) == ["2 0 2", "2 1 2"]


def test_off_export_rejects_high_dimension():
    cx = FilteredComplex({(0,): 0.0})
    emb = barycentric_embed(cx, {(0,): np.zeros(4)}, 1)
    with pytest.raises(ValueError):
        format_off(emb)
