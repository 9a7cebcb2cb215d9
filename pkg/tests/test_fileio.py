import numpy as np
import pytest

from hyperjl.fileio import FormatError, read_pointset, write_pointset
from hyperjl.geometry import PointSet
from hyperjl.harness import gen_random


def test_read_csv_example(tmp_path):
    path = tmp_path / "pts.csv"
    path.write_text("z,x1\n1.0,0.0\n2.718281828,0.0\n")
    ps = read_pointset(path)
    assert len(ps) == 2 and ps.dim == 1
    assert ps.z.tolist() == [1.0, 2.718281828]


@pytest.mark.parametrize(
    "body, match",
    [
        ("z,x1\n1.0,0.0\n0.0,1.0\n", "line 3"),
        ("z,x1\n1.0,0.0\n2.0,1.0,3.0\n", "line 3"),
        ("z,x1\n1.0,abc\n", "line 2"),
        ("z,x1\n1.0,nan\n", "non-finite"),
        ("z,y1\n1.0,0.0\n", "header"),
        ("z,x1\n", "no points"),
        ("", "empty"),
    ],
)
def test_read_csv_errors(tmp_path, body, match):
    path = tmp_path / "bad.csv"
    path.write_text(body)
    with pytest.raises(FormatError, match=match):
        read_pointset(path)


@pytest.mark.parametrize(
    "body, match",
    [
        ('{"z": 1.0, "x": [0.0]}\n{"z": -1, "x": [0.0]}\n', "line 2"),
        ('{"z": 1.0, "x": [0.0]}\n{"z": 1, "x": [0.0, 1.0]}\n', "line 2"),
        ('{"z": 1.0, "x": [0.0]\n', "line 1"),
        ('{"z": 1.0}\n', "line 1"),
        ('{"z": 1.0, "x": []}\n', "line 1"),
        ('{"z": true, "x": [1]}\n', "line 1"),
    ],
)
def test_read_jsonl_errors(tmp_path, body, match):
    path = tmp_path / "bad.jsonl"
    path.write_text(body)
    with pytest.raises(FormatError, match=match):
        read_pointset(path)


@pytest.mark.parametrize("fmt", ["csv", "jsonl"])
def test_round_trip(tmp_path, fmt):
    ps = gen_random(25, 7, seed=4, z_spread=3.0, x_spread=1e-5)
    path = tmp_path / f"pts.{fmt}"
    write_pointset(ps, path)
    assert read_pointset(path) == ps


def test_formats_agree(tmp_path):
    ps = gen_random(10, 3, seed=1)
    write_pointset(ps, tmp_path / "a.csv")
    write_pointset(ps, tmp_path / "a.jsonl")
    assert read_pointset(tmp_path / "a.csv") == read_pointset(tmp_path / "a.jsonl")


def test_explicit_format_overrides_extension(tmp_path):
    ps = gen_random(3, 2, seed=0)
    write_pointset(ps, tmp_path / "data.txt", "jsonl")
    assert read_pointset(tmp_path / "data.txt", "jsonl") == ps
    with pytest.raises(ValueError):
        write_pointset(ps, tmp_path / "x", "parquet")


def test_zero_dimensional_x_never_constructed():
    with pytest.raises(ValueError):
        PointSet([1.0], np.empty((1, 0)))
