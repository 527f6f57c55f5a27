import math

import numpy as np
import pytest

from simplexlearn import io
from simplexlearn.errors import DimensionError
from simplexlearn.sampling import random_simplex, sample_uniform


def test_fmt():
    assert io.fmt(True) == "1" and io.fmt(False) == "0"
    assert io.fmt(np.int64(7)) == "7"
    assert io.fmt(math.nan) == "nan" and io.fmt(-math.inf) == "-inf"
    assert float(io.fmt(0.1)) == 0.1
    assert io.fmt("ok") == "ok"


def test_simplex_round_trip_is_exact(tmp_path):
    for k in (1, 2, 5):
        s = random_simplex(k, "gaussian", scale=3.7, seed=k)
        io.write_simplex(tmp_path / "s.json", s)
        back = io.read_simplex(tmp_path / "s.json")
        assert back == s
        assert np.max(np.abs(back.vertices - s.vertices)) <= 1e-12
    obj = io.read_json(tmp_path / "s.json")
    assert obj["k"] == 5 and len(obj["vertices"]) == 6


def test_dataset_round_trip(tmp_path):
    d = sample_uniform(random_simplex(3, seed=1), 50, seed=2)
    io.write_dataset(tmp_path / "d.csv", d)
    assert np.array_equal(io.read_dataset(tmp_path / "d.csv").points, d.points)
    assert (tmp_path / "d.csv").read_text().splitlines()[0] == "x0,x1,x2"


def test_headerless_and_commented_csv(tmp_path):
    p = tmp_path / "m.csv"
    p.write_text("# comment\n1,2\n3,4.5\n")
    data, header = io.read_matrix_csv(p)
    assert header is None
    assert data.tolist() == [[1.0, 2.0], [3.0, 4.5]]


@pytest.mark.parametrize("text", ["", "a,b\n", "1,2\n3\n", "1,x\n2,3\n"])
def test_malformed_csv(tmp_path, text):
    p = tmp_path / "bad.csv"
    p.write_text(text)
    with pytest.raises(io.FileFormatError):
        io.read_matrix_csv(p)


@pytest.mark.parametrize("text", ["not json", '{"k": 2}', '{"k": 2, "vertices": [[0, 0], [1, 0]]}',
                                  '{"k": 1, "vertices": [[0, 1], [1, 0]]}'])
def test_malformed_simplex(tmp_path, text):
    p = tmp_path / "bad.json"
    p.write_text(text)
    with pytest.raises(io.FileFormatError):
        io.read_simplex(p)


def test_table_round_trip(tmp_path):
    p = tmp_path / "t.csv"
    io.write_table(p, ("a", "b", "status"), [(1, 0.25, "ok"), (2, math.nan, "Err")], ["mean=1", "x=2"])
    header, rows, summary = io.read_table(p)
    assert header == ["a", "b", "status"]
    assert rows == [["1", "0.25", "ok"], ["2", "nan", "Err"]]
    assert summary == ["mean=1", "x=2"]
    with pytest.raises(DimensionError):
        io.write_table(p, ("a",), [(1, 2)])
    p.write_text("# only\n")
    with pytest.raises(io.FileFormatError):
        io.read_table(p)


def test_json_handles_numpy(tmp_path):
    io.write_json(tmp_path / "r.json", {"a": np.float64(0.1), "b": np.arange(3), "c": (np.bool_(True),)})
    assert io.read_json(tmp_path / "r.json") == {"a": 0.1, "b": [0, 1, 2], "c": [True]}
    (tmp_path / "x.json").write_text("{")
    with pytest.raises(io.FileFormatError):
        io.read_json(tmp_path / "x.json")
