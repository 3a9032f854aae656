import math

import numpy as np
import pytest

from georecon import io


def test_cloud_round_trip_is_exact(tmp_path):
    rng = np.random.default_rng(0)
    P = rng.standard_normal((25, 2)) * np.array([1e-8, 1e8])
    path = tmp_path / "c.csv"
    io.write_cloud(path, P)
    assert np.array_equal(io.read_cloud(path).points, P)


def test_cloud_skips_comments_and_blank_lines(tmp_path):
    path = tmp_path / "c.csv"
    path.write_text("# header\n0,1\n\n  # note\n2.5,3\n")
    assert io.read_cloud(path).points.tolist() == [[0.0, 1.0], [2.5, 3.0]]


@pytest.mark.parametrize("text", ["0,1\n1\n", "a,b\n", "", "0,nan\n", "0,inf\n"])
def test_malformed_clouds(tmp_path, text):
    path = tmp_path / "bad.csv"
    path.write_text(text)
    with pytest.raises(io.FormatError):
        io.read_cloud(path)


def test_metric_round_trip_with_infinity(tmp_path):
    M = np.array([[0.0, 0.1 + 0.2], [0.1 + 0.2, 0.0]])
    M = np.block([[M, np.full((2, 1), math.inf)], [np.full((1, 2), math.inf), np.zeros((1, 1))]])
    path = tmp_path / "m.csv"
    io.write_metric(path, M)
    assert "inf" in path.read_text()
    assert np.array_equal(io.read_metric(path), M)
    path.write_text("0,1\n1,0,2\n")
    with pytest.raises(io.FormatError):
        io.read_metric(path)


def test_json(tmp_path):
    path = tmp_path / "d.json"
    io.write_json(path, {"b": [1, 2], "a": 0.1})
    assert path.read_text().index('"a"') < path.read_text().index('"b"')
    assert io.read_json(path) == {"a": 0.1, "b": [1, 2]}
    with pytest.raises(ValueError):
        io.write_json(path, {"x": math.nan})
    path.write_text("{oops")
    with pytest.raises(io.FormatError):
        io.read_json(path)
