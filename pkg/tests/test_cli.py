import json
import shutil
import subprocess
import sys

import numpy as np
import pytest

from georecon import io
from georecon.cli import main


@pytest.fixture
def square_cloud(tmp_path):
    path = tmp_path / "square.csv"
    io.write_cloud(path, np.array([[0.0, 0], [1, 0], [1, 1], [0, 1]]))
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_sample_writes_cloud_and_bound(tmp_path, capsys):
    out = tmp_path / "c.csv"
    code, text, _ = run(capsys, "sample", "--shape", "circle", "--n", "40", "--out", str(out))
    assert code == 0
    assert text.startswith("dH_bound ")
    assert io.read_cloud(out).points.shape == (40, 2)
    code, text, err = run(capsys, "sample", "--shape", "circle", "--n", "5")
    assert len(text.splitlines()) == 5 and err.startswith("dH_bound")


def test_sample_rejects_foreign_shape_flag(capsys):
    code, _, err = run(capsys, "sample", "--shape", "circle", "--a", "2", "--n", "5")
    assert code == 64 and "--a" in err


def test_persist_square_barcode(square_cloud, capsys):
    code, out, _ = run(capsys, "persist", "--cloud", square_cloud, "--alpha-max", "2")
    assert code == 0
    assert "1 1.0 1.4142135623730951" in out.splitlines()
    assert run(capsys, "persist", "--cloud", square_cloud, "--alpha-max", "2",
               "--query", "1", "1.2", "1.3")[1] == "1\n"
    assert run(capsys, "persist", "--cloud", square_cloud, "--alpha-max", "2",
               "--query", "1", "0.5", "1.3")[1] == "0\n"


def test_theorem_preconditions_run_first(square_cloud, capsys):
    code, out, err = run(capsys, "persist", "--cloud", square_cloud, "--theorem", "rips",
                         "--eps", "0.1", "--dh", "0.5", "--delta", "1", "--rho", "1")
    assert code == 2
    assert "beta" not in out and err.strip()


def test_rips_and_betti(square_cloud, tmp_path, capsys):
    k = tmp_path / "k.json"
    code, out, _ = run(capsys, "rips", "--cloud", square_cloud, "--alpha", "1", "--out", str(k))
    assert code == 0 and "simplices1 4" in out
    assert run(capsys, "betti", "--complex", str(k))[1] == "beta0 1\nbeta1 1\n"
    code, out, _ = run(capsys, "cech", "--cloud", square_cloud, "--alpha", "0.75")
    assert "simplices2 4" in out


def test_deps(square_cloud, tmp_path, capsys):
    m = tmp_path / "m.csv"
    code, out, _ = run(capsys, "deps", "--cloud", square_cloud, "--eps", "1", "--out", str(m))
    assert code == 0 and out == "components 1\n"
    assert io.read_metric(m)[0, 2] == 2.0


def test_reconstruct_and_render(tmp_path, capsys):
    cloud = tmp_path / "c.csv"
    run(capsys, "sample", "--shape", "figure_eight", "--n", "340", "--noise", "0.0005", "--out", str(cloud))
    shadow, report, svg = tmp_path / "s.json", tmp_path / "r.json", tmp_path / "s.svg"
    code, out, _ = run(capsys, "reconstruct", "--cloud", str(cloud), "--eps", "0.045", "--delta", "2",
                       "--shape", "figure_eight", "--dh", "0.0135", "--out", str(shadow),
                       "--report", str(report), "--svg", str(svg))
    assert code == 0
    assert "beta1 2" in out and out.rstrip().endswith("ok")
    assert json.loads(report.read_text())["betti_ok"] is True
    again = tmp_path / "again.svg"
    assert run(capsys, "render", "--shadow", str(shadow), "--out", str(again),
               "--shape", "figure_eight")[0] == 0
    assert again.read_bytes() == svg.read_bytes()


def test_exit_codes(tmp_path, square_cloud, capsys):
    with pytest.raises(SystemExit) as e:
        main(["reconstruct", "--cloud", square_cloud, "--eps", "0.1"])
    assert e.value.code == 64
    assert run(capsys, "betti", "--cloud", str(tmp_path / "missing.csv"), "--alpha", "1")[0] == 74
    bad = tmp_path / "bad.csv"
    bad.write_text("1,2\nx,y\n")
    assert run(capsys, "deps", "--cloud", str(bad), "--eps", "1")[0] == 74
    cube = tmp_path / "cube.csv"
    io.write_cloud(cube, np.zeros((3, 3)))
    assert run(capsys, "reconstruct", "--cloud", str(cube), "--eps", "0.1", "--delta", "2")[0] == 2
    code, out, _ = run(capsys, "validate", "--theorem", "graph", "--shape", "figure_eight",
                       "--eps", "0.045", "--dh", "0.02", "--delta", "2")
    assert code == 2
    with pytest.raises(SystemExit) as e:
        main(["persist", "--cloud", square_cloud, "--alpha-max", "-1"])
    assert e.value.code == 64


@pytest.mark.skipif(shutil.which("georecon") is None, reason="console script not installed")
def test_console_script(square_cloud):
    r = subprocess.run(["georecon", "betti", "--cloud", square_cloud, "--alpha", "1"],
                       capture_output=True, text=True, check=False)
    assert r.returncode == 0 and r.stdout == "beta0 1\nbeta1 1\n"
    r = subprocess.run([sys.executable, "-m", "georecon.cli", "validate", "--theorem", "rips",
                        "--eps", "0.1", "--dh", "0.01", "--delta", "1", "--rho", "1"],
                       capture_output=True, text=True, check=False)
    assert r.returncode == 0
