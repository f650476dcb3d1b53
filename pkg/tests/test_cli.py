import subprocess
import sys

import pytest

from pisotile.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_gamma_103(capsys):
    code, out, _ = run(capsys, "gamma", "--poly", "10", "3", "--no-scan")
    assert code == 0
    assert out.splitlines()[0] == "gamma = (7 - sqrt(7))/12 ≈ 0.362854"
    assert "coordinates: 19/24-1/24*B" in out and "situation: C" in out


def test_gamma_43(capsys):
    code, out, _ = run(capsys, "gamma", "--poly", "4", "3", "--scan-qmax", "30")
    assert code == 0 and out.startswith("gamma = 0\n") and "first failure" in out


def test_info(capsys):
    code, out, _ = run(capsys, "info", "--poly", "10", "3")
    assert code == 0
    assert "d_beta(1) = [10,3]" in out and "d*_beta(1) = [] ([10,2])^inf" in out


def test_expand_and_periodic(capsys):
    code, out, _ = run(capsys, "expand", "--poly", "10", "3", "--x", "1/2")
    assert code == 0 and out.startswith("integer part: []")
    code, out, _ = run(capsys, "periodic", "--poly", "10", "3", "--x", "1/3")
    assert out.strip() == "purely periodic: no"


def test_graph_exports(capsys, tmp_path):
    dot, js = tmp_path / "g.dot", tmp_path / "g.json"
    code, out, _ = run(capsys, "boundary-graph", "--poly", "10", "3",
                       "--dot", str(dot), "--json", str(js))
    assert code == 0 and "start nodes: 4" in out and "nodes: 8" in out
    first = dot.read_text()
    run(capsys, "boundary-graph", "--poly", "10", "3", "--dot", str(dot))
    assert dot.read_text() == first
    code, out, _ = run(capsys, "adm-graph", "--poly", "4", "3")
    assert code == 0 and out.startswith("nodes: 2")


def test_tile_rows(capsys):
    code, out, _ = run(capsys, "tile", "--poly", "10", "3", "--depth", "3")
    lines = out.splitlines()
    assert code == 0 and len(lines) == 1164 and lines[0].startswith("subtile,")


def test_tile_stripe(capsys):
    code, out, _ = run(capsys, "tile", "--poly", "4", "3", "--depth", "8", "--stripe", "0.2")
    assert code == 0 and "missing: 23" in out


def test_scan(capsys):
    code, out, _ = run(capsys, "scan", "--poly", "1", "1", "--qmax", "40", "--upper", "1")
    assert code == 0 and "first failure: none" in out


@pytest.mark.parametrize("argv,code,msg", [
    (["gamma", "--poly", "2", "2"], 3, "ERR HypothesesFail"),
    (["info", "--poly", "2", "-1"], 3, "ERR Reducible"),
    (["tile", "--poly", "1", "1", "--depth", "2"], 3, "ERR NotDividingNorm"),
    (["periodic", "--poly", "10", "3", "--x", "3/2"], 3, "ERR OutOfRange"),
    (["tile", "--poly", "10", "3", "--depth", "-1"], 2, "error"),
    (["gamma"], 2, "error"),
    (["expand", "--poly", "10", "3", "--x", "abc"], 2, "error"),
    (["bogus"], 2, "error"),
])
def test_exit_codes(capsys, argv, code, msg):
    c, _, err = run(capsys, *argv)
    assert c == code and msg in err


def test_console_entry_deterministic():
    cmd = [sys.executable, "-m", "pisotile.cli", "boundary-graph", "--poly", "4", "3"]
    a = subprocess.run(cmd, capture_output=True, text=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, text=True, check=True).stdout
    assert a == b and "reachable: 15" in a
