import csv
import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from gesforge import cli
from gesforge.constructions import antisymmetric_subspace, chain_ges
from gesforge.subspaces import dumps, full_space, loads


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


@pytest.fixture
def files(tmp_path):
    return {
        "antisym3": write(tmp_path, "a3.json", dumps(antisymmetric_subspace(3))),
        "full": write(tmp_path, "full.json", dumps(full_space((2, 2)))),
        "chain": write(tmp_path, "chain.json", dumps(chain_ges([antisymmetric_subspace(2)] * 2))),
        "example_w": write(tmp_path, "w.json", json.dumps({"construct": "example_w"})),
        "antisym_spec": write(tmp_path, "as.json", json.dumps({"construct": "antisym", "d": 3})),
        "bad": write(tmp_path, "bad.json", "{not json"),
        "nonces": write(tmp_path, "nc.json", json.dumps(
            {"construct": "sum_products_ces", "s_parts": [{"construct": "full", "dims": [2, 2]}],
             "p_parts": [{"construct": "full", "dims": [2]}]})),
    }


def test_construct_examples(files, capsys):
    code, out, _ = run(["construct", files["example_w"]], capsys)
    assert code == 0
    w = loads(out)
    assert w.dim == 16 and w.dims == (3, 9, 3)
    code, out, _ = run(["construct", files["antisym_spec"]], capsys)
    assert code == 0 and len(json.loads(out)["basis"]) == 3
    code, _, err = run(["construct", files["bad"]], capsys)
    assert code == 2 and "invalid JSON" in err


def test_construct_precondition_exit(files, capsys):
    code, _, err = run(["construct", files["nonces"], "--seed", "1"], capsys)
    assert code == 3 and "precondition" in err


def test_construct_to_file(files, tmp_path, capsys):
    dest = tmp_path / "out.json"
    code, out, _ = run(["construct", files["antisym_spec"], "-o", str(dest)], capsys)
    assert code == 0 and out == ""
    assert loads(dest.read_text()).dim == 3


def test_measure_examples(files, capsys):
    code, out, _ = run(["measure", files["antisym3"], "--restarts", "16"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["min"] == pytest.approx(0.5, abs=1e-6)
    assert rep["reports"][0]["stable"]
    code, out, _ = run(["measure", files["full"], "--restarts", "8"], capsys)
    assert json.loads(out)["min"] == pytest.approx(0, abs=1e-12)
    code, out, _ = run(["measure", files["chain"], "--restarts", "16"], capsys)
    rep = json.loads(out)
    assert [r["cut"] for r in rep["reports"]] == ["0|12", "01|2", "02|1"]
    assert rep["min"] == pytest.approx(0.5, abs=1e-6)
    code, out, _ = run(["measure", files["chain"], "--cut", "0,2", "--restarts", "8"], capsys)
    assert [r["cut"] for r in json.loads(out)["reports"]] == ["02|1"]


def test_measure_input_errors(files, tmp_path, capsys):
    assert run(["measure", str(tmp_path / "missing.json")], capsys)[0] == 2
    assert run(["measure", files["bad"]], capsys)[0] == 2
    assert run(["measure", files["chain"], "--cut", "x"], capsys)[0] == 2
    assert run(["measure", files["chain"], "--cut", "0,1,2"], capsys)[0] == 2
    assert run(["measure"], capsys)[0] == 2


def scan_rows(out):
    return list(csv.DictReader(io.StringIO(out)))


def test_werner_scan_points(capsys):
    code, out, err = run(["werner-scan", "--d", "2", "--grid", "11"], capsys)
    assert code == 0
    rows = scan_rows(out)
    assert len(rows) == 121
    assert list(rows[0]) == ["x", "y", "witness_value", "certified"]
    by = {(float(r["x"]), float(r["y"])): r for r in rows}
    r = by[(0.8, 0.8)]
    assert float(r["witness_value"]) == pytest.approx(0.14, abs=1e-12) and r["certified"] == "true"
    r = by[(0.7, 0.7)]
    assert float(r["witness_value"]) == pytest.approx(-0.01, abs=1e-12) and r["certified"] == "false"
    assert "corner (s)" in err


def test_werner_scan_p_corner(capsys):
    code, out, err = run(["werner-scan", "--d", "2", "--grid", "3", "--param", "p"], capsys)
    assert code == 0
    corner = float(err.strip().split()[-1])
    assert corner == pytest.approx(3 * math.sqrt(2) - 5, abs=1e-11)
    rows = scan_rows(out)
    # p = -1 is the singlet: s = 1 on both copies
    assert float(rows[0]["witness_value"]) == pytest.approx(0.5, abs=1e-12)


def test_werner_scan_twelve_digits(capsys):
    _, out, _ = run(["werner-scan", "--grid", "4"], capsys)
    vals = [r["x"] for r in scan_rows(out)]
    assert "0.333333333333" in vals


def test_werner_scan_json(capsys):
    code, out, _ = run(["werner-scan", "--grid", "2", "--format", "json", "--d", "3"], capsys)
    data = json.loads(out)
    assert data["d"] == 3 and len(data["rows"]) == 4


@pytest.mark.parametrize("argv", [["werner-scan", "--grid", "1"], ["werner-scan", "--d", "1"],
                                  ["werner-scan", "--param", "q"]])
def test_werner_scan_bad_flags(argv, capsys):
    assert run(argv, capsys)[0] == 2


def test_check_examples(tmp_path, files, capsys):
    w = tmp_path / "wbasis.json"
    assert run(["construct", files["example_w"], "-o", str(w)], capsys)[0] == 0
    code, out, _ = run(["check", str(w), "--npt", "--samples", "50"], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["passed"] and len(rep["npt"]) == 3
    code, out, _ = run(["check", files["full"], "--npt", "--samples", "5"], capsys)
    assert code == 4 and not json.loads(out)["passed"]
    code, out, _ = run(["check", str(w), "--distill", "--samples", "2"], capsys)
    rep = json.loads(out)
    assert code == 0
    assert all(r["witnesses_found"] == 2 and r["witness_value"] < 0 for r in rep["distill"])
    assert run(["check", str(w)], capsys)[0] == 2


def test_seed_env_and_flag(files, capsys, monkeypatch):
    monkeypatch.setenv("GESFORGE_SEED", "0x10")
    _, out, _ = run(["measure", files["antisym3"], "--restarts", "4"], capsys)
    assert json.loads(out)["seed"] == 16
    _, out, _ = run(["measure", files["antisym3"], "--restarts", "4", "--seed", "7"], capsys)
    assert json.loads(out)["seed"] == 7
    monkeypatch.setenv("GESFORGE_SEED", "abc")
    assert run(["measure", files["antisym3"]], capsys)[0] == 2


def test_outputs_byte_identical(files, capsys):
    argv = ["measure", files["chain"], "--restarts", "8", "--seed", "3"]
    assert run(argv, capsys)[1] == run(argv, capsys)[1]
    argv = ["werner-scan", "--grid", "7", "--param", "p", "--d", "3"]
    assert run(argv, capsys)[1] == run(argv, capsys)[1]


def test_module_entry_point(files):
    proc = subprocess.run([sys.executable, "-m", "gesforge", "construct", files["antisym_spec"]],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert np.isclose(len(json.loads(proc.stdout)["basis"]), 3)
    proc = subprocess.run([sys.executable, "-m", "gesforge", "construct", files["bad"]],
                          capture_output=True, text=True)
    assert proc.returncode == 2
