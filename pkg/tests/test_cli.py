import json

import numpy as np
import pytest
from numpy.testing import assert_allclose

from symbreak import closed_forms as cf
from symbreak.cli import dumps, main

KEYS = ["a_c", "Lambda", "vartheta", "p_ab", "a_bar", "a_tilde", "Lambda_SB", "Lambda_star_WLH", "a_star_WLH",
        "Lambda0", "a0", "Lambda1", "a1"]


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_constants(capsys):
    p = cf.critical_p(0.85, 5)
    code, out, _ = run(capsys, "constants", "--d", "5", "--p", repr(p), "--theta", "0.85", "--gamma", "1.25", "--a", "0")
    assert code == 0
    obj = json.loads(out)
    for key in KEYS:
        assert key in obj
    assert obj["a_c"] == 1.5 and obj["Lambda"] == 2.25
    assert_allclose(obj["Lambda_SB"], obj["Lambda_star_WLH"], rtol=1e-12)
    assert obj["Lambda1_branch"] in (0, 1)
    assert obj["a0"] > obj["a_bar"]


def test_seventeen_digits():
    text = dumps({"x": 0.1, "y": float("nan"), "z": [np.float64(1 / 3), True, 2]})
    assert text == '{"x": 0.10000000000000001, "y": null, "z": [0.33333333333333331, true, 2]}'


def test_radial_constant_and_spectrum(capsys):
    code, out, _ = run(capsys, "radial-constant", "--family", "ckn", "--d", "3", "--p", "4", "--theta", "1",
                       "--lambda", "1", "--grid-n", "2048")
    assert code == 0
    obj = json.loads(out)
    assert obj["converged"] and obj["family"] == "CKN_radial"
    code, out, _ = run(capsys, "spectrum", "--d", "3", "--p", "4", "--theta", "1", "--a", "-1", "--kmax", "2")
    assert code == 0
    rep = json.loads(out)
    assert rep["verdict"] == "symmetry_broken"
    assert list(rep["sector_eigenvalues"]) == ["0", "1", "2"]


def test_threshold(capsys):
    code, out, _ = run(capsys, "threshold", "--which", "a_bar", "--d", "3", "--p", "4", "--theta", "1")
    assert code == 0
    assert_allclose(float(out), cf.a_bar(1, 4, 3), rtol=1e-16)
    code, out, _ = run(capsys, "threshold", "--which", "a_star_wlh", "--d", "5")
    assert_allclose(float(out), cf.a_star_wlh(5), rtol=1e-16)
    code, out, _ = run(capsys, "threshold", "--which", "a_tilde", "--d", "5", "--gamma", "1.25")
    assert float(out) == -0.5


def test_exit_codes(capsys):
    code, _, err = run(capsys, "threshold", "--which", "a_tilde", "--d", "5", "--gamma", "0.1")
    assert code == 2 and "inadmissible" in err
    code, _, _ = run(capsys, "radial-constant", "--family", "ckn", "--d", "3", "--p", "4", "--theta", "0.1", "--a", "0")
    assert code == 2
    code, _, err = run(capsys, "radial-constant", "--family", "ckn", "--d", "3", "--p", "4", "--theta", "1",
                       "--a", "0", "--grid-n", "512", "--tol", "1e-30")
    assert code == 3 and "converge" in err


def test_tol_env(capsys, monkeypatch):
    monkeypatch.setenv("SYMBREAK_TOL", "1e-30")
    code, _, _ = run(capsys, "radial-constant", "--family", "wlh", "--d", "3", "--gamma", "1", "--a", "-0.5",
                     "--grid-n", "512")
    assert code == 3


def test_verify(capsys, tmp_path):
    s = np.linspace(-30, 30, 1201)
    path = tmp_path / "v.txt"
    np.savetxt(path, np.column_stack([s, 1 / np.cosh(s)]), header="s v(s)")
    code, out, _ = run(capsys, "verify", "--inequality", "ckn", "--profile", f"file:{path}", "--d", "3",
                       "--a", "-0.5", "--p", "4", "--theta", "1")
    assert code == 0
    obj = json.loads(out)
    assert obj["holds"]
    # sech is the exact maximizer for theta = 1, p = 4, Lambda = 1
    assert_allclose(obj["ratio"], obj["radial_constant"], rtol=1e-7)
    code, out, _ = run(capsys, "verify", "--inequality", "wlh", "--profile", "gaussian", "--d", "3",
                       "--a", "-0.5", "--gamma", "1")
    obj = json.loads(out)
    assert code == 0 and obj["holds"] and obj["gap"] > 1e-3


def test_map(capsys, tmp_path):
    prefix = tmp_path / "map"
    code, out, _ = run(capsys, "map", "--d", "3", "--theta", "1", "--x-min", "2.5", "--x-max", "5.5",
                       "--nx", "3", "--ny", "2", "--out", str(prefix), "--formats", "csv,json")
    assert code == 0
    obj = json.loads(out)
    assert obj["cells"] == 6
    assert (tmp_path / "map.csv").exists() and (tmp_path / "map.curves.json").exists()
    assert not (tmp_path / "map.svg").exists()
