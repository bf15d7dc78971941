from __future__ import annotations

import csv
import io
import json
import subprocess
import sys

import pytest

from metaplectic.cli import main, parse_matrix

OMEGA_PAIR = "[[0,-1],[1,0]] [[0,-1],[1,0]]"


def run(capsys, *argv: str) -> tuple[int, str]:
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_cbar_value(capsys):
    code, out = run(capsys, "cocycle", "--pair", OMEGA_PAIR, "--kind", "cbar")
    report = json.loads(out)
    assert code == 0 and report["pass"] is True
    assert report["cases"][0]["got"] == "-1"
    assert set(report) == {"check", "params", "cases", "pass"}
    assert set(report["cases"][0]) == {"in", "expected", "got", "residual"}


@pytest.mark.parametrize(
    "argv",
    [
        ("cocycle", "--pair", "[[1,2],[3]] [[1,0],[0,1]]"),
        ("cocycle", "--pair", "[[1,0],[0,1]]"),
        ("cocycle", "--pair", "[[0,0],[0,0]] [[1,0],[0,1]]"),
        ("split", "--chi", "--word", "n2 bogus"),
        ("theta", "--value", "--z", "i", "--eps", "-1"),
        ("frobnicate",),
    ],
)
def test_usage_errors(capsys, argv):
    code, _ = run(capsys, *argv)
    assert code == 2


def test_sweeps_pass(capsys):
    assert run(capsys, "cocycle", "--sweep", "300", "--seed", "7")[0] == 0
    assert run(capsys, "split", "--map", "beta-tilde", "--group", "gamma2hat", "--sweep", "300")[0] == 0
    assert run(capsys, "split", "--map", "asai", "--group", "sl2z", "--sweep", "300")[0] == 0


@pytest.mark.parametrize("mode", ["--fresnel", "--intertwiner", "--eigen", "--lattice"])
def test_weilrep_modes(capsys, mode):
    code, out = run(capsys, "weilrep", mode)
    report = json.loads(out)
    assert code == 0 and report["pass"] is True and report["cases"]


def test_verification_failure_exit_code(capsys):
    code, out = run(capsys, "theta", "--check", "--words", "5", "--tol", "1e-30")
    report = json.loads(out)
    assert code == 1 and report["pass"] is False and report["cases"]


def test_chi_word(capsys):
    code, out = run(capsys, "split", "--chi", "--word", "n2 n2m n2^-1")
    report = json.loads(out)
    assert code == 0 and report["cases"][0]["got"] == "e^{iπ·1/6}"


def test_theta_value_and_lambda(capsys):
    code, out = run(capsys, "theta", "--value", "--z", "i", "--eps", "1")
    assert code == 0 and "1.08643481121" in out
    code, out = run(capsys, "theta", "--lambda", "--gamma", "omega", "--eps", "1")
    assert code == 0 and json.loads(out)["cases"][0]["got"] == "e^{-iπ·1/4}"


def test_lattice_letter(capsys):
    code, out = run(capsys, "weilrep", "--lattice", "--letter", "u-(2)")
    assert code == 0
    assert all(case["expected"] == "e^{iπ·1/4}" for case in json.loads(out)["cases"])


def test_csv_header(capsys):
    code, out = run(capsys, "cocycle", "--pair", OMEGA_PAIR, "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0
    assert rows[0] == ["check", "in", "expected", "got", "residual", "pass"]
    assert len(rows) == 5


def test_deterministic(capsys):
    argv = ("split", "--map", "beta1-tilde", "--group", "sl2z", "--sweep", "200", "--seed", "11")
    first = run(capsys, *argv)
    assert first == run(capsys, *argv)
    argv = ("weilrep", "--compose", "--pairs", "5", "--seed", "2", "--all-cases")
    assert run(capsys, *argv) == run(capsys, *argv)


def test_output_dir_env(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("METAPLECTIC_OUTPUT_DIR", str(tmp_path))
    code, _ = run(capsys, "cocycle", "--pair", OMEGA_PAIR, "--output", "report.json")
    assert code == 0
    assert json.loads((tmp_path / "report.json").read_text())["pass"] is True


def test_parse_matrix_exact():
    g = parse_matrix("[[1/2, 0], [0, 2]]")
    assert g.exact and g.a == g.d / 4


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "metaplectic", "cocycle", "--pair", OMEGA_PAIR, "--kind", "cbar"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and '"got": "-1"' in proc.stdout
