import csv
import json

import pytest

from cablejones.asymptotics import PlantedSignal, synthetic_table
from cablejones.cli import main

KNOT = ["--p1", "2", "--q1", "13", "--p2", "2", "--q2", "3"]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_jones_color_zero(capsys):
    code, out, _ = run(capsys, "jones", *KNOT, "--color", "0")
    assert code == 0
    assert json.loads(out)["polynomial"] == {"terms": [[0, "1"]]}


def test_jones_oracle_check(capsys):
    code, out, _ = run(capsys, "jones", *KNOT, "--color", "3", "--check-oracle")
    assert code == 0 and json.loads(out)["oracle_agrees"] is True


def test_jones_zero_framing(capsys):
    _, a, _ = run(capsys, "jones", *KNOT, "--color", "2")
    _, b, _ = run(capsys, "jones", *KNOT, "--color", "2", "--framing", "zero")
    assert json.loads(a)["polynomial"] != json.loads(b)["polynomial"]


def test_jones_invalid_params(capsys, tmp_path):
    out = tmp_path / "j.json"
    code, _, err = run(capsys, "jones", "--p1", "2", "--q1", "4", "--p2", "2", "--q2", "3", "--color", "1",
                       "--out", str(out))
    assert code == 2 and "p1,q1 must be coprime" in err
    assert not out.exists()


@pytest.mark.parametrize(
    "argv",
    [
        ["kappa", *KNOT, "--n", "5..2"],
        ["kappa", *KNOT, "--n", "x"],
        ["kappa", *KNOT, "--n", "1", "--precision", "10"],
        ["scan", *KNOT, "--n", "1..3", "--jobs", "0"],
        ["jones", "--p1", "2", "--color", "1"],
        ["nonsense"],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_kappa_zero(capsys):
    code, out, _ = run(capsys, "kappa", *KNOT, "--n", "0")
    rows = list(csv.DictReader(out.splitlines()))
    assert code == 0 and float(rows[0]["re_kappa"]) == 1.0 and float(rows[0]["im_kappa"]) == 0.0


def test_kappa_beta_zero_analytic(capsys, tmp_path):
    out = tmp_path / "k.csv"
    code, _, err = run(capsys, "kappa", "--p1", "1", "--q1", "6", "--p2", "2", "--q2", "3", "--n", "3",
                       "--method", "analytic", "--out", str(out))
    assert code == 2 and "beta = 0" in err and not out.exists()


def test_scan_both_agreement(capsys):
    code, out, _ = run(capsys, "scan", *KNOT, "--n", "1..30", "--method", "both")
    rows = list(csv.DictReader(out.splitlines()))
    assert code == 0 and len(rows) == 30
    assert max(float(r["agreement"]) for r in rows) < 1e-8


def test_scan_outside_hypothesis_warns(capsys, tmp_path):
    out = tmp_path / "s.csv"
    code, stdout, err = run(capsys, "scan", "--p1", "2", "--q1", "11", "--p2", "2", "--q2", "3", "--n", "1..5",
                            "--out", str(out))
    assert code == 0 and "hypothesis beta*gamma>0 not satisfied" in err
    assert len(out.read_text().splitlines()) == 6 and stdout == ""


def test_scan_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run(capsys, "scan", *KNOT, "--n", "1..45", "--out", str(a))
    run(capsys, "scan", *KNOT, "--n", "1..45", "--out", str(b), "--jobs", "2")
    assert a.read_bytes() == b.read_bytes()


def test_fit_planted(capsys, tmp_path):
    path = tmp_path / "planted.csv"
    synthetic_table(PlantedSignal(1.5, (8, 2, 5)), 100, 400).write(path)
    code, out, err = run(capsys, "fit", str(path), "--periods", "1,2,3,4,6")
    rep = json.loads(out)
    assert code == 0 and rep["period_candidate"] == 3
    assert all(abs(c["alpha_hat"] - 1.5) < 0.02 for c in rep["per_class"])
    assert "T=3" in err


def test_fit_empty_and_malformed(capsys, tmp_path):
    empty = tmp_path / "e.csv"
    empty.write_text("")
    assert run(capsys, "fit", str(empty))[0] == 3
    header_only = tmp_path / "h.csv"
    synthetic_table(lambda N: 1.0, 1, 0).write(header_only)
    assert run(capsys, "fit", str(header_only))[0] == 3
    bad = tmp_path / "b.csv"
    bad.write_text("garbage\n1,2\n")
    assert run(capsys, "fit", str(bad))[0] == 2
    assert run(capsys, "fit", str(tmp_path / "missing.csv"))[0] == 2


def test_verify_skein(capsys, tmp_path):
    out = tmp_path / "v.json"
    code, _, _ = run(capsys, "verify", "--suite", "skein", "--out", str(out))
    doc = json.loads(out.read_text())
    assert code == 0 and doc["passed"]
    assert all("runtime" not in c for c in doc["suites"][0]["checks"])
