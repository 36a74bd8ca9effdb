import csv

import numpy as np
import pytest

from pfresample.cli import main
from pfresample.simdata import read_weights


def test_tune_b(capsys):
    assert main(["tune-b", "--particles", "1024", "--wmax", "0.1", "--epsilon", "0.01"]) == 0
    rows = list(csv.DictReader(capsys.readouterr().out.splitlines()))
    assert rows[0]["B"] == "459"


def test_tune_b_domain_error(capsys):
    assert main(["tune-b", "--particles", "10", "--wmax", "0.01"]) == 1
    assert "error" in capsys.readouterr().err


def test_simulate_and_resample(tmp_path):
    w = tmp_path / "w.txt"
    assert main(["simulate-weights", "-P", "64", "--alpha", "0.1", "--seed", "3", "--out", str(w)]) == 0
    ws, meta = read_weights(w)
    assert ws.P == 64 and meta["alpha"] == 0.1
    for scheme, col in [("systematic", "offspring"), ("metropolis", "ancestor"), ("multinomial", "ancestor")]:
        out = tmp_path / f"{scheme}.csv"
        assert main(["resample", "--input", str(w), "--scheme", scheme, "--out", str(out)]) == 0
        rows = list(csv.DictReader(out.open()))
        vals = np.array([int(r[col]) for r in rows])
        assert len(rows) == 64
        if col == "offspring":
            assert vals.sum() == 64
        else:
            assert vals.min() >= 0 and vals.max() < 64
    out = tmp_path / "o.csv"
    assert main(["resample", "--input", str(w), "--scheme", "metropolis", "--kind", "offspring", "--out", str(out)]) == 0
    assert sum(int(r["offspring"]) for r in csv.DictReader(out.open())) == 64


def test_resample_missing_file(capsys, tmp_path):
    assert main(["resample", "--input", str(tmp_path / "nope.txt")]) == 1
    assert "error" in capsys.readouterr().err


def test_bench_outputs(tmp_path):
    out = tmp_path / "b"
    args = ["bench", "--max-particles", "512", "--alphas", "1", "0.1", "--replicates", "3", "--seed", "42", "--out", str(out)]
    assert main(args) == 0
    for name in ("records.csv", "summary.csv", "timing.csv", "error.svg", "runtime.svg"):
        assert (out / name).exists()
    rows = [r for r in csv.DictReader(l for l in (out / "summary.csv").open() if not l.startswith("#"))]
    assert len(rows) == 2 * 2 * 5  # P in {256, 512}, two alphas, five schemes


def test_demo_filter(tmp_path):
    out = tmp_path / "f.csv"
    assert main(["demo-filter", "-P", "512", "-T", "10", "--scheme", "stratified", "--out", str(out)]) == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 11 and float(rows[5]["ess"]) > 1


def test_bad_subcommand():
    with pytest.raises(SystemExit):
        main(["frobnicate"])
