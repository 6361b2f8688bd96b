from __future__ import annotations

import csv
import subprocess
import sys

import pytest

from bergman_lab.cli import main


def run(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def threshold_value(text):
    for line in text.splitlines():
        if "m_threshold" in line:
            return float(line.split()[-1])
    raise AssertionError(text)


@pytest.mark.parametrize("args,expect", ((["--p", "2", "--alpha", "0"], 4.0),
                                         (["--p", "0.5", "--alpha", "0"], 3.0),
                                         (["--p", "0.5", "--alpha", "0", "--delta", "4"], 4.0)))
def test_threshold(args, expect, capsys):
    code, out, _ = run(["threshold"] + args, capsys)
    assert code == 0 and threshold_value(out) == expect


def test_threshold_window(capsys):
    code, out, _ = run(["threshold", "--p", "4", "--q", "1", "--m", "3"], capsys)
    assert code == 0 and "m_low_exclusive" in out and "case_a" in out


@pytest.mark.parametrize("args", (["threshold", "--p", "-1"], ["threshold", "--p", "2", "--alpha", "-1"],
                                  ["threshold", "--p", "2", "--delta", "1"], ["verify", "bogus"],
                                  ["scan", "--op", "nope", "--m", "5"], ["atomic", "--p", "1"],
                                  ["atomic", "--f", "kernel:1.5"], []))
def test_usage_errors_exit_2(args, capsys):
    with pytest.raises(SystemExit) as exc:
        sys.exit(main(args))
    assert exc.value.code == 2


@pytest.mark.parametrize("suite", ("geometry", "quadrature", "kernels", "estimates"))
def test_verify_suites(suite, tmp_path, capsys):
    path = tmp_path / "v.csv"
    code, _, err = run(["verify", suite, "--output", str(path)], capsys)
    rows = list(csv.reader(path.open()))
    assert rows[0] == ["check_id", "params", "observed", "expected", "pass"]
    assert code == 0 and all(r[4] == "true" for r in rows[1:])
    assert "checks passed" in err


def test_scan_verdict_and_files(tmp_path, capsys):
    prefix = tmp_path / "out" / "id"
    code, out, _ = run(["scan", "--op", "identity", "--m", "5", "--rays", "2", "--levels", "4",
                        "--output", str(prefix)], capsys)
    assert code == 0 and "not compact-consistent" in out
    assert (tmp_path / "out" / "id.json").exists() and (tmp_path / "out" / "id.csv").exists()


@pytest.mark.parametrize("op,alpha,m", (("toeplitz:oneminusr2", "0", "5"), ("diagonal:inv_n", "1", "6")))
def test_scan_compact_examples(op, alpha, m, tmp_path, capsys):
    code, out, _ = run(["scan", "--op", op, "--alpha", alpha, "--m", m, "--rays", "4",
                        "--output", str(tmp_path / "s")], capsys)
    assert code == 0 and ": compact-consistent" in out


def test_scan_deterministic_across_jobs(tmp_path, capsys):
    base = ["scan", "--op", "toeplitz:halfdisk", "--m", "5", "--rays", "4", "--levels", "3"]
    run(base + ["--output", str(tmp_path / "a"), "--jobs", "1"], capsys)
    run(base + ["--output", str(tmp_path / "b"), "--jobs", "3"], capsys)
    for ext in ("json", "csv"):
        assert (tmp_path / f"a.{ext}").read_bytes() == (tmp_path / f"b.{ext}").read_bytes()


@pytest.mark.parametrize("f", ("one", "kernel:0.3", "w", "normkernel:0.5"))
def test_atomic(f, tmp_path, capsys):
    prefix = tmp_path / "a"
    code, out, _ = run(["atomic", "--f", f, "--r", "0.35", "--output", str(prefix)], capsys)
    assert code == 0
    assert "coefficient norm ratio" in out
    for ext in (".lattice", ".expansion", ".errors.csv"):
        assert prefix.with_suffix(ext).exists()
    rows = list(csv.reader(prefix.with_suffix(".errors.csv").open()))
    assert max(float(r[1]) for r in rows[1:]) <= 1e-2


def test_atomic_tolerance_failure_exit_1(tmp_path, capsys):
    code, _, err = run(["atomic", "--r", "0.7", "--tol", "1e-15", "--output", str(tmp_path / "a")], capsys)
    assert code == 1 and "exceeds" in err


def test_module_entry_point_help():
    res = subprocess.run([sys.executable, "-m", "bergman_lab", "scan", "--help"], capture_output=True, text=True)
    assert res.returncode == 0 and "Berezin" in res.stdout
