import csv
import re
import subprocess
import sys

import mpmath as mp
import pytest

from rieszbd.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def printed_value(text):
    """The number after '=' in a 'name = value +/- err [method]' line."""
    return mp.mpf(re.search(r"=\s*(\S+)", text).group(1))


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def test_riesz_zero(capsys):
    code, out, _ = run(capsys, "riesz", "zero")
    assert code == 0
    with mp.workdps(30):
        assert abs(mp.mpf(out.split()[0]) - mp.mpf("1.1567116438")) < 1e-9
    assert mp.nstr(mp.mpf(out.split()[0]), 11) == "1.1567116438"


def test_riesz_eval_methods_agree(capsys):
    code, a, _ = run(capsys, "riesz", "eval", "--x", "1", "--method", "series")
    assert code == 0
    code, b, _ = run(capsys, "riesz", "eval", "--x", "1", "--method", "kummer2")
    assert code == 0
    with mp.workdps(45):
        assert abs(printed_value(a) - printed_value(b)) < 1e-35


def test_riesz_sweep_csv(capsys, tmp_path):
    out = tmp_path / "r.csv"
    code, _, _ = run(capsys, "riesz", "sweep", "--xmax", "20", "--points", "200", "--out", str(out))
    assert code == 0
    rows = read_csv(out)
    assert rows[0] == ["x", "R", "err", "method", "terms"]
    vals = [float(r[1]) for r in rows[1:] if float(r[0]) > 0]
    changes = sum(1 for a, b in zip(vals, vals[1:]) if (a > 0) != (b > 0))
    assert changes == 1


def test_sweep_byte_identical(capsys, tmp_path):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for i, p in enumerate(paths):
        assert run(capsys, "--threads", str(i + 1), "riesz", "sweep", "--xmax", "1e5",
                   "--points", "500", "--spacing", "log", "--out", str(p))[0] == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_csv_round_trip(capsys, tmp_path):
    out = tmp_path / "c.csv"
    run(capsys, "ck", "sweep", "--kmax", "3000", "--stride", "500", "--out", str(out))
    rows = read_csv(out)
    assert rows[0] == ["k", "c_k", "err", "method"]
    assert [int(r[0]) for r in rows[1:]] == list(range(0, 3001, 500))
    for r in rows[1:]:
        assert repr(float(r[1])) == r[1] or float(repr(float(r[1]))) == float(r[1])


def test_ck_compute(capsys):
    code, out, _ = run(capsys, "ck", "compute", "--k", "0")
    assert code == 0
    assert mp.nstr(printed_value(out), 10) == "0.6079271019"
    _, b, _ = run(capsys, "ck", "compute", "--k", "64", "--method", "binomial")
    _, m, _ = run(capsys, "ck", "compute", "--k", "64", "--method", "moebius")
    with mp.workdps(45):
        assert abs(printed_value(b) - printed_value(m)) < 1e-20


def test_ck_compute_spectral(capsys):
    code, out, _ = run(capsys, "ck", "compute", "--k", "10000", "--method", "spectral", "--zeros", "3")
    assert code == 0 and "spectral" in out


def test_verify_identities(capsys):
    code, out, _ = run(capsys, "verify", "identity", "--which", "altsum")
    assert code == 0
    assert "PASS" in out and "0.782527985325384234576688" in out
    code, out, _ = run(capsys, "verify", "identity", "--which", "gf", "--x", "5")
    assert code == 0 and "PASS" in out


def test_verify_bound(capsys, tmp_path):
    summary = tmp_path / "s.csv"
    code, out, _ = run(capsys, "verify", "bound", "--kmin", "17", "--kmax", "10000", "--summary", str(summary))
    assert code == 0 and "PASS" in out
    assert read_csv(summary)[0] == ["check", "passed", "value", "detail"]


def test_verify_failure_exit_code(capsys):
    # five terms cannot reproduce the generating function at x = 10
    code, out, _ = run(capsys, "verify", "identity", "--which", "gf", "--x", "10", "--kmax", "5")
    assert code == 1 and "FAIL" in out


def test_verify_approx34_is_informational(capsys):
    code, out, _ = run(capsys, "verify", "identity", "--which", "approx34", "--x", "10")
    assert code == 0 and "INFO" in out


def test_sums_partial(capsys, tmp_path):
    out = tmp_path / "s.csv"
    code, text, _ = run(capsys, "sums", "partial", "--kmax", "120000", "--stride", "1000", "--out", str(out))
    assert code == 0
    rows = read_csv(out)
    assert rows[0] == ["K", "S_plain", "S_alt", "dist_plain", "dist_alt"]
    first = int(re.search(r"S_K < -2: (\d+)", text).group(1))
    assert 80_000 <= first <= 100_000


def test_zeros_coeffs(capsys, tmp_path):
    out = tmp_path / "z.csv"
    code, _, _ = run(capsys, "zeros", "coeffs", "--count", "1", "--out", str(out))
    assert code == 0
    rows = read_csv(out)
    assert rows[0] == ["i", "gamma", "a", "b", "modulus"]
    assert float(rows[1][4]) == pytest.approx(7.775e-5, rel=1e-3)


def test_fit_envelope_from_sweep(capsys, tmp_path):
    sweep = tmp_path / "r.csv"
    fit = tmp_path / "f.csv"
    run(capsys, "riesz", "sweep", "--xmax", "1e7", "--xmin", "1e4", "--points", "8000",
        "--spacing", "log", "--out", str(sweep))
    code, _, _ = run(capsys, "fit", "envelope", "--in", str(sweep), "--window", "1e4", "1e7",
                     "--pair-lobes", "--out", str(fit))
    assert code == 0
    rows = read_csv(fit)
    assert rows[0] == ["amplitude", "exponent", "residual"]
    assert float(rows[1][1]) == pytest.approx(0.25, abs=0.03)


def test_fit_ckdiff_runs(capsys, tmp_path):
    out = tmp_path / "f.csv"
    code, _, _ = run(capsys, "fit", "ckdiff", "--kmin", "10000", "--kmax", "100000", "--out", str(out))
    assert code == 0
    assert float(read_csv(out)[1][1]) < -1.4


def test_usage_errors(capsys):
    assert run(capsys, "nope")[0] == 2
    assert run(capsys, "riesz", "eval")[0] == 2
    assert run(capsys, "--digits", "5", "riesz", "zero")[0] == 2
    assert run(capsys, "riesz", "sweep", "--xmax", "2", "--out", "/nonexistent/dir/x.csv")[0] == 2


def test_numeric_errors(capsys):
    code, _, err = run(capsys, "ck", "compute", "--k", "5000", "--method", "binomial")
    assert code == 3 and "moebius" in err
    assert run(capsys, "riesz", "eval", "--x", "1e5", "--method", "series")[0] == 3


def test_env_overrides(capsys, monkeypatch):
    monkeypatch.setenv("RZL_DIGITS", "20")
    code, out, _ = run(capsys, "ck", "compute", "--k", "0")
    assert code == 0
    assert "0.60792710185402662866 " in out
    monkeypatch.setenv("RZL_CSV_DIGITS", "6")
    code, out, _ = run(capsys, "zeros", "coeffs", "--count", "1")
    assert code == 0 and "7.77506e-5" in out
    monkeypatch.setenv("RZL_DIGITS", "abc")
    assert run(capsys, "riesz", "zero")[0] == 2


def test_bad_zeros_file(capsys, tmp_path):
    bad = tmp_path / "z.txt"
    bad.write_text("14.1\n")
    assert run(capsys, "--zeros-file", str(bad), "zeros", "coeffs", "--count", "1")[0] == 2


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "rieszbd", "ck", "compute", "--k", "1"],
                         capture_output=True, text=True, timeout=120)
    assert res.returncode == 0
    assert "-0.3160113" in res.stdout
