import math

import mpmath as mp
import pytest

from rieszbd.errors import InputError
from rieszbd.mpcore import PrecisionContext
from rieszbd.zeros import (
    RESIDUAL_THRESHOLD,
    bundled_zeros_path,
    coefficient_table,
    compute_coefficient,
    load_zeros,
)
from rieszbd.baez import ck_spectral
from rieszbd.errors import DomainError
from rieszbd.zeta import zeta_complex

CTX30 = PrecisionContext(digits=30)


@pytest.fixture(scope="module")
def table100():
    return coefficient_table(100, CTX30)


def test_bundled_file_first_ordinate():
    zs = load_zeros()
    assert len(zs) == 100
    assert mp.nstr(zs[0], 14) == "14.134725141735"
    assert 14.13 < zs[0] < 14.14
    assert all(b > a for a, b in zip(zs, zs[1:]))


def test_bundled_matches_mpmath():
    zs = load_zeros(count=5)
    with mp.workdps(35):
        for i, g in enumerate(zs, start=1):
            assert abs(g - mp.zetazero(i).imag) < mp.mpf(10) ** -30


def test_count_overflow():
    with pytest.raises(InputError):
        load_zeros(count=101)


def _write(tmp_path, text):
    p = tmp_path / "z.txt"
    p.write_text(text, encoding="utf-8")
    return p


def test_comments_skipped(tmp_path):
    p = _write(tmp_path, "# header\n14.134725141734693790\n  # indented note\n\n21.022039638771554993\n")
    assert len(load_zeros(p)) == 2


def test_parse_error_reports_line(tmp_path):
    p = _write(tmp_path, "14.134725141734693790\nabc\n")
    with pytest.raises(InputError, match=":2:"):
        load_zeros(p)


def test_non_monotone(tmp_path):
    p = _write(tmp_path, "21.022039638771554993\n14.134725141734693790\n")
    with pytest.raises(InputError, match="increasing"):
        load_zeros(p)


def test_too_few_digits(tmp_path):
    p = _write(tmp_path, "14.1347\n")
    with pytest.raises(InputError):
        load_zeros(p)


def test_missing_file(tmp_path):
    with pytest.raises(InputError):
        load_zeros(tmp_path / "absent.txt")


def test_first_coefficient_against_oracle(gamma1):
    c = compute_coefficient(gamma1, CTX30)
    with mp.workdps(40):
        rho = mp.mpc(0.5, gamma1)
        ref = mp.gamma(1 - rho / 2) / mp.zeta(rho, derivative=1)
        assert abs(mp.mpc(c.a, c.b) - ref) < abs(ref) * 1e-20
        assert abs(c.modulus - abs(ref)) < abs(ref) * 1e-20


def test_first_modulus_is_envelope_scale(gamma1):
    mod = float(compute_coefficient(gamma1, CTX30).modulus)
    # the envelope constant of R(x)/x^(1/4), measured independently by the sweep tests
    assert abs(mod - 0.777506e-4) / 0.777506e-4 < 0.02
    assert mod == pytest.approx(7.7750628e-5, rel=1e-7)


def test_decay_trend(table100):
    first = table100[:10]
    logs = [math.log(float(c.modulus)) + math.pi * float(c.gamma) / 4 for c in first]
    # the e^(-pi gamma/4) factor carries all but a slowly varying remainder
    assert max(logs) - min(logs) < 2.0
    for c in table100[:20]:
        g = float(c.gamma)
        assert abs(math.log(float(c.modulus)) + math.pi * g / 4) <= 0.5 * math.log(g) + 5
    ratios = [float(b.modulus) / float(a.modulus) for a, b in zip(first, first[1:])]
    expected = [math.exp(-math.pi * (float(b.gamma) - float(a.gamma)) / 4) for a, b in zip(first, first[1:])]
    for r, e in zip(ratios, expected):
        assert e / 10 < r < e * 10


def test_conjugate_symmetry(gamma1):
    c = compute_coefficient(gamma1, CTX30)
    with mp.workdps(40):
        rho_bar = mp.mpc(0.5, -gamma1)
        mirrored = mp.gamma(1 - rho_bar / 2) / mp.zeta(rho_bar, derivative=1)
        assert abs(mirrored - mp.conj(mp.mpc(c.a, c.b))) < 1e-20
    with pytest.raises(DomainError):
        compute_coefficient(-gamma1, CTX30)


def test_bad_ordinate_rejected():
    with pytest.raises(InputError):
        compute_coefficient(mp.mpf("14.1347"), CTX30)


def test_empty_table():
    assert coefficient_table(0, CTX30) == []
    with pytest.raises(DomainError):
        ck_spectral(1000, coefficient_table(0, CTX30))


def test_all_residuals(table100):
    assert len(table100) == 100
    assert [c.index for c in table100] == list(range(1, 101))
    with CTX30.workdps():
        for c in table100:
            assert abs(zeta_complex(c.rho, CTX30)) < RESIDUAL_THRESHOLD


def test_bundled_path_exists():
    assert bundled_zeros_path().is_file()
