from fractions import Fraction
from math import comb, factorial

import mpmath as mp
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rieszbd.errors import DomainError, ResourceError
from rieszbd.mpcore import (
    BERNOULLI_CAP,
    PrecisionContext,
    bernoulli,
    bernoulli_exact,
    digits_needed_binomial,
    gamma,
    stirling_factorial_bounds,
)


def bernoulli_recurrence(n_max):
    """B_0..B_n_max from sum_{j<=n} C(n+1, j) B_j = 0 (independent of the tangent-number route)."""
    b = [Fraction(1)]
    for n in range(1, n_max + 1):
        b.append(-sum(comb(n + 1, j) * b[j] for j in range(n)) / Fraction(n + 1))
    return b


def test_bernoulli_small_values(ctx):
    assert bernoulli_exact(0) == 1
    assert bernoulli_exact(2) == Fraction(1, 6)
    assert bernoulli_exact(12) == Fraction(-691, 2730)
    with ctx.workdps():
        assert abs(bernoulli(12, ctx) + mp.mpf("0.253113553113553113553")) < 1e-20


def test_bernoulli_matches_recurrence():
    ref = bernoulli_recurrence(80)
    for n in range(0, 81, 2):
        assert bernoulli_exact(n) == ref[n]


def test_bernoulli_errors():
    with pytest.raises(DomainError):
        bernoulli(3)
    with pytest.raises(DomainError):
        bernoulli(-2)
    with pytest.raises(ResourceError):
        bernoulli(BERNOULLI_CAP + 2)


def test_gamma_classical_values(ctx):
    with ctx.workdps():
        assert abs(gamma(1, ctx) - 1) < mp.mpf(10) ** -38
        assert abs(gamma(mp.mpf(1) / 2, ctx) - mp.sqrt(mp.pi)) < mp.mpf(10) ** -38


@pytest.mark.parametrize("z", ["0.3", "7.25", "-2.5", "0.75-7.0673625708673468952i", "3+40i"])
def test_gamma_matches_mpmath(ctx, z):
    with ctx.workdps():
        zz = mp.mpmathify(z.replace("i", "j"))
        got = gamma(zz, ctx)
        assert abs(got - mp.gamma(zz)) <= abs(mp.gamma(zz)) * mp.mpf(10) ** -35


def test_gamma_stirling_modulus_at_first_zero(ctx, gamma1):
    z = 1 - (mp.mpf(1) / 4 + 1j * gamma1 / 2)
    with ctx.workdps():
        g = abs(gamma(z, ctx))
        y = gamma1 / 2
        stirling = mp.sqrt(2 * mp.pi) * y ** (mp.re(z) - mp.mpf(1) / 2) * mp.exp(-mp.pi * y / 2)
    assert abs(g / stirling - 1) < 1e-2


@given(st.floats(min_value=-20, max_value=20), st.floats(min_value=-30, max_value=30))
def test_gamma_recurrence(x, y):
    z = mp.mpc(x, y)
    if abs(y) < 1e-6 and abs(x - round(x)) < 1e-6 and x < 1.5:
        return
    ctx = PrecisionContext(digits=25)
    with ctx.workdps():
        lhs = gamma(z + 1, ctx)
        rhs = z * gamma(z, ctx)
        assert abs(lhs - rhs) <= abs(rhs) * mp.mpf(10) ** -20


@given(st.floats(min_value=0.05, max_value=0.95), st.floats(min_value=-10, max_value=10))
def test_gamma_reflection(x, y):
    ctx = PrecisionContext(digits=25)
    z = mp.mpc(x, y)
    with ctx.workdps():
        lhs = gamma(z, ctx) * gamma(1 - z, ctx)
        rhs = mp.pi / mp.sin(mp.pi * z)
        assert abs(lhs - rhs) <= abs(rhs) * mp.mpf(10) ** -20


@pytest.mark.parametrize("z", [0, -1, -7])
def test_gamma_poles(z):
    with pytest.raises(DomainError):
        gamma(z)


@pytest.mark.parametrize("k", [1, 5, 20, 57])
def test_stirling_bounds_bracket_factorial(k):
    lo, hi = stirling_factorial_bounds(k)
    assert lo <= factorial(k) <= hi


def test_stirling_bounds_twenty():
    lo, hi = stirling_factorial_bounds(20)
    assert lo <= mp.mpf("2.43290200817664e18") <= hi
    with pytest.raises(DomainError):
        stirling_factorial_bounds(0)


def test_context_validation():
    with pytest.raises(DomainError):
        PrecisionContext(digits=10)
    with pytest.raises(DomainError):
        PrecisionContext(guard_digits=2)
    with pytest.raises(DomainError):
        PrecisionContext(series_tail_factor=0.5)
    c = PrecisionContext(digits=30)
    assert c.raised(5).digits == 35


def test_context_restores_precision():
    before = mp.mp.dps
    with PrecisionContext(digits=60).workdps():
        assert mp.mp.dps >= 60
    assert mp.mp.dps == before


def test_binomial_digit_rule():
    assert digits_needed_binomial(1) == 31
    assert digits_needed_binomial(100) == 230


def test_determinism(ctx):
    a = gamma(mp.mpc("0.75", "-7.067"), ctx)
    b = gamma(mp.mpc("0.75", "-7.067"), ctx)
    assert a == b
