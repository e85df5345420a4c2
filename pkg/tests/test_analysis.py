import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rieszbd.analysis import (
    ALTERNATING_SUM_REFERENCE,
    PartialSumTrace,
    abel_integral_check,
    abel_integrand,
    abel_tail_bound,
    alternating_sum,
    approx_identity_33,
    approx_identity_34,
    bound_rhs,
    ck_minus_riesz,
    estimate_decay_exponent,
    fit_envelope,
    fit_power_law_extrema,
    partial_sum_envelopes,
    partial_sums,
    polya_szego_check,
    power_series_identity,
    verify_bound,
    verify_generating_identity,
)
from rieszbd.baez import ck_binomial, ck_moebius_batch
from rieszbd.errors import DomainError, NumericError, ResourceError
from rieszbd.mpcore import PrecisionContext
from rieszbd.riesz import riesz_kummer2, riesz_series, riesz_sweep_arrays


@pytest.fixture(scope="module")
def trace():
    return partial_sums(120_000)


def test_generating_identity_examples(ctx):
    assert verify_generating_identity(1, 60, ctx) < 1e-10
    assert verify_generating_identity(5, 80, ctx) < 1e-10
    for x in (1, 2, 5, 10):
        assert verify_generating_identity(x, 100, ctx) < 1e-10


def test_generating_identity_small_x(ctx):
    # both sides tend to c_0 as x -> 0
    assert verify_generating_identity(mp.mpf("1e-8"), 5, ctx) < 1e-10


def test_bound_holds(ctx):
    reports = verify_bound(17, 10**4, ctx)
    assert len(reports) == 10**4 - 16
    assert all(r.holds for r in reports)
    assert all(r.rhs_leading < r.rhs_full for r in reports)


def test_bound_small_k_report(ctx):
    (rep,) = verify_bound(1, 1, ctx)
    assert rep.k == 1 and rep.lhs > 0


def test_bound_rhs_formula():
    k = 50.0
    lead, full = bound_rhs(k)
    assert lead == pytest.approx(3 * math.sqrt(math.pi) / 16 * k**-1.5)
    expected = (lead + 27 / (2 * math.e**3) * k**-2 + math.sqrt(math.pi) / 144 * k**-2.5
                + 128 * math.exp(-4) * k**-3)
    assert full == pytest.approx(expected)


def test_approx33_matches_bound_lhs(ctx):
    for k in (17, 100, 400, 1500):
        diff = approx_identity_33(k, ctx)
        (rep,) = verify_bound(k, k, ctx, precise=True)
        with ctx.workdps():
            assert abs(diff - rep.lhs) < mp.mpf(10) ** -30
        (fast,) = verify_bound(k, k, ctx)
        assert abs(float(fast.lhs) - float(diff)) < 1e-12


def test_approx33_examples(ctx):
    d100 = approx_identity_33(100, ctx)
    assert d100 < 3 * math.sqrt(math.pi) / 16 * 100**-1.5 * 1.5
    assert approx_identity_33(400, ctx) < d100


def test_difference_kernel_against_direct(ctx):
    ks = np.array([20, 300, 2000])
    vals, errs, _ = ck_minus_riesz(ks, None, None, ctx)
    for k, v, e in zip(ks, vals, errs):
        with ctx.workdps():
            direct = ck_binomial(int(k), ctx).value - riesz_series(int(k), ctx).value / int(k)
        assert abs(v - float(direct)) <= e + 1e-18


def test_alternating_sum(ctx):
    v = alternating_sum(ctx)
    with ctx.workdps():
        assert mp.nstr(v, 24) == ALTERNATING_SUM_REFERENCE[:26]
        assert abs(v - mp.mpf("0.782527985325384234576688")) < 0.5e-24
        assert abs(1 / (2 * mp.zeta(2)) - mp.mpf("0.3039635509")) < 1e-10


def test_abel_integral(ctx):
    small = PrecisionContext(digits=20)
    val = abel_integral_check(small)
    with ctx.workdps():
        assert abs(val - alternating_sum(ctx)) < 1e-12


def test_abel_per_interval_oracle(ctx):
    """Each [2m, 2m+2] piece integrates to (1 - 2^-m)(1/zeta(2m) - 1/zeta(2m+2))."""
    ref = alternating_sum(ctx)
    with mp.workdps(30):
        total = 1 + mp.nsum(
            lambda m: (1 - mp.mpf(2) ** -m) * (1 / mp.zeta(2 * m) - 1 / mp.zeta(2 * m + 2)), [1, mp.inf]
        )
        assert abs(total - ref) < 1e-27


def test_abel_integrand_and_tail(ctx):
    with ctx.workdps():
        expected = mp.mpf(1) / 2 * mp.zeta(3, derivative=1) / mp.zeta(3) ** 2
        assert abs(abel_integrand(3, ctx) - expected) < mp.mpf(10) ** -35
        assert abel_tail_bound(60, ctx) < 1e-17


def test_power_series(ctx):
    with ctx.workdps():
        z = power_series_identity(0, None, ctx)
        assert abs(z.lhs - 6 / mp.pi**2) < 1e-30 and abs(z.rhs - 6 / mp.pi**2) < 1e-30
        m = power_series_identity(-1, None, ctx)
        assert abs(m.rhs - mp.mpf(ALTERNATING_SUM_REFERENCE)) < 1e-12
        assert abs(m.lhs - m.rhs) < 1e-12
        q = power_series_identity(0.25, None, ctx)
        assert q.residual < 1e-12


@pytest.mark.parametrize("s", [-1.5, 0.5, 0.9])
def test_power_series_domain(s):
    with pytest.raises(DomainError):
        power_series_identity(s)


def test_partial_sum_crossing(trace):
    assert 80_000 <= trace.first_crossing <= 100_000
    assert trace.s_plain[trace.first_crossing] < -2
    assert np.all(trace.s_plain[: trace.first_crossing] >= -2)


def test_partial_sums_approach_from_above(trace):
    s = trace.s_plain
    assert np.all(s[: 50_001] > -2)
    early = s[1000:10_000].mean()
    late = s[40_000:50_001].mean()
    assert early > late > -2


def test_alternating_trace_settles(trace):
    d = trace.distance_alt
    assert d[1000:10_000].max() > d[10_000:100_000].max()


def test_fast_equals_direct_small(ctx):
    small = partial_sums(300, None, ctx)
    with ctx.workdps():
        running, alt = mp.mpf(0), mp.mpf(0)
        for k in range(301):
            c = ck_binomial(k, ctx).value
            running += c
            alt += (-1) ** k * c
            assert abs(running - small.s_plain[k]) < 1e-12
            assert abs(alt - small.s_alt[k]) < 1e-12


def test_partial_sums_budget():
    with pytest.raises(ResourceError):
        partial_sums(10_000, None, PrecisionContext(), n_max=90)


def test_envelope_report(trace):
    alt, plain = partial_sum_envelopes(trace)
    for fit in (alt, plain):
        assert math.isfinite(fit.exponent) and math.isfinite(fit.residual)
    assert -1.0 <= alt.exponent <= -0.5


def test_envelope_constant_trace():
    K = np.arange(10_000)
    flat = np.full(K.shape, 0.5)
    tr = PartialSumTrace(K, flat, flat, flat, flat, flat * 0, flat * 0, 200, None, 0.78)
    with pytest.raises(NumericError):
        partial_sum_envelopes(tr)


@pytest.mark.parametrize("omega", [1.0, 7.0673625708673468952])
def test_fit_self_test_growth(omega):
    top = 1e14 if omega == 1.0 else 1e7
    x = np.geomspace(1, top, 200_000)
    y = 3e-5 * x**0.25 * np.cos(omega * np.log(x))
    fit = fit_power_law_extrema(x, y, (1, top))
    assert fit.exponent == pytest.approx(0.25, abs=1e-6)
    assert fit.amplitude == pytest.approx(3e-5, rel=1e-5)


def test_fit_self_test_decay():
    k = np.geomspace(1, 1e14, 200_000)
    y = k**-0.75 * np.cos(np.log(k))
    fit = estimate_decay_exponent((k, y), (1, 1e14))
    assert fit.exponent == pytest.approx(-0.75, abs=1e-6)


def test_fit_window_too_narrow():
    x = np.geomspace(1e4, 1e6, 5000)
    y = x**0.25 * np.cos(40 * np.log(x))
    with pytest.raises(NumericError):
        fit_power_law_extrema(x, y, (1e4, 5e4))


def test_fit_too_few_extrema():
    x = np.geomspace(1, 1e3, 1000)
    with pytest.raises(NumericError):
        fit_power_law_extrema(x, x**0.25, (1, 1e3))


@pytest.mark.parametrize("omega", [1.0, 7.07])
def test_fit_self_test_paired_lobes(omega):
    x = np.geomspace(1, 1e14, 200_000)
    y = 3e-5 * x**0.25 * np.cos(omega * np.log(x))
    fit = fit_power_law_extrema(x, y, (1, 1e14), pair_lobes=True)
    assert fit.exponent == pytest.approx(0.25, abs=1e-5)
    assert fit.amplitude == pytest.approx(3e-5, rel=1e-4)


def test_paired_lobes_cancel_baseline():
    x = np.geomspace(1e4, 1e7, 50_000)
    y = 7.8e-5 * x**0.25 * np.cos(7.07 * np.log(x)) - 16.4 / x
    raw = fit_power_law_extrema(x, y, (1e4, 1e7))
    paired = fit_power_law_extrema(x, y, (1e4, 1e7), pair_lobes=True)
    assert abs(paired.exponent - 0.25) < abs(raw.exponent - 0.25)
    assert paired.residual < raw.residual


@pytest.fixture(scope="module")
def riesz_log_sweep():
    return riesz_sweep_arrays(1e7, 10_000, "log", xmin=1e4)[:2]


def test_riesz_envelope_fit(riesz_log_sweep):
    fit = fit_envelope(riesz_log_sweep, (1e4, 1e7), pair_lobes=True)
    assert fit.exponent == pytest.approx(0.25, abs=0.03)
    assert fit.n_extrema >= 10
    # amplitude is tied to the first-zero coefficient modulus, 7.7750628e-5
    assert fit.amplitude == pytest.approx(7.7750628e-5, rel=0.25)


def test_riesz_envelope_raw_fit_is_biased(riesz_log_sweep):
    # the -16.4/x term of R still rivals the oscillation near 10^4
    raw = fit_envelope(riesz_log_sweep, (1e4, 1e7))
    paired = fit_envelope(riesz_log_sweep, (1e4, 1e7), pair_lobes=True)
    assert raw.exponent > 0.27
    assert paired.residual < raw.residual / 4


def test_riesz_and_ck_envelopes_agree():
    xs, vals = riesz_sweep_arrays(1e6, 6000, "log", xmin=1e5)[:2]
    r_fit = fit_envelope((xs, vals), (1e5, 1e6), min_extrema=4)
    ks = np.unique(np.geomspace(1e5, 1e6, 6000).astype(np.int64))
    ck = ck_moebius_batch(ks)[0]
    c_fit = fit_envelope((ks.astype(float), ck * ks), (1e5, 1e6), min_extrema=4)
    assert r_fit.exponent == pytest.approx(c_fit.exponent, abs=0.02)


def test_decay_exponent():
    ks = np.unique(np.geomspace(1e4, 1e6, 8000).astype(np.int64))
    vals = ck_moebius_batch(ks)[0]
    fit = estimate_decay_exponent((ks.astype(float), vals), (1e4, 1e6))
    assert fit.exponent == pytest.approx(-0.75, abs=0.05)


def test_polya_szego(ctx):
    with ctx.workdps():
        x = 60
        assert abs(polya_szego_check(0, x, ctx) - (mp.exp(x) - 1) / mp.exp(x)) < mp.mpf(10) ** -35
    assert 0.99 <= polya_szego_check(0.75, 200, ctx) <= 1.01
    assert abs(polya_szego_check(0.75, 400, ctx) - 1) < abs(polya_szego_check(0.75, 100, ctx) - 1)
    with pytest.raises(DomainError):
        polya_szego_check(0.75, 10, ctx)


def test_approx34_trend(ctx):
    r10 = approx_identity_34(10, 80, ctx)
    r100 = approx_identity_34(100, None, ctx)
    assert r100 < r10
    assert r10 < 0.1


@given(st.integers(min_value=17, max_value=5000))
def test_bound_property(k):
    (rep,) = verify_bound(k, k)
    assert rep.holds


@given(st.floats(min_value=0.1, max_value=12))
def test_generating_identity_property(x):
    assert verify_generating_identity(x, 120, PrecisionContext(digits=30)) < 1e-10


def test_kummer2_matches_division_identity(ctx):
    # c_k - R(k)/k from the combined kernel equals the separately evaluated pieces
    k = 20_000
    vals, errs, _ = ck_minus_riesz(np.array([k]), None, None, ctx)
    c = ck_moebius_batch(np.array([k]))[0][0]
    r = float(riesz_kummer2(k, None, ctx).value) / k
    assert abs(vals[0] - (c - r)) < 1e-12
