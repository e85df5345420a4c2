"""Relations between R(x) and c_k, summation identities, and power-law fits.

Partial sums
------------
S_K = sum_{k<=K} c_k is not accumulated term by term.  Swapping the order
of summation gives S_K = sum_n mu(n) (1 - q_n^(K+1)) with q_n = 1 - 1/n^2,
and the alternating sum becomes sum_n mu(n)/n^2 (1 - (-q_n)^(K+1)) / (1 + q_n).
Both are cut at N with N^2 > K.  The n > N remainder of each is the running
sum over k <= K of the c_k tail series (plain or with sign (-1)^k), so one
controlled correction replaces 10^5 separate truncations.

Fits
----
Oscillating power laws y ~ A x^p cos(w ln x + phi) are fitted on the local
maxima of |y|, each refined by a parabola through its neighbours in
(ln x, ln |y|).  A least-squares line through those maxima gives p.  The
maxima of such a signal sit where tan = p/w, which lowers them by a factor
1/sqrt(1 + (p/w)^2); w comes from the mean spacing of the maxima (pi/w in
ln x) and the amplitude is corrected for it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import mpmath as mp
import numpy as np

from . import _kernels
from .baez import (
    BINOMIAL_CAP,
    ck_binomial,
    ck_difftable,
    ck_sweep,
    moebius_cutoff,
)
from .errors import DomainError, NumericError, ResourceError
from .mpcore import DEFAULT_CONTEXT, PrecisionContext
from .riesz import riesz_kummer2, riesz_series
from .sieve import MobiusTable, table_for
from .zeta import (
    inverse_zeta_even,
    scaled_tail_moments,
    tail_remainder_bound,
    tail_terms_needed,
    zeta_em,
)

ALTERNATING_SUM_REFERENCE = "0.782527985325384234576688"
PARTIAL_SUM_CAP = 2 * 10**5
_EPS = float(np.finfo(np.float64).eps)


# ---------------------------------------------------------------------------
# records
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BoundReport:
    k: int
    lhs: object
    rhs_leading: float
    rhs_full: float
    holds: bool


@dataclass(frozen=True)
class FitResult:
    amplitude: float
    exponent: float
    window: tuple
    residual: float
    n_extrema: int = 0
    omega: float = math.nan


@dataclass(frozen=True)
class PartialSumTrace:
    """Partial sums for K = 0..Kmax stored column-wise (numpy arrays)."""

    K: np.ndarray
    s_plain: np.ndarray
    s_alt: np.ndarray
    distance_plain: np.ndarray
    distance_alt: np.ndarray
    err_plain: np.ndarray
    err_alt: np.ndarray
    n_max: int
    first_crossing: int | None
    s_star: float

    def __len__(self) -> int:
        return len(self.K)

    def row(self, i: int) -> tuple:
        return (int(self.K[i]), float(self.s_plain[i]), float(self.s_alt[i]),
                float(self.distance_plain[i]), float(self.distance_alt[i]))


class PowerSeriesCheck(NamedTuple):
    lhs: object
    rhs: object
    residual: object
    tail_bound: object


# ---------------------------------------------------------------------------
# generating function
# ---------------------------------------------------------------------------


def _poisson_cut(x: float, rel: float) -> int:
    """Smallest K > x with x^K/K! e^-x < rel (log-space)."""
    k = int(x) + 1
    target = math.log(rel)
    while k * math.log(max(x, 1e-300)) - math.lgamma(k + 1) - x >= target:
        k += 1
    return k


def _ck_values(kmax: int, ctx: PrecisionContext, table: MobiusTable | None = None) -> list:
    """c_0..c_kmax to ctx precision (difference table when cheap)."""
    if kmax <= 300:
        return list(ck_difftable(kmax, ctx, keep_rows=False).leading)
    return [r.value for r in ck_sweep(kmax, "moebius", 1, ctx, table, precise=True)]


def verify_generating_identity(x, kmax: int, ctx: PrecisionContext = DEFAULT_CONTEXT,
                               table: MobiusTable | None = None) -> float:
    """Relative residual of sum_{k<=kmax} c_k x^k/k! against e^x R(x)/x."""
    if float(x) <= 0:
        raise DomainError("generating identity check needs x > 0")
    cks = _ck_values(kmax, ctx, table)
    r = riesz_kummer2(x, table, ctx)
    with ctx.workdps():
        xm = mp.mpf(x)
        lhs = mp.mpf(0)
        term = mp.mpf(1)
        for k, c in enumerate(cks):
            lhs += c * term
            term *= xm / (k + 1)
        rhs = mp.exp(xm) * r.value / xm
        return float(abs(lhs - rhs) / (abs(rhs) + mp.mpf(10) ** -30))


def generating_tail_bound(x: float, kmax: int) -> float:
    """(pi^2/6) sum_{k>kmax} x^k/k!, from |c_k| <= pi^2/6."""
    with mp.workdps(30):
        x = mp.mpf(x)
        t = mp.power(x, kmax + 1) / mp.factorial(kmax + 1)
        return float(mp.pi**2 / 6 * t * mp.hyp1f1(1, kmax + 2, x))


# ---------------------------------------------------------------------------
# c_k - R(k)/k and the explicit bound
# ---------------------------------------------------------------------------

BOUND_CONSTANTS = (
    3 * math.sqrt(math.pi) / 16,
    27 / (2 * math.e**3),
    math.sqrt(math.pi) / 144,
    128 * math.exp(-4),
)


def bound_rhs(k) -> tuple[float, float]:
    """(leading, full) right-hand sides of |R(k)/k - c_k| <= ..."""
    k = float(k)
    c1, c2, c3, c4 = BOUND_CONSTANTS
    lead = c1 * k**-1.5
    return lead, lead + c2 * k**-2 + c3 * k**-2.5 + c4 * k**-3


def ck_minus_riesz(ks, table: MobiusTable | None = None, n_max: int | None = None,
                   ctx: PrecisionContext = DEFAULT_CONTEXT):
    """Float c_k - R(k)/k at integer ks, summed as one series.

    sum_n mu(n)/n^2 (q^k - e^{-k/n^2}) is evaluated directly (no
    cancellation between two separately rounded values); the n > N part is
    sum_j (-1)^j T(2j+2) (C(k,j) - k^j/j!).  Returns (values, errs, N).
    """
    ks = np.ascontiguousarray(ks, dtype=np.int64)
    if np.any(ks < 1):
        raise DomainError("k must be >= 1")
    if n_max is None:
        n_max = moebius_cutoff(int(ks.max()), ctx)
    table = table_for(n_max, table)
    kf = ks.astype(np.float64)
    main = _kernels.ckdiff_at(ks, table.values, n_max) - np.exp(-kf)
    nsq = float(n_max) ** 2
    ratio = float(kf.max()) / nsq
    if ratio >= 1:
        raise ResourceError(f"tail series needs k < N^2; need N > {math.isqrt(int(kf.max())) + 1}")
    jmax = tail_terms_needed(ratio, n_max, 18)
    t = scaled_tail_moments(table, n_max, jmax)
    u = np.ones_like(kf)  # C(k,j)/N^2j
    v = np.ones_like(kf)  # k^j/(j! N^2j)
    tail = np.zeros_like(kf)
    for j in range(jmax + 1):
        tail += (-1.0) ** j * (u - v) * t[j] / n_max
        u = u * np.maximum(kf - j, 0.0) / ((j + 1) * nsq)
        v = v * kf / ((j + 1) * nsq)
    rem = 2 * np.array([tail_remainder_bound(k / nsq, n_max, jmax) for k in kf])
    # the summands are bounded by ~ 1/n^2 e^{-k/n^2} and sum to O(1/sqrt k)
    errs = _kernels.summation_error(np.sqrt(np.pi / kf) + 1.0 / n_max, n_max) + rem
    return main + tail, errs, n_max


def verify_bound(kmin: int, kmax: int, ctx: PrecisionContext = DEFAULT_CONTEXT,
                 table: MobiusTable | None = None, precise: bool = False) -> list[BoundReport]:
    """|R(k)/k - c_k| against the four-term bound for kmin <= k <= kmax.

    ``precise`` evaluates both sides in multiprecision (ck_moebius and
    riesz_kummer2) instead of the float kernel.
    """
    if kmin < 1 or kmax < kmin:
        raise DomainError("need 1 <= kmin <= kmax")
    ks = np.arange(kmin, kmax + 1, dtype=np.int64)
    if precise:
        from .baez import ck_moebius

        lhs = []
        for k in ks:
            k = int(k)
            c = ck_moebius(k, table, ctx).value
            r = riesz_kummer2(k, table, ctx).value
            with ctx.workdps():
                lhs.append(abs(r / k - c))
    else:
        diff, _, _ = ck_minus_riesz(ks, table, None, ctx)
        lhs = np.abs(diff)
    out = []
    for k, l in zip(ks, lhs):
        lead, full = bound_rhs(k)
        out.append(BoundReport(int(k), l, lead, full, bool(l <= full)))
    return out


def fit_bound_exponent(kmin: int, kmax: int, ctx: PrecisionContext = DEFAULT_CONTEXT,
                       table: MobiusTable | None = None, min_extrema: int = 4) -> FitResult:
    """Power law of |c_k - R(k)/k| over every integer k in [kmin, kmax].

    One decade holds only about five oscillation maxima, hence the lower
    ``min_extrema`` default.
    """
    ks = np.arange(int(kmin), int(kmax) + 1, dtype=np.int64)
    diff, _, _ = ck_minus_riesz(ks, table, None, ctx)
    return fit_power_law_extrema(ks, diff, (kmin, kmax), min_extrema=min_extrema)


def approx_identity_33(k: int, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """|sum_j (-k)^j/(j! zeta(2j+2)) - sum_j (-1)^j C(k,j)/zeta(2j+2)|.

    Both sides are the raw alternating sums (R(k)/k and c_k), each at the
    precision its cancellation requires.
    """
    if k < 1 or k > BINOMIAL_CAP:
        raise DomainError(f"approx_identity_33 needs 1 <= k <= {BINOMIAL_CAP}")
    r = riesz_series(k, ctx).value
    c = ck_binomial(k, ctx).value
    with ctx.workdps():
        return abs(r / k - c)


def approx_identity_34(x, kmax: int | None = None, ctx: PrecisionContext = DEFAULT_CONTEXT,
                       table: MobiusTable | None = None) -> float:
    """Relative gap between e^x R(x)/x and sum_{k>=1} R(k) x^k / (k k!).

    The k = 0 term is left out (R(0) = 0 against the factor 1/k).
    """
    xf = float(x)
    if xf <= 0:
        raise DomainError("approx_identity_34 needs x > 0")
    if kmax is None:
        kmax = _poisson_cut(xf, 10.0 ** (-ctx.digits))
    r = riesz_kummer2(x, table, ctx).value
    with ctx.workdps():
        xm = mp.mpf(x)
        total = mp.mpf(0)
        term = mp.mpf(1)
        for k in range(1, kmax + 1):
            term *= xm / k
            total += riesz_kummer2(k, table, ctx).value / k * term
        rhs = mp.exp(xm) * r / xm
        return float(abs(rhs - total) / abs(rhs))


# ---------------------------------------------------------------------------
# alternating sum, Abel integral, power series
# ---------------------------------------------------------------------------


def alternating_sum(ctx: PrecisionContext = DEFAULT_CONTEXT):
    """sum_{k>=1} 2^-k / zeta(2k)."""
    kmax = int(math.ceil((ctx.dps + 5) * math.log2(10))) + 2
    inv = inverse_zeta_even(kmax, ctx.dps + 5)
    with ctx.workdps(5):
        total = mp.fsum(inv[k] * mp.ldexp(1, -k) for k in range(1, kmax + 1))
    with ctx.workdps():
        return +total


def abel_integrand(x, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """(1 - 2^-floor(x/2)) zeta'(x) / zeta(x)^2."""
    with ctx.workdps():
        x = mp.mpf(x)
        m = int(mp.floor(x / 2))
    em = zeta_em(x, ctx)
    with ctx.workdps():
        return (1 - mp.ldexp(1, -m)) * em.derivative / em.value**2


def abel_tail_bound(x, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """|integral_x^inf| <= 1 - 1/zeta(x), since |weight| <= 1 and zeta' < 0."""
    em = zeta_em(mp.mpf(x), ctx, derivative=False)
    with ctx.workdps():
        return 1 - 1 / em.value


def abel_integral_check(ctx: PrecisionContext = DEFAULT_CONTEXT, degree: int | None = None):
    """1 + integral_2^inf (1 - 2^-floor(x/2)) zeta'(x)/zeta(x)^2 dx.

    Gauss-Legendre per interval [2m, 2m+2), where the weight is constant and
    the integrand smooth; stops once the tail bound drops below 10^-digits.
    """
    if degree is None:
        degree = max(3, int(math.ceil(math.log2(ctx.dps))) + 1)
    tol = mp.mpf(10) ** (-ctx.digits)
    total = mp.mpf(1)
    m = 1
    with ctx.workdps():
        while True:
            a, b = 2 * m, 2 * m + 2
            weight = 1 - mp.ldexp(1, -m)

            def f(x):
                em = zeta_em(x, ctx)
                return em.derivative / em.value**2

            piece, est = mp.quad(f, [a, b], method="gauss-legendre", maxdegree=degree, error=True)
            if est > tol * 10:
                raise NumericError(f"quadrature on [{a}, {b}] did not converge (err ~ {mp.nstr(est, 3)})")
            total += weight * piece
            if abel_tail_bound(b, ctx) < tol:
                break
            m += 1
            if m > 10 * ctx.dps:
                raise NumericError("Abel integral tail did not fall below tolerance")
        return +total


def _euler_transform_alternating(cks: list, wp: int):
    """sum_k (-1)^k c_k via sum_n (Delta^n c)_0 / 2^(n+1), Delta from the c values."""
    with mp.workdps(wp):
        row = list(cks)
        total = mp.mpf(0)
        for n in range(len(cks)):
            total += mp.ldexp(row[0], -(n + 1))
            row = [row[i] - row[i + 1] for i in range(len(row) - 1)]
        return total


def power_series_identity(s, kmax: int | None = None, ctx: PrecisionContext = DEFAULT_CONTEXT,
                          table: MobiusTable | None = None) -> PowerSeriesCheck:
    """sum_k c_k s^k against (1/(1-s)) sum_k (-s/(1-s))^k / zeta(2k+2).

    For |s| < 1 the left side is truncated with tail bound
    (pi^2/6)|s|^(kmax+1)/(1-|s|).  At s = -1 the series only converges in
    the Euler/Abel sense; the left side is then the Euler transform of the
    computed c_k, with its own geometric 2^-(kmax+1) tail.
    """
    with ctx.workdps():
        s = mp.mpf(s)
    if not (-1 <= s < mp.mpf(1) / 2):
        raise DomainError("power series identity needs -1 <= s < 1/2")
    ratio = abs(s / (1 - s))
    n_rhs = 1 if ratio == 0 else int(math.ceil((ctx.dps + 5) / -math.log10(float(ratio)))) + 2
    inv = inverse_zeta_even(n_rhs + 1, ctx.dps + 5)
    with ctx.workdps(5):
        r = -s / (1 - s)
        rhs = mp.fsum(r**k * inv[k + 1] for k in range(n_rhs + 1)) / (1 - s)

    if s == -1:
        if kmax is None:
            kmax = int(math.ceil((ctx.dps + 5) * math.log2(10))) + 2
        cks = _ck_values(kmax, ctx.raised(int(kmax * math.log10(2)) + 10), table)
        lhs = _euler_transform_alternating(cks, ctx.dps + int(kmax * 0.31) + 20)
        with ctx.workdps():
            tail = mp.ldexp(1, -(kmax + 1))
    else:
        a = abs(float(s))
        if kmax is None:
            kmax = 0 if a == 0 else int(math.ceil((ctx.dps + 1) / -math.log10(a))) + 1
            kmax = min(kmax, BINOMIAL_CAP)
        cks = _ck_values(kmax, ctx, table)
        with ctx.workdps():
            lhs = mp.fsum(c * s**k for k, c in enumerate(cks))
            tail = mp.pi**2 / 6 * mp.mpf(a) ** (kmax + 1) / (1 - a)
    with ctx.workdps():
        return PowerSeriesCheck(+lhs, +rhs, abs(lhs - rhs), +tail)


# ---------------------------------------------------------------------------
# partial sums
# ---------------------------------------------------------------------------


def _tail_series_all(kmax: int, table: MobiusTable, n_max: int):
    """sum_j (-1)^j C(k,j) T(2j+2) for k = 0..kmax, with remainder bound."""
    kf = np.arange(kmax + 1, dtype=np.float64)
    nsq = float(n_max) ** 2
    ratio = kmax / nsq
    jmax = tail_terms_needed(ratio, n_max, 18)
    t = scaled_tail_moments(table, n_max, jmax)
    u = np.ones_like(kf)
    tail = np.zeros_like(kf)
    for j in range(jmax + 1):
        tail += (-1.0) ** j * u * t[j] / n_max
        u = u * np.maximum(kf - j, 0.0) / ((j + 1) * nsq)
    return tail, tail_remainder_bound(ratio, n_max, jmax)


def partial_sums(kmax: int, table: MobiusTable | None = None, ctx: PrecisionContext = DEFAULT_CONTEXT,
                 n_max: int | None = None) -> PartialSumTrace:
    """Plain and alternating partial sums of c_k for K = 0..kmax."""
    if kmax < 0:
        raise DomainError("kmax must be nonnegative")
    if kmax > PARTIAL_SUM_CAP:
        raise ResourceError(f"partial sums are capped at K = {PARTIAL_SUM_CAP}")
    if n_max is None:
        n_max = moebius_cutoff(kmax, ctx)
    if n_max * n_max <= kmax:
        raise ResourceError(f"swapped-order sums need N^2 > K; need N > {math.isqrt(kmax)}")
    table = table_for(n_max, table)
    plain, alt = _kernels.partial_main(int(kmax), table.values, n_max)
    tail, rem = _tail_series_all(kmax, table, n_max)
    signs = np.where(np.arange(kmax + 1) % 2 == 0, 1.0, -1.0)
    plain = plain + np.cumsum(tail)
    alt = alt + np.cumsum(signs * tail)
    K = np.arange(kmax + 1, dtype=np.int64)
    s_star = float(alternating_sum(PrecisionContext(20)))
    base_err = float(_kernels.summation_error(n_max, n_max))
    err = base_err + (K + 1) * (rem + 4 * _EPS * np.abs(tail).max(initial=0.0))
    below = np.flatnonzero(plain < -2)
    first = int(below[0]) if below.size else None
    return PartialSumTrace(K, plain, alt, np.abs(plain + 2), np.abs(alt - s_star),
                           err, err.copy(), n_max, first, s_star)


# ---------------------------------------------------------------------------
# fits
# ---------------------------------------------------------------------------


def _local_maxima(lx: np.ndarray, ay: np.ndarray):
    """Parabola-refined maxima of ln|y| against ln x."""
    with np.errstate(divide="ignore"):
        ly = np.log(ay)
    xs, ys = [], []
    for i in range(1, len(ay) - 1):
        if ay[i] > ay[i - 1] and ay[i] >= ay[i + 1] and np.isfinite(ly[i - 1:i + 2]).all():
            x0, x1, x2 = lx[i - 1:i + 2]
            y0, y1, y2 = ly[i - 1:i + 2]
            d = (x1 - x0) * (x1 - x2) * (x0 - x2)
            a = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / d
            b = (x2 * x2 * (y0 - y1) + x1 * x1 * (y2 - y0) + x0 * x0 * (y1 - y2)) / d
            if a < 0:
                xv = -b / (2 * a)
                if x0 <= xv <= x2:
                    c = y1 - a * x1 * x1 - b * x1
                    xs.append(xv)
                    ys.append(c - b * b / (4 * a))
                    continue
            xs.append(x1)
            ys.append(y1)
    return np.array(xs), np.array(ys)


def fit_power_law_extrema(x, y, window, min_extrema: int = 10, min_decades: float = 1.0,
                          pair_lobes: bool = False) -> FitResult:
    """Fit |y| ~ A x^p on the local maxima of |y| inside ``window``.

    With ``pair_lobes`` each pair of neighbouring maxima (one positive lobe,
    one negative) is replaced by the mean of the two magnitudes at the
    midpoint in ln x.  A slowly varying additive baseline d lowers one lobe
    by d and raises the other by d, so the mean cancels it to first order.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    lo, hi = float(window[0]), float(window[1])
    if not (0 < lo < hi):
        raise DomainError("window must satisfy 0 < lo < hi")
    if math.log10(hi / lo) < min_decades - 1e-12:
        raise NumericError(f"window [{lo:g}, {hi:g}] spans less than {min_decades:g} decade(s)")
    sel = (x >= lo) & (x <= hi)
    if sel.sum() < 3:
        raise DomainError("window contains fewer than 3 samples")
    order = np.argsort(x[sel])
    lx = np.log(x[sel][order])
    ay = np.abs(y[sel][order])
    ex, ey = _local_maxima(lx, ay)
    if len(ex) < min_extrema:
        raise NumericError(f"only {len(ex)} local extrema in window; need {min_extrema}")
    omega = math.pi / float(np.mean(np.diff(ex))) if len(ex) > 1 else math.inf
    if pair_lobes:
        if len(ex) < 3:
            raise NumericError("lobe pairing needs at least 3 extrema")
        ey = np.log(0.5 * (np.exp(ey[:-1]) + np.exp(ey[1:])))
        ex = 0.5 * (ex[:-1] + ex[1:])
    p, c = np.polyfit(ex, ey, 1)
    resid = ey - (p * ex + c)
    amp = math.exp(c) * math.sqrt(1 + (p / omega) ** 2)
    if pair_lobes:
        # mean of e^(p t) at t -/+ pi/(2 omega) overshoots by cosh(p pi / (2 omega))
        amp /= math.cosh(p * math.pi / (2 * omega))
    return FitResult(amp, float(p), (lo, hi), float(np.sqrt(np.mean(resid**2))), len(ex), omega)


def _xy(samples):
    if isinstance(samples, tuple) and len(samples) == 2:
        return np.asarray(samples[0], dtype=float), np.asarray(samples[1], dtype=float)
    xs = np.array([float(s.x) for s in samples])
    ys = np.array([float(s.value) for s in samples])
    return xs, ys


def fit_envelope(samples, window, min_extrema: int = 10, pair_lobes: bool = False) -> FitResult:
    """Envelope |R(x)| ~ A x^p from RieszSample records (or an (x, y) pair).

    R(x) carries a non-oscillating -1/(2 zeta'(-2) x) term that still rivals
    the oscillation near x = 10^4; ``pair_lobes`` removes its bias.
    """
    x, y = _xy(samples)
    return fit_power_law_extrema(x, y, window, min_extrema=min_extrema, pair_lobes=pair_lobes)


def estimate_decay_exponent(records, window, min_extrema: int = 10,
                            pair_lobes: bool = False) -> FitResult:
    """|c_k| ~ A k^p from CkRecord records (or a (k, c) pair)."""
    if isinstance(records, tuple) and len(records) == 2:
        k, c = records
    else:
        k = [r.k for r in records]
        c = [float(r.value) for r in records]
    return fit_power_law_extrema(k, c, window, min_extrema=min_extrema, pair_lobes=pair_lobes)


def partial_sum_envelopes(trace: PartialSumTrace, windows=None, min_extrema: int = 3):
    """Exploratory fits: |S_alt - s*| and |S_plain + 2| against K.

    Returns (alternating fit, plain fit).  The alternating trace flips by
    about c_K between consecutive K, so it is fitted on even K only.  The
    expected exponents are conjectural; callers report them rather than
    test them.
    """
    kmax = int(trace.K[-1])
    if windows is None:
        windows = ((1e3, float(kmax)), (1e3, float(kmax)))
    for lo, hi in windows:
        if math.log10(hi / max(lo, 1)) < 2 - 1e-9:
            raise NumericError("partial-sum envelope fits need windows spanning two decades")
    K = trace.K.astype(float)
    even = trace.K % 2 == 0
    alt_fit = fit_power_law_extrema(K[even], (trace.s_alt - trace.s_star)[even], windows[0],
                                    min_extrema=min_extrema, min_decades=2)
    plain_fit = fit_power_law_extrema(K, trace.s_plain + 2, windows[1],
                                      min_extrema=min_extrema, min_decades=2)
    return alt_fit, plain_fit


# ---------------------------------------------------------------------------
# Polya-Szego asymptotics
# ---------------------------------------------------------------------------


def polya_szego_check(delta, x, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """x^delta e^-x sum_{k>=1} k^-delta x^k/k!, which tends to 1 as x grows."""
    d = float(delta)
    if not 0 <= d < 1.5:
        raise DomainError("delta must lie in [0, 3/2)")
    if float(x) < 50:
        raise DomainError("polya_szego_check is asymptotic; need x >= 50")
    with ctx.workdps():
        xm = mp.mpf(x)
        dm = mp.mpf(delta)
        lx = mp.log(xm)
        total = mp.mpf(0)
        tol = mp.mpf(10) ** (-ctx.dps)
        k = 1
        while True:
            t = mp.exp(k * lx - mp.loggamma(k + 1) - xm - dm * mp.log(k) + dm * lx)
            total += t
            if k > xm and t < tol * total:
                break
            k += 1
        return +total


# ---------------------------------------------------------------------------
# spectral model against computed c_k
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SpectralComparison:
    amplitude_data: float
    amplitude_model: float
    amplitude_rel_diff: float
    max_phase_dev: float
    max_phase_dev_reverse: float
    crossings_data: int
    crossings_model: int
    window: tuple


def _harmonic_amplitude(theta: np.ndarray, y: np.ndarray) -> float:
    design = np.column_stack([np.cos(theta), np.sin(theta), np.ones_like(theta)])
    (alpha, beta, _), *_ = np.linalg.lstsq(design, y, rcond=None)
    return float(math.hypot(alpha, beta))


def _crossings(lk: np.ndarray, y: np.ndarray) -> np.ndarray:
    i = np.flatnonzero(np.sign(y[:-1]) * np.sign(y[1:]) < 0)
    return lk[i] - y[i] * (lk[i + 1] - lk[i]) / (y[i + 1] - y[i])


def spectral_comparison(coeffs, kmin: float = 1e4, kmax: float = 1e6, points: int = 1500,
                        ctx: PrecisionContext = DEFAULT_CONTEXT,
                        table: MobiusTable | None = None) -> SpectralComparison:
    """Compare k^(3/4) c_(k-1) with the spectral model on a log-uniform k grid.

    Amplitude: least-squares fit of alpha cos(theta) + beta sin(theta) + const,
    theta = gamma_1 ln k / 2, to data and model alike.  Phase: every sign
    change of the data is paired with the nearest sign change of the model
    and the deviation is |delta ln k| / ln k.  ``max_phase_dev_reverse``
    pairs the other way round, which also catches model crossings the data
    does not have.
    """
    from .baez import ck_moebius_batch, spectral_model

    if not coeffs:
        raise DomainError("spectral comparison needs at least one zero coefficient")
    ks = np.unique(np.round(np.geomspace(kmin, kmax, points)).astype(np.int64))
    c, _, _ = ck_moebius_batch(ks - 1, table, None, ctx)
    scale = ks.astype(float) ** 0.75
    y = c * scale
    m = spectral_model(ks, coeffs) * scale
    lk = np.log(ks.astype(float))
    theta = float(coeffs[0].gamma) * lk / 2
    amp_d = _harmonic_amplitude(theta, y)
    amp_m = _harmonic_amplitude(theta, m)
    zd, zm = _crossings(lk, y), _crossings(lk, m)
    if len(zd) == 0 or len(zm) == 0:
        raise NumericError("no sign changes in the comparison window")
    dev = max(float(np.min(np.abs(zm - z)) / z) for z in zd)
    rev = max(float(np.min(np.abs(zd - z)) / z) for z in zm)
    return SpectralComparison(amp_d, amp_m, abs(amp_d - amp_m) / amp_m, dev, rev, len(zd), len(zm),
                              (float(kmin), float(kmax)))
