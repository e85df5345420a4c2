"""The Riesz function R(x) by three representations, and its first zero.

* ``series``  - R(x) = x sum_k (-x)^k / (k! zeta(2k+2)), multiprecision with
  digits + 0.44 x extra digits to absorb the alternating cancellation.
* ``kummer1`` - x sum_n mu(n)/n^2 exp(-x/n^2), truncated at N; the tail is
  only bounded (|mu| <= 1 gives <= 1/N), so this is the coarse method.
* ``kummer2`` - x (6/pi^2 + sum_n mu(n)/n^2 expm1(-x/n^2)).  The tail n > N
  is not dropped: expanding expm1 in powers of x/n^2 turns it into
  sum_{j>=1} (-x)^j/j! T(2j+2) with T the Möbius tail moments of
  :mod:`rieszbd.zeta`.  The expansion converges like (x/N^2)^j / j!, so the
  cut-off is N = max(ceil(4 sqrt(x) * series_tail_factor), 16), which keeps
  x/N^2 <= 1/64 at the default factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import mpmath as mp
import numpy as np
from scipy.optimize import brentq

from . import _kernels
from .errors import DomainError, NumericError, ResourceError
from .mpcore import DEFAULT_CONTEXT, PrecisionContext
from .sieve import MobiusTable, table_for
from .zeta import (
    inverse_zeta_even,
    mobius_tail_moments,
    scaled_tail_moments,
    tail_remainder_bound,
    tail_terms_needed,
)

SERIES_X_CAP = 1e4
ZERO_BRACKET = (1.0, 1.3)
INV_ZETA2 = 6.0 / math.pi**2
_EPS = float(np.finfo(np.float64).eps)


class RieszMethod(str, Enum):
    SERIES = "series"
    KUMMER1 = "kummer1"
    KUMMER2 = "kummer2"


@dataclass(frozen=True)
class RieszSample:
    x: object
    value: object
    method: RieszMethod
    terms_used: int
    err_estimate: object


def kummer_cutoff(x: float, ctx: PrecisionContext = DEFAULT_CONTEXT) -> int:
    return max(int(math.ceil(4.0 * math.sqrt(max(float(x), 0.0)) * ctx.series_tail_factor)), 16)


# ---------------------------------------------------------------------------
# raw power series
# ---------------------------------------------------------------------------


def riesz_series(x, ctx: PrecisionContext = DEFAULT_CONTEXT) -> RieszSample:
    xf = float(x)
    if abs(xf) > SERIES_X_CAP:
        raise ResourceError(
            f"raw series at |x|={xf:g} needs ~{0.44 * abs(xf):.0f} extra digits; use kummer2"
        )
    extra = int(math.ceil(math.log10(math.e) * xf)) if xf > 0 else 0
    wp = ctx.dps + extra + 5
    # terms until |x|^k/k! < 10^-(dps) past the peak at k ~ |x|
    ax = max(abs(xf), 1e-300)
    k_end = int(abs(xf)) + 2
    while k_end * math.log(ax) - math.lgamma(k_end + 1) > -(ctx.dps + 5) * math.log(10):
        k_end += 1
    inv = inverse_zeta_even(k_end + 2, wp)
    with mp.workdps(wp):
        xm = mp.mpf(x)
        term = mp.mpf(1)  # (-x)^k / k!
        total = mp.mpf(0)
        absmax = mp.mpf(0)
        for k in range(k_end + 1):
            t = term * inv[k + 1]
            total += t
            absmax = max(absmax, abs(t))
            term *= -xm / (k + 1)
        nxt = abs(term * inv[k_end + 2])
        remainder = nxt if xf >= 0 else 2 * nxt
        err = abs(xm) * (remainder + absmax * (k_end + 1) * mp.mpf(10) ** (-wp))
        value = xm * total
    with ctx.workdps():
        return RieszSample(mp.mpf(x), +value, RieszMethod.SERIES, k_end + 1, +err)


# ---------------------------------------------------------------------------
# Kummer forms, float batches
# ---------------------------------------------------------------------------


def kummer1_batch(xs, table: MobiusTable, n_max: int | None = None):
    """Float kummer1 over an array; returns (values, errs, N)."""
    n_max = table.limit if n_max is None else int(n_max)
    table.require(n_max)
    xs = np.ascontiguousarray(xs, dtype=np.float64)
    if np.any(xs < 0):
        raise DomainError("kummer forms need x >= 0")
    main, absmain = _kernels.riesz_main(xs, table.values, n_max, False)
    values = xs * main
    errs = xs * (1.0 / n_max + _kernels.summation_error(absmain, n_max))
    return values, errs, n_max


def kummer2_batch(xs, table: MobiusTable | None = None, n_max: int | None = None,
                  ctx: PrecisionContext = DEFAULT_CONTEXT):
    """Float kummer2 with the Möbius tail summed; returns (values, errs, N)."""
    xs = np.ascontiguousarray(xs, dtype=np.float64)
    if np.any(xs < 0):
        raise DomainError("kummer forms need x >= 0")
    if n_max is None:
        n_max = kummer_cutoff(xs.max(initial=0.0), ctx)
    table = table_for(n_max, table)
    ratio = float(xs.max(initial=0.0)) / n_max**2
    jmax = max(tail_terms_needed(ratio, n_max, 18), 1)
    t = scaled_tail_moments(table, n_max, jmax)
    main, absmain = _kernels.riesz_main(xs, table.values, n_max, True)
    r = xs / float(n_max) ** 2
    v = np.ones_like(xs)
    tail = np.zeros_like(xs)
    abstail = np.zeros_like(xs)
    for j in range(1, jmax + 1):
        v = v * r / j
        term = (-1.0) ** j * v * t[j] / n_max
        tail += term
        abstail += np.abs(term)
    values = xs * (INV_ZETA2 + main + tail)
    rem = np.array([tail_remainder_bound(float(ri), n_max, jmax) for ri in np.atleast_1d(r)])
    errs = xs * (
        _kernels.summation_error(absmain + INV_ZETA2, n_max) + 4 * _EPS * abstail + rem
    )
    return values, errs, n_max


# ---------------------------------------------------------------------------
# Kummer forms, scalar
# ---------------------------------------------------------------------------


def riesz_kummer1(x, table: MobiusTable | None = None, ctx: PrecisionContext = DEFAULT_CONTEXT,
                  n_max: int | None = None) -> RieszSample:
    """Truncated first Kummer form, evaluated in double precision.

    Its truncation error (bounded by x/N) dominates rounding, so there is no
    multiprecision path.
    """
    if table is None:
        table = table_for(n_max or 10**6)
    values, errs, n = kummer1_batch(np.array([float(x)]), table, n_max)
    return RieszSample(float(x), float(values[0]), RieszMethod.KUMMER1, n, float(errs[0]))


def riesz_kummer2(x, table: MobiusTable | None = None, ctx: PrecisionContext = DEFAULT_CONTEXT,
                  n_max: int | None = None, precise: bool = True) -> RieszSample:
    if float(x) < 0:
        raise DomainError("kummer2 needs x >= 0")
    n_max = kummer_cutoff(float(x), ctx) if n_max is None else int(n_max)
    table = table_for(n_max, table)
    if not precise:
        values, errs, n = kummer2_batch(np.array([float(x)]), table, n_max, ctx)
        return RieszSample(float(x), float(values[0]), RieszMethod.KUMMER2, n, float(errs[0]))

    wp = ctx.dps + 5
    ratio = float(x) / n_max**2
    jmax = max(tail_terms_needed(ratio, n_max, wp), 1)
    moments = mobius_tail_moments(table, n_max, jmax, wp)
    with mp.workdps(wp):
        xm = mp.mpf(x)
        main = mp.mpf(0)
        absmain = mp.mpf(0)
        for n in table.squarefree(n_max):
            n = int(n)
            t = int(table.values[n]) * mp.expm1(-xm / (n * n)) / (n * n)
            main += t
            absmain += abs(t)
        tail = mp.mpf(0)
        c = mp.mpf(1)
        for j in range(1, jmax + 1):
            c *= -xm / j
            tail += c * moments[j]
        inner = inverse_zeta_even(1, wp)[1] + main + tail
        err = abs(xm) * (
            mp.mpf(tail_remainder_bound(ratio, n_max, jmax))
            + (absmain + 1) * n_max * mp.mpf(10) ** (-wp)
        )
        value = xm * inner
    with ctx.workdps():
        return RieszSample(mp.mpf(x), +value, RieszMethod.KUMMER2, n_max, +err)


def riesz_eval(x, method: str | RieszMethod = RieszMethod.KUMMER2, table: MobiusTable | None = None,
               ctx: PrecisionContext = DEFAULT_CONTEXT) -> RieszSample:
    method = RieszMethod(method)
    if method is RieszMethod.SERIES:
        return riesz_series(x, ctx)
    if method is RieszMethod.KUMMER1:
        return riesz_kummer1(x, table, ctx)
    return riesz_kummer2(x, table, ctx)


# ---------------------------------------------------------------------------
# first zero, sweeps
# ---------------------------------------------------------------------------


def _scan_bracket(f, lo=0.5, hi=20.0, step=0.05):
    a, fa = lo, f(lo)
    x = lo + step
    while x <= hi:
        fx = f(x)
        if fa * fx < 0:
            return a, x
        a, fa = x, fx
        x += step
    raise NumericError(f"no sign change of R found in [{lo}, {hi}]")


def first_zero(ctx: PrecisionContext = DEFAULT_CONTEXT, table: MobiusTable | None = None,
               bracket: tuple[float, float] = ZERO_BRACKET, scan: bool = False):
    """First positive zero of R: Brent on kummer2, then secant polish in mp."""

    def f_float(t):
        return float(riesz_kummer2(t, table, ctx).value)

    if scan:
        bracket = _scan_bracket(f_float)
    lo, hi = bracket
    if f_float(lo) * f_float(hi) > 0:
        raise NumericError(f"R does not change sign on [{lo}, {hi}]")
    root = brentq(f_float, lo, hi, xtol=1e-14, rtol=4 * _EPS, maxiter=200)

    def f_mp(t):
        return riesz_kummer2(t, table, ctx).value

    with ctx.workdps():
        x0, x1 = mp.mpf(root), mp.mpf(root) * (1 + mp.mpf(10) ** -9)
        f0, f1 = f_mp(x0), f_mp(x1)
        tol = mp.mpf(10) ** (-ctx.digits)
        for _ in range(20):
            if f1 == f0:
                break
            x2 = x1 - f1 * (x1 - x0) / (f1 - f0)
            x0, f0 = x1, f1
            x1, f1 = x2, f_mp(x2)
            if abs(x1 - x0) < tol:
                break
        if not lo <= x1 <= hi:
            raise NumericError("secant polish left the bracket")
        return +x1


def sweep_grid(xmax: float, points: int, spacing: str = "linear", xmin: float | None = None) -> np.ndarray:
    if points < 1 or points > 10**6:
        raise DomainError("points must be in 1..10^6")
    if spacing == "linear":
        lo = xmax / points if xmin is None else xmin
        return np.linspace(lo, xmax, points)
    if spacing == "log":
        lo = 1.0 if xmin is None else xmin
        if lo <= 0:
            raise DomainError("log spacing needs xmin > 0")
        return np.geomspace(lo, xmax, points)
    raise DomainError(f"unknown spacing {spacing!r}")


def riesz_sweep_arrays(xmax, points, spacing="linear", ctx: PrecisionContext = DEFAULT_CONTEXT,
                       table: MobiusTable | None = None, xmin=None):
    xs = sweep_grid(float(xmax), int(points), spacing, xmin)
    values, errs, n = kummer2_batch(xs, table, None, ctx)
    return xs, values, errs, n


def riesz_sweep(xmax, points, spacing="linear", ctx: PrecisionContext = DEFAULT_CONTEXT,
                table: MobiusTable | None = None, xmin=None) -> list[RieszSample]:
    xs, values, errs, n = riesz_sweep_arrays(xmax, points, spacing, ctx, table, xmin)
    return [
        RieszSample(float(x), float(v), RieszMethod.KUMMER2, n, float(e))
        for x, v, e in zip(xs, values, errs)
    ]
