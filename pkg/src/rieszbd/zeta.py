"""Riemann zeta: even integers, Euler-Maclaurin on R and C, Möbius tails.

Euler-Maclaurin parameters
--------------------------
For working precision D digits we take M = ceil(D/2) + 2 Bernoulli
corrections and N = ceil((|s| + 2M + 1) * 10**(D/(2M)) / (2 pi)) + 1
explicit terms.  Successive corrections then shrink by roughly
(|s + 2m| / (2 pi N))**2 <= 10**(-D/M), so M of them reach 10**-D.  The
reported error is the standard remainder bound
|s + 2M + 1| / (Re s + 2M + 1) * |first omitted correction|.

Möbius tails
------------
``mobius_tail_moments`` returns T(2j+2) = sum_{n>N} mu(n) n^(-2j-2) for
j = 0..J, computed as 1/zeta(2j+2) minus the sieved prefix.  Since
|T(s)| <= N^(1-s)/(s-1), the subtraction loses about (s-1) log10 N digits,
so each moment is evaluated with that many extra digits.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import NamedTuple

import mpmath as mp
import numpy as np

from .errors import DomainError, ResourceError
from .mpcore import DEFAULT_CONTEXT, PrecisionContext, bernoulli_exact
from .sieve import MobiusTable

ZETA_EVEN_CAP = 10**4
_DIRECT_MAX_TERMS = 40


# ---------------------------------------------------------------------------
# zeta(2k)
# ---------------------------------------------------------------------------


def _direct_terms(s: int, dps: int) -> int:
    """Terms M so that the tail sum_{n>M} n^-s <= M^(1-s)/(s-1) < 10^-dps."""
    expo = dps / (s - 1)
    if expo > 6:
        return 10**6
    return int(math.ceil(10**expo)) + 1


def _zeta_even_at(k: int, dps: int):
    s = 2 * k
    if _direct_terms(s, dps) <= _DIRECT_MAX_TERMS:
        m = _direct_terms(s, dps)
        return mp.fsum(mp.mpf(n) ** (-s) for n in range(1, m + 1))
    if k > ZETA_EVEN_CAP:
        raise ResourceError(f"zeta(2k) for k={k} exceeds cap {ZETA_EVEN_CAP}")
    b = bernoulli_exact(s)
    return abs(mp.mpf(b.numerator) / b.denominator) * (2 * mp.pi) ** s / (2 * mp.factorial(s))


def zeta_even(k: int, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """zeta(2k): (-1)^(k+1) B_2k (2 pi)^2k / (2 (2k)!); zeta(0) = -1/2."""
    if k < 0:
        raise DomainError("zeta_even needs k >= 0")
    with ctx.workdps():
        if k == 0:
            return mp.mpf(-0.5)
        with mp.workdps(ctx.dps + 10):
            v = _zeta_even_at(k, ctx.dps + 10)
        return +v


@lru_cache(maxsize=32)
def _inverse_zeta_even_cached(kmax: int, dps: int) -> tuple:
    with mp.workdps(dps + 10):
        out = [mp.mpf(-2)]
        pi2 = (2 * mp.pi) ** 2
        pw = mp.mpf(1)
        fact = mp.mpf(1)
        for k in range(1, kmax + 1):
            pw *= pi2
            fact *= (2 * k - 1) * (2 * k)
            s = 2 * k
            if _direct_terms(s, dps + 10) <= _DIRECT_MAX_TERMS:
                z = mp.fsum(mp.mpf(n) ** (-s) for n in range(1, _direct_terms(s, dps + 10) + 1))
            else:
                if k > ZETA_EVEN_CAP:
                    raise ResourceError(f"zeta(2k) for k={k} exceeds cap {ZETA_EVEN_CAP}")
                b = bernoulli_exact(s)
                z = abs(mp.mpf(b.numerator) / b.denominator) * pw / (2 * fact)
            out.append(1 / z)
    with mp.workdps(dps):
        return tuple(+v for v in out)


def inverse_zeta_even(kmax: int, dps: int) -> tuple:
    """(1/zeta(0), 1/zeta(2), ..., 1/zeta(2 kmax)) at ``dps`` digits (cached)."""
    return _inverse_zeta_even_cached(int(kmax), int(dps))


class ZetaEvenTable(NamedTuple):
    """zeta(2k) and 1/zeta(2k) for 1 <= k <= max_index (index 0 unused)."""

    max_index: int
    values: tuple
    inverses: tuple


def zeta_even_table(max_index: int, ctx: PrecisionContext = DEFAULT_CONTEXT) -> ZetaEvenTable:
    inv = inverse_zeta_even(max_index, ctx.dps)
    with ctx.workdps():
        vals = (mp.mpf(-0.5),) + tuple(1 / v for v in inv[1:])
    return ZetaEvenTable(max_index, vals, inv)


# ---------------------------------------------------------------------------
# Euler-Maclaurin
# ---------------------------------------------------------------------------


class EMResult(NamedTuple):
    value: object
    derivative: object
    error: object


def _em_parameters(abs_s: float, dps: int) -> tuple[int, int]:
    m = dps // 2 + 2
    n = int(math.ceil((abs_s + 2 * m + 1) * 10 ** (dps / (2 * m)) / (2 * math.pi))) + 1
    return max(n, 4), m


def zeta_em(s, ctx: PrecisionContext = DEFAULT_CONTEXT, derivative: bool = True) -> EMResult:
    """zeta(s) and zeta'(s) by term-wise Euler-Maclaurin, with error bound."""
    dps = ctx.dps + 5
    with mp.workdps(dps + 10):
        s = mp.mpmathify(s)
        if s == 1:
            raise DomainError("zeta has a pole at s = 1")
        n_terms, m_corr = _em_parameters(float(abs(s)), dps)
        big_n = mp.mpf(n_terms)
        ln_n = mp.log(big_n)
        val = mp.mpf(0)
        der = mp.mpf(0)
        for n in range(1, n_terms):
            t = mp.power(n, -s)
            val += t
            if derivative and n > 1:
                der -= mp.log(n) * t
        n_pow = mp.power(big_n, -s)  # N^-s
        head = big_n * n_pow / (s - 1)
        val += head + n_pow / 2
        if derivative:
            der += head * (-ln_n - 1 / (s - 1)) - ln_n * n_pow / 2
        rising = s  # (s)_{2m-1}
        harmonic = 1 / s  # sum_{i<2m-1} 1/(s+i)
        npow = n_pow / big_n  # N^{1-s-2m} for m = 1
        inv_n2 = 1 / (big_n * big_n)
        fact = mp.mpf(2)  # (2m)!
        term = None
        for m in range(1, m_corr + 2):
            b = bernoulli_exact(2 * m)
            term = mp.mpf(b.numerator) / b.denominator / fact * rising * npow
            if m == m_corr + 1:
                break
            val += term
            if derivative:
                der += term * (harmonic - ln_n)
            rising *= (s + 2 * m - 1) * (s + 2 * m)
            harmonic += 1 / (s + 2 * m - 1) + 1 / (s + 2 * m)
            npow *= inv_n2
            fact *= (2 * m + 1) * (2 * m + 2)
        sigma = mp.re(s)
        err = abs(s + 2 * m_corr + 1) / abs(sigma + 2 * m_corr + 1) * abs(term)
        rnd = mp.mpf(10) ** (-dps)
        err += rnd * (1 + abs(val))
        if derivative:
            # the differentiated remainder picks up a factor ~ |log N| + |H|
            err = err * (abs(ln_n) + abs(harmonic) + 1) + rnd * abs(der)
    with ctx.workdps():
        return EMResult(+val, (+der if derivative else None), +err)


def _check_real(s) -> None:
    if mp.mpf(s) < 1.5:
        raise DomainError(f"real-axis zeta evaluators need s >= 1.5, got {s}")


def zeta_real(s, ctx: PrecisionContext = DEFAULT_CONTEXT):
    _check_real(s)
    return zeta_em(mp.mpf(s), ctx, derivative=False).value


def zeta_deriv_real(s, ctx: PrecisionContext = DEFAULT_CONTEXT):
    _check_real(s)
    return zeta_em(mp.mpf(s), ctx).derivative


def _check_complex(s) -> None:
    if abs(mp.im(s)) > 1000:
        raise DomainError("|Im s| > 1000 is outside the supported range")
    if mp.re(s) <= 0:
        raise DomainError("zeta_complex supports Re s > 0 only")


def zeta_complex(s, ctx: PrecisionContext = DEFAULT_CONTEXT):
    s = mp.mpc(s)
    _check_complex(s)
    return zeta_em(s, ctx, derivative=False).value


def zeta_deriv_complex(s, ctx: PrecisionContext = DEFAULT_CONTEXT):
    s = mp.mpc(s)
    _check_complex(s)
    return zeta_em(s, ctx).derivative


# ---------------------------------------------------------------------------
# 1/zeta via Möbius
# ---------------------------------------------------------------------------


class DirichletEstimate(NamedTuple):
    value: object
    tail_bound: object


def inv_zeta_dirichlet(
    s, table: MobiusTable, ctx: PrecisionContext = DEFAULT_CONTEXT, n_max: int | None = None
) -> DirichletEstimate:
    """Truncated sum_{n<=N} mu(n) n^-s; |1/zeta(s) - value| <= N^(1-s)/(s-1)."""
    n_max = table.limit if n_max is None else n_max
    table.require(n_max)
    with ctx.workdps():
        s = mp.mpf(s)
        if s < 2:
            raise DomainError("inv_zeta_dirichlet needs s >= 2")
        idx = table.squarefree(n_max)
        total = mp.fsum(int(table.values[n]) * mp.power(int(n), -s) for n in idx)
        return DirichletEstimate(total, mp.power(n_max, 1 - s) / (s - 1))


@lru_cache(maxsize=64)
def _tail_moments_cached(table: MobiusTable, n_max: int, jmax: int, dps: int) -> tuple:
    table.require(n_max)
    top = dps + int(math.ceil((2 * jmax + 1) * math.log10(max(n_max, 2)))) + 10
    inv = inverse_zeta_even(jmax + 1, top)
    with mp.workdps(top):
        prefix = [mp.mpf(0)] * (jmax + 1)
        for n in table.squarefree(n_max):
            sign = int(table.values[n])
            x = mp.mpf(1) / (int(n) * int(n))
            p = x
            for j in range(jmax + 1):
                if sign > 0:
                    prefix[j] += p
                else:
                    prefix[j] -= p
                p *= x
        out = tuple(inv[j + 1] - prefix[j] for j in range(jmax + 1))
    return out


def mobius_tail_moments(table: MobiusTable, n_max: int, jmax: int, dps: int) -> tuple:
    """T(2j+2) = sum_{n > n_max} mu(n) n^-(2j+2) for j = 0..jmax (mpf, cached)."""
    return _tail_moments_cached(table, int(n_max), int(jmax), int(dps))


def scaled_tail_moments(table: MobiusTable, n_max: int, jmax: int) -> np.ndarray:
    """float64 t_j = T(2j+2) * N^(2j+1); each |t_j| <= 1/(2j+1)."""
    moments = mobius_tail_moments(table, n_max, jmax, 25)
    with mp.workdps(40):
        return np.array(
            [float(t * mp.mpf(n_max) ** (2 * j + 1)) for j, t in enumerate(moments)],
            dtype=np.float64,
        )


def tail_terms_needed(ratio: float, n_max: int, digits: float) -> int:
    """Smallest J with ratio^(J+1) / ((J+1)! (2J+3) N) < 10^-digits.

    This bounds the first omitted term of the binomially expanded Möbius tail
    (both sum_j C(k,j) T(2j+2) with ratio = k/N^2 and sum_j x^j/j! T(2j+2)
    with ratio = x/N^2).
    """
    if ratio <= 0:
        return 0
    log_target = -digits * math.log(10) + math.log(n_max)
    j = 0
    while True:
        nxt = (j + 1) * math.log(ratio) - math.lgamma(j + 2) - math.log(2 * j + 3)
        if nxt < log_target:
            return j
        j += 1
        if j > 10_000:
            raise ResourceError("Möbius tail expansion does not converge; raise N")


def tail_remainder_bound(ratio: float, n_max: int, jmax: int) -> float:
    """Bound on sum_{j > jmax} ratio^j / (j! (2j+1) N) (geometric majorant)."""
    if ratio <= 0:
        return 0.0
    j = jmax + 1
    first = math.exp(j * math.log(ratio) - math.lgamma(j + 1)) / ((2 * j + 1) * n_max)
    q = ratio / (j + 1)
    return first / (1 - q) if q < 1 else math.inf
