"""Arbitrary-precision plumbing: precision context, Bernoulli numbers, Gamma.

mpmath supplies the multiprecision scalars (``mpf``/``mpc``); the functions
here are built on top of them.  All evaluators take a :class:`PrecisionContext`
and run under ``mpmath.workdps`` so callers never touch global precision.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, replace
from fractions import Fraction

import mpmath as mp

from .errors import DomainError, ResourceError

BigReal = mp.mpf
BigComplex = mp.mpc

BERNOULLI_CAP = 10_000


@dataclass(frozen=True)
class PrecisionContext:
    """Working precision for every multiprecision evaluation.

    ``digits`` is the accuracy callers ask for; ``guard_digits`` are carried
    internally on top of it.  ``series_tail_factor`` inflates truncation
    lengths (Möbius cut-offs, series term counts) beyond the bare minimum.
    """

    digits: int = 40
    guard_digits: int = 10
    series_tail_factor: float = 2.0

    def __post_init__(self):
        if self.digits < 15:
            raise DomainError(f"digits must be >= 15, got {self.digits}")
        if self.guard_digits < 10:
            raise DomainError(f"guard_digits must be >= 10, got {self.guard_digits}")
        if not self.series_tail_factor >= 1.0:
            raise DomainError("series_tail_factor must be >= 1")

    @property
    def dps(self) -> int:
        return self.digits + self.guard_digits

    def workdps(self, extra: int = 0):
        return mp.workdps(self.dps + extra)

    def raised(self, extra: int = 20) -> "PrecisionContext":
        return replace(self, digits=self.digits + extra)

    def tolerance(self) -> BigReal:
        """10**-digits as an mpf (evaluated at working precision)."""
        with self.workdps():
            return mp.mpf(10) ** (-self.digits)


DEFAULT_CONTEXT = PrecisionContext()


# --------------------------------------------------------------------------
# Bernoulli numbers
# --------------------------------------------------------------------------

_bern_lock = threading.Lock()
_bern_even: list[Fraction] = [Fraction(1)]  # _bern_even[m] == B_{2m}


def _tangent_numbers(n: int) -> list[int]:
    """Tangent numbers T_1..T_n (index 0 unused), integer-only O(n^2)."""
    t = [0] * (n + 1)
    t[1] = 1
    for k in range(2, n + 1):
        t[k] = (k - 1) * t[k - 1]
    for k in range(2, n + 1):
        for j in range(k, n + 1):
            t[j] = (j - k) * t[j - 1] + (j - k + 2) * t[j]
    return t


def _extend_bernoulli(m_max: int) -> None:
    global _bern_even
    with _bern_lock:
        have = len(_bern_even) - 1
        if have >= m_max:
            return
        target = max(m_max, 2 * have, 32)
        t = _tangent_numbers(target)
        out = [Fraction(1)]
        for k in range(1, target + 1):
            p = 1 << (2 * k)
            sign = 1 if k % 2 == 1 else -1
            out.append(Fraction(sign * 2 * k * t[k], p * (p - 1)))
        _bern_even = out


def bernoulli_exact(n: int) -> Fraction:
    """B_n as an exact rational (B_1 = -1/2)."""
    if n < 0:
        raise DomainError("Bernoulli index must be nonnegative")
    if n == 1:
        return Fraction(-1, 2)
    if n % 2:
        return Fraction(0)
    if n > BERNOULLI_CAP:
        raise ResourceError(f"Bernoulli index {n} exceeds cap {BERNOULLI_CAP}")
    m = n // 2
    if m >= len(_bern_even):
        _extend_bernoulli(m)
    return _bern_even[m]


def bernoulli(n: int, ctx: PrecisionContext = DEFAULT_CONTEXT) -> BigReal:
    """Even-index Bernoulli number B_n rounded to the context precision."""
    if n < 0 or (n % 2 and n > 1) or n == 1:
        raise DomainError(f"bernoulli() needs an even nonnegative index, got {n}")
    b = bernoulli_exact(n)
    with ctx.workdps():
        return mp.mpf(b.numerator) / b.denominator


# --------------------------------------------------------------------------
# Gamma
# --------------------------------------------------------------------------


def _is_nonpositive_integer(z) -> bool:
    return mp.im(z) == 0 and mp.re(z) <= 0 and mp.re(z) == mp.floor(mp.re(z))


def _stirling_loggamma(w, digits: int):
    """Stirling series for log Gamma(w); requires |w| large vs. ``digits``."""
    s = (w - mp.mpf(0.5)) * mp.log(w) - w + mp.log(2 * mp.pi) / 2
    eps = mp.mpf(10) ** (-digits)
    w2 = w * w
    wpow = w
    prev = None
    m = 1
    while True:
        b = bernoulli_exact(2 * m)
        term = (mp.mpf(b.numerator) / b.denominator) / ((2 * m) * (2 * m - 1) * wpow)
        mag = abs(term)
        if prev is not None and mag > prev:
            raise ResourceError("Stirling series diverged; shift too small")
        s += term
        if mag < eps * max(1, abs(s)):
            return s
        prev = mag
        wpow *= w2
        m += 1


def gamma(z, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """Gamma(z) for real or complex z.

    Uses the Stirling series after shifting z upward so that |z + r| exceeds
    the working digit count, then divides out z(z+1)...(z+r-1).  The
    reflection formula handles Re z < 1/2.
    """
    with mp.workdps(ctx.dps + 15):
        z = mp.mpmathify(z)
        is_real = not isinstance(z, mp.mpc)
        if _is_nonpositive_integer(z):
            raise DomainError(f"Gamma has a pole at {z}")
        if mp.re(z) < 0.5:
            val = mp.pi / (mp.sin(mp.pi * z) * gamma(1 - z, ctx))
        else:
            wmin = max(ctx.dps, 12)
            re, im = mp.re(z), mp.im(z)
            need = wmin * wmin - im * im
            shift = 0 if need <= 0 else max(0, int(mp.ceil(mp.sqrt(need) - re)))
            prod = mp.mpf(1)
            for i in range(shift):
                prod *= z + i
            val = mp.exp(_stirling_loggamma(z + shift, ctx.dps + 10)) / prod
        if is_real:
            val = mp.re(val)
    with ctx.workdps():
        return +val


def stirling_factorial_bounds(k: int, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """Robbins' bracket sqrt(2 pi k) k^k e^{-k+theta}, 1/(12k+1) < theta < 1/(12k)."""
    if k < 1:
        raise DomainError("stirling_factorial_bounds needs k >= 1")
    with ctx.workdps():
        k = mp.mpf(k)
        base = mp.sqrt(2 * mp.pi * k) * k**k * mp.exp(-k)
        return base * mp.exp(1 / (12 * k + 1)), base * mp.exp(1 / (12 * k))


def digits_needed_binomial(k: int) -> int:
    """Working digits for the raw binomial c_k sum: ceil(k log10 k) + 30."""
    return math.ceil(k * math.log10(max(k, 2))) + 30
