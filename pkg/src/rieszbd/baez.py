"""The sequence c_k = sum_j (-1)^j C(k,j) / zeta(2j+2) by several routes.

``binomial`` and ``difftable`` evaluate the alternating binomial sum itself
(the difference table is the same sum organised as repeated forward
differences).  Both lose about k log10 k digits to cancellation, so they run
at that much extra precision and are capped at k = 2000.

``moebius`` uses c_k = sum_n mu(n)/n^2 (1 - 1/n^2)^k.  The sum is cut at
N >= 4 sqrt(k+1) * series_tail_factor and the remainder is recovered exactly
up to a controlled series: for n > N, expanding (1 - 1/n^2)^k binomially
gives sum_j (-1)^j C(k,j) T(2j+2), where T are the Möbius tail moments.
Term j is at most (k/N^2)^j / (j! (2j+1) N), so with k/N^2 <= 1/16 a few
dozen terms reach any working precision.

``spectral`` is the explicit-formula model
c_{k-1} ~ k^(-3/4) sum_i [a_i cos(gamma_i ln k / 2) - b_i sin(gamma_i ln k / 2)]
built from the zero coefficients of :mod:`rieszbd.zeros`.  It has no error
bar: the lower-order remainder of that expansion is not modelled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import mpmath as mp
import numpy as np

from . import _kernels
from .errors import DomainError, ResourceError
from .mpcore import DEFAULT_CONTEXT, PrecisionContext, digits_needed_binomial
from .sieve import MobiusTable, table_for
from .zeta import (
    inverse_zeta_even,
    mobius_tail_moments,
    scaled_tail_moments,
    tail_remainder_bound,
    tail_terms_needed,
)

BINOMIAL_CAP = 2000
PRECISE_SWEEP_CAP = 2000
FLOAT_DIGITS = 15
_EPS = float(np.finfo(np.float64).eps)


class CkMethod(str, Enum):
    BINOMIAL = "binomial"
    MOEBIUS = "moebius"
    DIFFTABLE = "difftable"
    SPECTRAL = "spectral"


@dataclass(frozen=True)
class CkRecord:
    k: int
    value: object
    method: CkMethod
    precision_digits: int
    err_estimate: object


def moebius_cutoff(k: int, ctx: PrecisionContext = DEFAULT_CONTEXT) -> int:
    return max(int(math.ceil(4.0 * math.sqrt(k + 1) * ctx.series_tail_factor)), 16)


def _check_k(k) -> int:
    if int(k) != k or k < 0:
        raise DomainError(f"k must be a nonnegative integer, got {k}")
    return int(k)


# ---------------------------------------------------------------------------
# binomial sum and difference table
# ---------------------------------------------------------------------------


def binomial_precision(k: int, ctx: PrecisionContext = DEFAULT_CONTEXT) -> int:
    # cancellation costs at most log10(2^k) digits, sum_j C(k,j) = 2^k
    return max(digits_needed_binomial(k), ctx.dps + math.ceil(k * math.log10(2)) + 5)


def _binomial_sum(k: int, wp: int):
    inv = inverse_zeta_even(k + 1, wp)
    with mp.workdps(wp):
        total = mp.mpf(0)
        c = 1  # exact C(k, j)
        for j in range(k + 1):
            t = c * inv[j + 1]
            total += t if j % 2 == 0 else -t
            c = c * (k - j) // (j + 1)
        return total


def ck_binomial(k: int, ctx: PrecisionContext = DEFAULT_CONTEXT) -> CkRecord:
    k = _check_k(k)
    if k > BINOMIAL_CAP:
        raise ResourceError(
            f"binomial c_k for k={k} needs ~{digits_needed_binomial(k)} digits; "
            f"cap is k={BINOMIAL_CAP}, use the moebius method"
        )
    wp = binomial_precision(k, ctx)
    v1 = _binomial_sum(k, wp)
    v2 = _binomial_sum(k, wp + 20)
    with mp.workdps(wp):
        err = abs(v1 - v2) + mp.mpf(10) ** (-wp)
    return CkRecord(k, v1, CkMethod.BINOMIAL, wp, err)


class DiffTable:
    """Forward-difference triangle f_l^k = f_l^(k-1) - f_(l+1)^(k-1).

    Row 0 is f_l^0 = 1/zeta(2l+2) for l = 0..kmax and c_k = f_0^k.  The
    full triangle has (kmax+1)(kmax+2)/2 entries; it is kept only when
    ``keep_rows`` is set, otherwise only the leading column c_0..c_kmax.
    """

    def __init__(self, kmax: int, precision_digits: int, base: tuple, leading: tuple,
                 rows: tuple | None):
        self.kmax = kmax
        self.precision_digits = precision_digits
        self.base = base
        self.leading = leading
        self._rows = rows

    @property
    def has_rows(self) -> bool:
        return self._rows is not None

    def c(self, k: int):
        if not 0 <= k <= self.kmax:
            raise DomainError(f"k={k} outside 0..{self.kmax}")
        return self.leading[k]

    def entry(self, l: int, k: int):
        """f_l^k (requires the stored triangle unless k == 0 or l == 0)."""
        if k < 0 or l < 0 or l + k > self.kmax:
            raise DomainError(f"(l={l}, k={k}) outside the triangle l + k <= {self.kmax}")
        if k == 0:
            return self.base[l]
        if l == 0:
            return self.leading[k]
        if self._rows is None:
            raise DomainError("triangle not stored; rebuild with keep_rows=True")
        return self._rows[k][l]


def _difference_column(kmax: int, wp: int, keep_rows: bool):
    inv = inverse_zeta_even(kmax + 1, wp)
    base = tuple(inv[1 : kmax + 2])
    rows = [base] if keep_rows else None
    leading = [base[0]]
    row = list(base)
    with mp.workdps(wp):
        for _ in range(kmax):
            row = [row[l] - row[l + 1] for l in range(len(row) - 1)]
            leading.append(row[0])
            if keep_rows:
                rows.append(tuple(row))
    return base, tuple(leading), (tuple(rows) if keep_rows else None)


def ck_difftable(kmax: int, ctx: PrecisionContext = DEFAULT_CONTEXT,
                 keep_rows: bool | None = None) -> DiffTable:
    kmax = _check_k(kmax)
    if kmax > BINOMIAL_CAP:
        raise ResourceError(f"difference table beyond k={BINOMIAL_CAP} is not supported")
    if keep_rows is None:
        keep_rows = kmax <= 512
    wp = binomial_precision(kmax, ctx)
    base, leading, rows = _difference_column(kmax, wp, keep_rows)
    return DiffTable(kmax, wp, base, leading, rows)


# ---------------------------------------------------------------------------
# Möbius series
# ---------------------------------------------------------------------------


def ck_moebius(k: int, table: MobiusTable | None = None, ctx: PrecisionContext = DEFAULT_CONTEXT,
               n_max: int | None = None, precise: bool = True) -> CkRecord:
    k = _check_k(k)
    n_max = moebius_cutoff(k, ctx) if n_max is None else int(n_max)
    table = table_for(n_max, table)
    if not precise:
        values, errs, n = ck_moebius_batch(np.array([k]), table, n_max)
        return CkRecord(k, float(values[0]), CkMethod.MOEBIUS, FLOAT_DIGITS, float(errs[0]))

    wp = ctx.dps + 5
    with mp.workdps(wp):
        main = mp.mpf(0)
        absmain = mp.mpf(0)
        for n in table.squarefree(n_max):
            n2 = int(n) * int(n)
            t = int(table.values[n]) * (1 - mp.mpf(1) / n2) ** k / n2
            main += t
            absmain += abs(t)
    return _finish_precise(k, main, absmain, table, n_max, ctx)


def _finish_precise(k, main, absmain, table, n_max, ctx) -> CkRecord:
    """Add the Möbius tail series to a multiprecision main sum."""
    wp = ctx.dps + 5
    ratio = k / n_max**2
    if ratio >= 1:
        raise ResourceError(f"Möbius tail series needs k < N^2; need N > {math.isqrt(k) + 1}")
    jmax = min(k, tail_terms_needed(ratio, n_max, wp))
    # request a multiple of 16 so neighbouring k share one cached moment set
    moments = mobius_tail_moments(table, n_max, (jmax // 16 + 1) * 16, wp)
    with mp.workdps(wp):
        tail = mp.mpf(0)
        c = 1
        for j in range(jmax + 1):
            t = c * moments[j]
            tail += t if j % 2 == 0 else -t
            c = c * (k - j) // (j + 1)
        rem = 0.0 if jmax == k else tail_remainder_bound(ratio, n_max, jmax)
        err = mp.mpf(rem) + (absmain + 1) * n_max * mp.mpf(10) ** (-wp)
        value = main + tail
    with ctx.workdps():
        return CkRecord(k, +value, CkMethod.MOEBIUS, ctx.digits, +err)


def _moebius_sweep_precise(ks, table, n_max, ctx) -> list[CkRecord]:
    """Multiprecision c_k along an arithmetic progression ``ks``.

    Each power (1 - 1/n^2)^k is carried from one k to the next by a single
    multiplication with (1 - 1/n^2)^stride.
    """
    wp = ctx.dps + 5
    stride = ks[1] - ks[0] if len(ks) > 1 else 1
    out = []
    with mp.workdps(wp + 5):
        idx = [int(n) for n in table.squarefree(n_max)]
        sign = [int(table.values[n]) for n in idx]
        w = [mp.mpf(1) / (n * n) for n in idx]
        step = [(1 - wi) ** stride for wi in w]
        pw = [(1 - wi) ** ks[0] * wi for wi in w]
        for k in ks:
            main = mp.mpf(0)
            absmain = mp.mpf(0)
            for i in range(len(idx)):
                main += pw[i] if sign[i] > 0 else -pw[i]
                absmain += pw[i]
                pw[i] *= step[i]
            out.append(_finish_precise(k, main, absmain, table, n_max, ctx))
    return out


def _float_tail(ks: np.ndarray, table: MobiusTable, n_max: int):
    """Vectorised sum_j (-1)^j C(k,j) T(2j+2) with remainder bounds."""
    kf = ks.astype(np.float64)
    ratio = float(kf.max(initial=0.0)) / n_max**2
    if ratio >= 1:
        raise ResourceError(f"Möbius tail series needs k < N^2; need N > {math.isqrt(int(kf.max())) + 1}")
    jmax = tail_terms_needed(ratio, n_max, 18)
    t = scaled_tail_moments(table, n_max, jmax)
    nsq = float(n_max) ** 2
    u = np.ones_like(kf)  # C(k,j) / N^(2j)
    tail = np.zeros_like(kf)
    abstail = np.zeros_like(kf)
    for j in range(jmax + 1):
        term = (-1.0) ** j * u * t[j] / n_max
        tail += term
        abstail += np.abs(term)
        u = u * np.maximum(kf - j, 0.0) / ((j + 1) * nsq)
    rem = np.array([
        0.0 if k <= jmax else tail_remainder_bound(k / nsq, n_max, jmax) for k in kf
    ])
    return tail, 4 * _EPS * abstail + rem


def ck_moebius_batch(ks, table: MobiusTable | None = None, n_max: int | None = None,
                     ctx: PrecisionContext = DEFAULT_CONTEXT):
    """Float c_k at arbitrary indices; returns (values, errs, N)."""
    ks = np.ascontiguousarray(ks, dtype=np.int64)
    if np.any(ks < 0):
        raise DomainError("k must be nonnegative")
    if n_max is None:
        n_max = moebius_cutoff(int(ks.max(initial=0)), ctx)
    table = table_for(n_max, table)
    main, absmain = _kernels.ck_main_at(ks, table.values, n_max)
    tail, tail_err = _float_tail(ks, table, n_max)
    return main + tail, _kernels.summation_error(absmain, n_max) + tail_err, n_max


def ck_moebius_strided(k0: int, stride: int, count: int, table: MobiusTable | None = None,
                       n_max: int | None = None, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """Float c_k for k = k0 + stride*i, i < count, with incremental powers.

    Returns (ks, values, errs, N).
    """
    if k0 < 0 or stride < 1 or count < 1:
        raise DomainError("need k0 >= 0, stride >= 1, count >= 1")
    ks = k0 + stride * np.arange(count, dtype=np.int64)
    if n_max is None:
        n_max = moebius_cutoff(int(ks[-1]), ctx)
    table = table_for(n_max, table)
    main, absmain = _kernels.ck_main_strided(int(k0), int(stride), int(count), table.values, n_max)
    tail, tail_err = _float_tail(ks, table, n_max)
    # repeated multiplication adds ~ BLOCK roundings to each power
    mult = _kernels.BLOCK * _EPS * absmain
    return ks, main + tail, _kernels.summation_error(absmain, n_max) + mult + tail_err, n_max


# ---------------------------------------------------------------------------
# spectral model
# ---------------------------------------------------------------------------


def ck_spectral(k: int, coeffs, ctx: PrecisionContext = DEFAULT_CONTEXT) -> CkRecord:
    """Model value for c_(k-1); the record carries index k-1 and no error bar."""
    k = _check_k(k)
    if not coeffs:
        raise DomainError("spectral model needs at least one zero coefficient")
    if k < 100:
        raise DomainError("spectral model is asymptotic; need k >= 100")
    with ctx.workdps():
        lk = mp.log(k) / 2
        s = mp.fsum(c.a * mp.cos(c.gamma * lk) - c.b * mp.sin(c.gamma * lk) for c in coeffs)
        value = s * mp.power(k, mp.mpf(-0.75))
    return CkRecord(k - 1, value, CkMethod.SPECTRAL, ctx.digits, mp.nan)


def spectral_model(ks, coeffs) -> np.ndarray:
    """Float version of the spectral model at indices ``ks`` (value is for c_(k-1))."""
    if not coeffs:
        raise DomainError("spectral model needs at least one zero coefficient")
    kf = np.asarray(ks, dtype=np.float64)
    lk = np.log(kf) / 2
    s = np.zeros_like(kf)
    for c in coeffs:
        s += float(c.a) * np.cos(float(c.gamma) * lk) - float(c.b) * np.sin(float(c.gamma) * lk)
    return s * kf**-0.75


# ---------------------------------------------------------------------------
# sweeps
# ---------------------------------------------------------------------------


def ck_compute(k: int, method: str | CkMethod = CkMethod.MOEBIUS, table: MobiusTable | None = None,
               ctx: PrecisionContext = DEFAULT_CONTEXT, coeffs=None) -> CkRecord:
    method = CkMethod(method)
    if method is CkMethod.BINOMIAL:
        return ck_binomial(k, ctx)
    if method is CkMethod.DIFFTABLE:
        tab = ck_difftable(k, ctx, keep_rows=False)
        return CkRecord(k, tab.c(k), method, tab.precision_digits, mp.mpf(10) ** (-ctx.dps))
    if method is CkMethod.SPECTRAL:
        if coeffs is None:
            from .zeros import coefficient_table

            coeffs = coefficient_table(1, ctx)
        return ck_spectral(k + 1, coeffs, ctx)
    return ck_moebius(k, table, ctx)


def ck_sweep(kmax: int, method: str | CkMethod = CkMethod.MOEBIUS, stride: int = 1,
             ctx: PrecisionContext = DEFAULT_CONTEXT, table: MobiusTable | None = None,
             precise: bool | None = None) -> list[CkRecord]:
    """Records for k = 0, stride, 2*stride, ... <= kmax.

    The Möbius route runs in multiprecision up to kmax = 2000 and in the
    float kernels beyond that (or whenever ``precise`` is False).
    """
    kmax = _check_k(kmax)
    if stride < 1:
        raise DomainError("stride must be >= 1")
    method = CkMethod(method)
    ks = list(range(0, kmax + 1, stride))
    if method in (CkMethod.BINOMIAL, CkMethod.DIFFTABLE):
        if kmax > BINOMIAL_CAP:
            raise ResourceError(f"{method.value} sweep is capped at kmax={BINOMIAL_CAP}; use moebius")
        wp = binomial_precision(kmax, ctx)
        _, lead1, _ = _difference_column(kmax, wp, False)
        _, lead2, _ = _difference_column(kmax, wp + 20, False)
        with mp.workdps(wp):
            return [
                CkRecord(k, lead1[k], method, wp, abs(lead1[k] - lead2[k]) + mp.mpf(10) ** (-wp))
                for k in ks
            ]
    if method is CkMethod.SPECTRAL:
        raise DomainError("spectral sweeps go through spectral_model")
    if precise is None:
        precise = kmax <= PRECISE_SWEEP_CAP
    if precise:
        n_max = moebius_cutoff(kmax, ctx)
        table = table_for(n_max, table)
        return _moebius_sweep_precise(ks, table, n_max, ctx)
    kk, values, errs, _ = ck_moebius_strided(0, stride, len(ks), table, None, ctx)
    return [
        CkRecord(int(k), float(v), CkMethod.MOEBIUS, FLOAT_DIGITS, float(e))
        for k, v, e in zip(kk, values, errs)
    ]
