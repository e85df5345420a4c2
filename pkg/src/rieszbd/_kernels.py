"""Double-precision inner loops for sweeps.

Every kernel exists twice: a numba ``@njit`` version and a pure-numpy
version with the same signature.  The public names at the bottom bind to
numba unless it is missing or ``RZL_DISABLE_NUMBA`` is set to a truthy value
(read once, at import).  ``benchmarks/bench_kernels.py`` times both.

Conventions shared by all kernels:

* ``mu`` is the int8 Möbius array from :mod:`rieszbd.sieve` (``mu[0]`` unused)
  and ``n_max`` the Möbius cut-off; terms run over 1 <= n <= n_max.
* Sums come back together with the sum of absolute values of their terms,
  which callers turn into rounding-error estimates.
* Parallel loops are over independent output blocks; each block starts its
  own state from scratch, so results do not depend on the thread count.
"""

from __future__ import annotations

import math
import os

import numpy as np

_FLAG = os.environ.get("RZL_DISABLE_NUMBA", "").strip().lower()
NUMBA_DISABLED = _FLAG not in ("", "0", "false", "no")

try:
    import numba
    from numba import njit, prange

    if "NUMBA_THREADING_LAYER" not in os.environ:
        # the system TBB is often too old and only produces a warning
        numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

BLOCK = 512


# ---------------------------------------------------------------------------
# numpy implementations
# ---------------------------------------------------------------------------


def mobius_sieve_numpy(limit):
    mu = np.ones(limit + 1, dtype=np.int8)
    mu[0] = 0
    composite = np.zeros(limit + 1, dtype=np.bool_)
    for p in range(2, limit + 1):
        if composite[p]:
            continue
        composite[2 * p :: p] = True
        mu[p::p] *= -1
        if p <= limit // p:
            mu[p * p :: p * p] = 0
    return mu


def _weights(mu, n_max):
    n = np.arange(2, n_max + 1, dtype=np.float64)
    inv2 = 1.0 / (n * n)
    return mu[2 : n_max + 1].astype(np.float64), inv2


def riesz_main_numpy(xs, mu, n_max, shifted):
    m, inv2 = _weights(mu, n_max)
    w = m * inv2
    out = np.empty(len(xs))
    absout = np.empty(len(xs))
    for lo in range(0, len(xs), 64):
        x = np.asarray(xs[lo : lo + 64], dtype=np.float64)
        arg = -np.outer(x, inv2)
        e = np.expm1(arg) if shifted else np.exp(arg)
        first = np.expm1(-x) if shifted else np.exp(-x)
        terms = e * w
        out[lo : lo + 64] = first + terms.sum(axis=1)
        absout[lo : lo + 64] = np.abs(first) + np.abs(terms).sum(axis=1)
    return out, absout


def ck_main_at_numpy(ks, mu, n_max):
    m, inv2 = _weights(mu, n_max)
    w = m * inv2
    lq = np.log1p(-inv2)
    ks = np.asarray(ks, dtype=np.int64)
    out = np.empty(len(ks))
    absout = np.empty(len(ks))
    for lo in range(0, len(ks), 64):
        k = ks[lo : lo + 64].astype(np.float64)
        terms = np.exp(np.outer(k, lq)) * w
        first = (k == 0).astype(np.float64)
        out[lo : lo + 64] = first + terms.sum(axis=1)
        absout[lo : lo + 64] = first + np.abs(terms).sum(axis=1)
    return out, absout


def ck_main_strided_numpy(k0, stride, count, mu, n_max):
    ks = k0 + stride * np.arange(count, dtype=np.int64)
    return ck_main_at_numpy(ks, mu, n_max)


def partial_main_numpy(kmax, mu, n_max):
    m, inv2 = _weights(mu, n_max)
    lq = np.log1p(-inv2)
    walt = m * inv2 / (2.0 - inv2)
    plain = np.empty(kmax + 1)
    alt = np.empty(kmax + 1)
    for lo in range(0, kmax + 1, 128):
        kk = np.arange(lo, min(lo + 128, kmax + 1), dtype=np.float64) + 1.0
        logp = np.outer(kk, lq)
        one_minus_p = -np.expm1(logp)
        plain[lo : lo + len(kk)] = 1.0 + one_minus_p @ m
        sign = np.where(kk % 2 == 1, -1.0, 1.0)  # (-1)^(K+1)
        p = np.exp(logp)
        alt[lo : lo + len(kk)] = 1.0 + (1.0 - sign[:, None] * p) @ walt
    return plain, alt


def ckdiff_at_numpy(ks, mu, n_max):
    m, inv2 = _weights(mu, n_max)
    w = m * inv2
    lq = np.log1p(-inv2)
    ks = np.asarray(ks, dtype=np.float64)
    out = np.empty(len(ks))
    for lo in range(0, len(ks), 64):
        k = ks[lo : lo + 64]
        a = np.outer(k, lq)
        b = -np.outer(k, inv2)
        # q^k - e^{-k/n^2} = e^b * expm1(a - b)
        out[lo : lo + 64] = (np.exp(b) * np.expm1(a - b) * w).sum(axis=1)
    return out


# ---------------------------------------------------------------------------
# numba implementations
# ---------------------------------------------------------------------------

if HAVE_NUMBA:

    @njit(cache=True)
    def mobius_sieve_numba(limit):
        mu = np.zeros(limit + 1, dtype=np.int8)
        if limit >= 1:
            mu[1] = 1
        composite = np.zeros(limit + 1, dtype=np.bool_)
        cap = int(1.3 * limit / math.log(max(limit, 3))) + 16
        primes = np.empty(cap, dtype=np.int64)
        np_ = 0
        for i in range(2, limit + 1):
            if not composite[i]:
                primes[np_] = i
                np_ += 1
                mu[i] = -1
            for j in range(np_):
                p = primes[j]
                ip = i * p
                if ip > limit:
                    break
                composite[ip] = True
                if i % p == 0:
                    mu[ip] = 0
                    break
                mu[ip] = -mu[i]
        return mu

    @njit(cache=True)
    def _compact_numba(mu, n_max):
        """Squarefree n >= 2 as (mu(n)/n^2, 1/n^2, log(1 - 1/n^2))."""
        cnt = 0
        for n in range(2, n_max + 1):
            if mu[n] != 0:
                cnt += 1
        w = np.empty(cnt)
        inv2 = np.empty(cnt)
        lq = np.empty(cnt)
        j = 0
        for n in range(2, n_max + 1):
            if mu[n] != 0:
                v = 1.0 / (float(n) * float(n))
                inv2[j] = v
                w[j] = mu[n] * v
                lq[j] = math.log1p(-v)
                j += 1
        return w, inv2, lq

    @njit(cache=True, parallel=True)
    def riesz_main_numba(xs, mu, n_max, shifted):
        w, inv2, _ = _compact_numba(mu, n_max)
        m = xs.shape[0]
        out = np.empty(m)
        absout = np.empty(m)
        for i in prange(m):
            x = xs[i]
            first = math.expm1(-x) if shifted else math.exp(-x)
            s = first
            c = 0.0
            a = abs(first)
            for j in range(w.shape[0]):
                e = math.expm1(-x * inv2[j]) if shifted else math.exp(-x * inv2[j])
                term = w[j] * e
                t = s + term
                if abs(s) >= abs(term):
                    c += (s - t) + term
                else:
                    c += (term - t) + s
                s = t
                a += abs(term)
            out[i] = s + c
            absout[i] = a
        return out, absout

    @njit(cache=True, parallel=True)
    def ck_main_at_numba(ks, mu, n_max):
        w, _, lq = _compact_numba(mu, n_max)
        m = ks.shape[0]
        out = np.empty(m)
        absout = np.empty(m)
        for i in prange(m):
            k = ks[i]
            first = 1.0 if k == 0 else 0.0
            s = first
            c = 0.0
            a = first
            for j in range(w.shape[0]):
                term = w[j] * math.exp(k * lq[j])
                t = s + term
                if abs(s) >= abs(term):
                    c += (s - t) + term
                else:
                    c += (term - t) + s
                s = t
                a += abs(term)
            out[i] = s + c
            absout[i] = a
        return out, absout

    @njit(cache=True, parallel=True)
    def ck_main_strided_numba(k0, stride, count, mu, n_max):
        out = np.empty(count)
        absout = np.empty(count)
        nblocks = (count + BLOCK - 1) // BLOCK
        for b in prange(nblocks):
            lo = b * BLOCK
            hi = min(lo + BLOCK, count)
            pw = np.empty(n_max + 1)
            step = np.empty(n_max + 1)
            kb = k0 + stride * lo
            for n in range(2, n_max + 1):
                lq = math.log1p(-1.0 / (float(n) * float(n)))
                pw[n] = math.exp(kb * lq)
                step[n] = math.exp(stride * lq)
            for i in range(lo, hi):
                k = k0 + stride * i
                first = 1.0 if k == 0 else 0.0
                s = first
                c = 0.0
                a = first
                for n in range(2, n_max + 1):
                    mn = mu[n]
                    if mn != 0:
                        term = mn * pw[n] / (float(n) * float(n))
                        t = s + term
                        if abs(s) >= abs(term):
                            c += (s - t) + term
                        else:
                            c += (term - t) + s
                        s = t
                        a += abs(term)
                    pw[n] *= step[n]
                out[i] = s + c
                absout[i] = a
        return out, absout

    @njit(cache=True, parallel=True)
    def partial_main_numba(kmax, mu, n_max):
        count = kmax + 1
        plain = np.empty(count)
        alt = np.empty(count)
        nblocks = (count + BLOCK - 1) // BLOCK
        for b in prange(nblocks):
            lo = b * BLOCK
            hi = min(lo + BLOCK, count)
            pw = np.empty(n_max + 1)  # q^(K+1)
            q = np.empty(n_max + 1)
            for n in range(2, n_max + 1):
                inv2 = 1.0 / (float(n) * float(n))
                q[n] = 1.0 - inv2
                pw[n] = math.exp((lo + 1) * math.log1p(-inv2))
            for kk in range(lo, hi):
                sgn = -1.0 if (kk + 1) % 2 == 1 else 1.0
                sp = 1.0
                cp = 0.0
                sa = 1.0
                ca = 0.0
                for n in range(2, n_max + 1):
                    mn = mu[n]
                    if mn != 0:
                        inv2 = 1.0 / (float(n) * float(n))
                        tp = mn * (1.0 - pw[n])
                        t = sp + tp
                        if abs(sp) >= abs(tp):
                            cp += (sp - t) + tp
                        else:
                            cp += (tp - t) + sp
                        sp = t
                        ta = mn * inv2 * (1.0 - sgn * pw[n]) / (2.0 - inv2)
                        t = sa + ta
                        if abs(sa) >= abs(ta):
                            ca += (sa - t) + ta
                        else:
                            ca += (ta - t) + sa
                        sa = t
                    pw[n] *= q[n]
                plain[kk] = sp + cp
                alt[kk] = sa + ca
        return plain, alt

    @njit(cache=True, parallel=True)
    def ckdiff_at_numba(ks, mu, n_max):
        w, inv2, lq = _compact_numba(mu, n_max)
        m = ks.shape[0]
        out = np.empty(m)
        for i in prange(m):
            k = float(ks[i])
            s = 0.0
            c = 0.0
            for j in range(w.shape[0]):
                bb = -k * inv2[j]
                term = w[j] * math.exp(bb) * math.expm1(k * lq[j] - bb)
                t = s + term
                if abs(s) >= abs(term):
                    c += (s - t) + term
                else:
                    c += (term - t) + s
                s = t
            out[i] = s + c
        return out


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------

USE_NUMBA = HAVE_NUMBA and not NUMBA_DISABLED
BACKEND = "numba" if USE_NUMBA else "numpy"

_NAMES = (
    "mobius_sieve",
    "riesz_main",
    "ck_main_at",
    "ck_main_strided",
    "partial_main",
    "ckdiff_at",
)


def implementations(backend: str) -> dict:
    """Kernel table for ``backend`` ("numba" or "numpy")."""
    if backend == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba is not importable")
    return {name: globals()[f"{name}_{backend}"] for name in _NAMES}


for _name, _fn in implementations(BACKEND).items():
    globals()[_name] = _fn


def set_threads(n: int | None) -> None:
    """Cap numba's thread pool; no-op on the numpy path."""
    if n and USE_NUMBA:
        numba.set_num_threads(max(1, min(int(n), numba.config.NUMBA_NUM_THREADS)))


def summation_error(abssum, n_terms) -> np.ndarray:
    """Conservative rounding bound for a float sum of ``n_terms`` terms."""
    eps = np.finfo(np.float64).eps
    return 4.0 * eps * np.asarray(abssum) * max(1.0, math.log2(max(n_terms, 2)))
