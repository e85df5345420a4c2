"""Time the numba kernels against the pure-numpy fallbacks.

    python benchmarks/bench_kernels.py [--repeat 3]

Each kernel runs once untimed (numba compiles on first call), then the best
of ``--repeat`` runs is reported along with the largest absolute difference
between the two backends.
"""

import argparse
import time

import numpy as np

from rieszbd import _kernels
from rieszbd.sieve import build_mobius


def best_of(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def max_gap(a, b):
    a = a if isinstance(a, tuple) else (a,)
    b = b if isinstance(b, tuple) else (b,)
    return max(float(np.max(np.abs(np.asarray(x, float) - np.asarray(y, float)))) for x, y in zip(a, b))


def cases(mu):
    xs = np.geomspace(1.0, 1e7, 2000)
    ks = np.unique(np.geomspace(1e3, 1e6, 2000).astype(np.int64))
    return {
        "mobius_sieve": (2_000_000,),
        "riesz_main": (xs, mu, 25_000, True),
        "ck_main_at": (ks, mu, 8000),
        "ck_main_strided": (10_000, 100, 2000, mu, 8000),
        "partial_main": (120_000, mu, 2772),
        "ckdiff_at": (ks[:500], mu, 8000),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if not _kernels.HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")
    mu = build_mobius(1 << 16).values
    fast = _kernels.implementations("numba")
    slow = _kernels.implementations("numpy")
    print(f"{'kernel':<18}{'numba [s]':>12}{'numpy [s]':>12}{'speedup':>10}{'max |diff|':>14}")
    for name, call_args in cases(mu).items():
        tf, of = best_of(lambda: fast[name](*call_args), args.repeat)
        ts, os_ = best_of(lambda: slow[name](*call_args), args.repeat)
        print(f"{name:<18}{tf:>12.4f}{ts:>12.4f}{ts / tf:>10.1f}{max_gap(of, os_):>14.2e}")


if __name__ == "__main__":
    main()
