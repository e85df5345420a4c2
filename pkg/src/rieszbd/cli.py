"""``rieszbd`` command line: evaluators, sweeps to CSV, verification suite.

Exit codes: 0 success, 1 a verification failed, 2 usage or input error,
3 numeric or resource error.  Every global flag has an environment override
with prefix ``RZL_`` (``RZL_DIGITS``, ``RZL_MOBIUS_LIMIT``, ``RZL_ZEROS_FILE``,
``RZL_CSV_DIGITS``, ``RZL_THREADS``).
"""

from __future__ import annotations

import argparse
import csv
import logging
import os
import sys
from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path

import mpmath as mp
import numpy as np

from . import _kernels
from .errors import InputError, RzlError

log = logging.getLogger("rieszbd")


@dataclass(frozen=True)
class RunConfig:
    digits: int = 40
    mobius_limit: int = 10**6
    zeros_file: str | None = None
    out: str | None = None
    csv_digits: int = 17
    threads: int | None = None

    def __post_init__(self):
        if self.digits < 15:
            raise InputError("--digits must be >= 15")
        if self.csv_digits < 1:
            raise InputError("--csv-digits must be >= 1")
        if self.out:
            parent = Path(self.out).expanduser().resolve().parent
            if not parent.is_dir() or not os.access(parent, os.W_OK):
                raise InputError(f"output directory {parent} is not writable")

    def context(self):
        from .mpcore import PrecisionContext

        return PrecisionContext(digits=self.digits)

    def table(self):
        from .sieve import cached_mobius

        return cached_mobius(self.mobius_limit)


def _env(name: str, default, cast):
    raw = os.environ.get(f"RZL_{name}")
    if raw is None or raw == "":
        return default
    try:
        return cast(raw)
    except ValueError as exc:
        raise InputError(f"RZL_{name}={raw!r} is not valid") from exc


def _int(text: str) -> int:
    """Integers, also written as 1e6 or 10**6."""
    text = text.strip()
    if "**" in text:
        base, exp = text.split("**", 1)
        return int(base) ** int(exp)
    value = float(text) if any(c in text for c in ".eE") else int(text)
    if value != int(value):
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer")
    return int(value)


def _num(value, digits: int) -> str:
    if isinstance(value, (mp.mpf, mp.mpc)):
        return mp.nstr(value, digits, strip_zeros=False) if mp.isfinite(value) else str(value)
    if isinstance(value, (float, np.floating)):
        return format(float(value), f".{digits}g")
    return str(value)


@contextmanager
def _sink(path: str | None):
    if path is None:
        yield sys.stdout
        return
    with open(path, "w", newline="", encoding="utf-8") as fh:
        yield fh


def _write_csv(path: str | None, header: list[str], rows, digits: int) -> None:
    with _sink(path) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_num(v, digits) for v in row])
    if path:
        log.info("wrote %s", path)


# ---------------------------------------------------------------------------
# riesz
# ---------------------------------------------------------------------------


def cmd_riesz(args, cfg: RunConfig) -> int:
    from .riesz import first_zero, riesz_eval, riesz_sweep

    ctx = cfg.context()
    if args.action == "eval":
        s = riesz_eval(args.x, args.method, cfg.table(), ctx)
        print(f"R({args.x}) = {_num(s.value, cfg.digits)} +/- {_num(s.err_estimate, 3)} "
              f"[{s.method.value}, terms={s.terms_used}]")
        return 0
    if args.action == "zero":
        x0 = first_zero(ctx, cfg.table(), scan=args.scan)
        print(mp.nstr(x0, cfg.digits))
        return 0
    samples = riesz_sweep(args.xmax, args.points, args.spacing, ctx, cfg.table(), xmin=args.xmin)
    rows = ((s.x, s.value, s.err_estimate, s.method.value, s.terms_used) for s in samples)
    _write_csv(args.out or cfg.out, ["x", "R", "err", "method", "terms"], rows, cfg.csv_digits)
    return 0


# ---------------------------------------------------------------------------
# ck
# ---------------------------------------------------------------------------


def cmd_ck(args, cfg: RunConfig) -> int:
    from .baez import ck_compute, ck_sweep

    ctx = cfg.context()
    if args.action == "compute":
        coeffs = None
        if args.method == "spectral":
            from .zeros import coefficient_table

            coeffs = coefficient_table(args.zeros, ctx, cfg.zeros_file)
        rec = ck_compute(args.k, args.method, cfg.table(), ctx, coeffs)
        err = "model" if rec.method.value == "spectral" else _num(rec.err_estimate, 3)
        print(f"c_{rec.k} = {_num(rec.value, cfg.digits)} +/- {err} [{rec.method.value}]")
        return 0
    records = ck_sweep(args.kmax, args.method, args.stride, ctx, cfg.table())
    rows = ((r.k, r.value, r.err_estimate, r.method.value) for r in records)
    _write_csv(args.out or cfg.out, ["k", "c_k", "err", "method"], rows, cfg.csv_digits)
    return 0


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def _report(lines: list[tuple[str, bool | None, object, str]], cfg: RunConfig, summary: str | None) -> int:
    """Print PASS/FAIL/INFO lines, then the machine-readable summary."""
    failed = False
    for name, ok, _value, detail in lines:
        tag = "INFO" if ok is None else ("PASS" if ok else "FAIL")
        failed |= ok is False
        print(f"[{tag}] {name}: {detail}")
    rows = [(name, "" if ok is None else str(bool(ok)).lower(), value, detail)
            for name, ok, value, detail in lines]
    if summary:
        _write_csv(summary, ["check", "passed", "value", "detail"], rows, cfg.csv_digits)
    else:
        print()
        _write_csv(None, ["check", "passed", "value", "detail"], rows, cfg.csv_digits)
    return 1 if failed else 0


def _verify_identity(args, cfg: RunConfig):
    from . import analysis as an

    ctx = cfg.context()
    table = cfg.table()
    which = args.which
    if which == "gf":
        x = 1.0 if args.x is None else args.x
        res = an.verify_generating_identity(x, args.kmax, ctx, table)
        return ("gf", res < 1e-10, res, f"x={x}, kmax={args.kmax}, relative residual {res:.3e}")
    if which == "altsum":
        v = an.alternating_sum(ctx)
        with ctx.workdps():
            d = abs(v - mp.mpf(an.ALTERNATING_SUM_REFERENCE))
        return ("altsum", d < 0.5e-24, v, f"{mp.nstr(v, 24)} (|diff from reference| {mp.nstr(d, 2)})")
    if which == "abel":
        from .mpcore import PrecisionContext

        actx = PrecisionContext(digits=min(cfg.digits, 20))
        v = an.abel_integral_check(actx)
        ref = an.alternating_sum(ctx)
        with ctx.workdps():
            d = abs(v - ref)
        return ("abel", d < 1e-12, v, f"{mp.nstr(v, 20)} (|diff from series| {mp.nstr(d, 2)})")
    if which == "powerseries":
        s = 0.25 if args.s is None else args.s
        ps = an.power_series_identity(s, None, ctx, table)
        tol = ps.tail_bound + mp.mpf(10) ** (-(cfg.digits - 2))
        ok = ps.residual <= tol
        return ("powerseries", ok, ps.residual,
                f"s={s}: lhs {mp.nstr(ps.lhs, 20)}, rhs {mp.nstr(ps.rhs, 20)}, residual {mp.nstr(ps.residual, 3)}")
    if which == "approx33":
        k = 100 if args.k is None else args.k
        d = an.approx_identity_33(k, ctx)
        _, full = an.bound_rhs(k)
        ok = (d <= full) if k >= 17 else None
        return ("approx33", ok, d, f"k={k}: |R(k)/k - c_k| = {mp.nstr(d, 6)}, bound {full:.6g}")
    x = 10.0 if args.x is None else args.x
    r = an.approx_identity_34(x, args.kmax_34, ctx, table)
    return ("approx34", None, r, f"x={x}: relative residual {r:.4g} (approximate identity, reported only)")


def cmd_verify(args, cfg: RunConfig) -> int:
    ctx = cfg.context()
    if args.action == "all":
        from .checks import run_all

        results = run_all(ctx)
        lines = [(f"criterion {r.number}: {r.title}", r.passed, r.seconds, r.detail) for r in results]
        return _report(lines, cfg, args.summary)
    if args.action == "bound":
        from .analysis import verify_bound

        reports = verify_bound(args.kmin, args.kmax, ctx, cfg.table(), precise=args.precise)
        asserted = [r for r in reports if r.k >= 17]
        failing = [r.k for r in asserted if not r.holds]
        if args.out or cfg.out:
            rows = ((r.k, r.lhs, r.rhs_leading, r.rhs_full, str(r.holds).lower()) for r in reports)
            _write_csv(args.out or cfg.out, ["k", "lhs", "rhs_leading", "rhs_full", "holds"], rows,
                       cfg.csv_digits)
        ok = not failing if asserted else None
        worst = max((float(r.lhs) / r.rhs_full for r in reports), default=float("nan"))
        detail = (f"k in [{args.kmin}, {args.kmax}], max lhs/rhs_full = {worst:.4f}, "
                  f"violations at k >= 17: {failing[:10]}")
        return _report([("bound", ok, worst, detail)], cfg, args.summary)
    return _report([_verify_identity(args, cfg)], cfg, args.summary)


# ---------------------------------------------------------------------------
# sums, zeros, fit
# ---------------------------------------------------------------------------


def cmd_sums(args, cfg: RunConfig) -> int:
    from .analysis import partial_sums

    trace = partial_sums(args.kmax, cfg.table(), cfg.context())
    idx = np.arange(0, len(trace), args.stride)
    rows = (trace.row(int(i)) for i in idx)
    out = args.out or cfg.out
    if out:
        _write_csv(out, ["K", "S_plain", "S_alt", "dist_plain", "dist_alt"], rows, cfg.csv_digits)
    first = trace.first_crossing
    msg = "none" if first is None else str(first)
    print(f"first K with S_K < -2: {msg} (N = {trace.n_max}, Kmax = {args.kmax})",
          file=sys.stderr if not out else sys.stdout)
    if not out:
        _write_csv(None, ["K", "S_plain", "S_alt", "dist_plain", "dist_alt"], rows, cfg.csv_digits)
    return 0


def cmd_zeros(args, cfg: RunConfig) -> int:
    from .zeros import coefficient_table

    coeffs = coefficient_table(args.count, cfg.context(), cfg.zeros_file)
    rows = ((c.index, c.gamma, c.a, c.b, c.modulus) for c in coeffs)
    _write_csv(args.out or cfg.out, ["i", "gamma", "a", "b", "modulus"], rows, cfg.csv_digits)
    return 0


def _read_xy(path: str):
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            xs, ys = [], []
            for lineno, row in enumerate(reader, start=2):
                try:
                    xs.append(float(row[0]))
                    ys.append(float(row[1]))
                except (ValueError, IndexError) as exc:
                    raise InputError(f"{path}:{lineno}: expected two numeric columns") from exc
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except StopIteration as exc:
        raise InputError(f"{path} is empty") from exc
    log.debug("columns %s", header[:2])
    return np.array(xs), np.array(ys)


def cmd_fit(args, cfg: RunConfig) -> int:
    from .analysis import fit_bound_exponent, fit_power_law_extrema

    if args.action == "envelope":
        x, y = _read_xy(args.input)
        fit = fit_power_law_extrema(x, y, tuple(args.window), min_extrema=args.min_extrema,
                                    pair_lobes=args.pair_lobes)
    else:
        fit = fit_bound_exponent(args.kmin, args.kmax, cfg.context(), cfg.table())
    rows = [(fit.amplitude, fit.exponent, fit.residual)]
    _write_csv(args.out or cfg.out, ["amplitude", "exponent", "residual"], rows, cfg.csv_digits)
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rieszbd", description=__doc__.split("\n")[0])
    p.add_argument("--digits", type=int, default=_env("DIGITS", 40, int),
                   help="target decimal digits (default 40, env RZL_DIGITS)")
    p.add_argument("--mobius-limit", type=_int, default=_env("MOBIUS_LIMIT", 10**6, _int),
                   help="size of the Möbius table (default 10^6, env RZL_MOBIUS_LIMIT)")
    p.add_argument("--zeros-file", default=_env("ZEROS_FILE", None, str),
                   help="zeta-zero ordinates file (default: bundled, env RZL_ZEROS_FILE)")
    p.add_argument("--csv-digits", type=int, default=_env("CSV_DIGITS", 17, int),
                   help="significant digits of CSV floats (default 17, env RZL_CSV_DIGITS)")
    p.add_argument("--threads", type=int, default=_env("THREADS", None, int),
                   help="cap on kernel threads (env RZL_THREADS)")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("riesz", help="evaluate R(x)").add_subparsers(dest="action", required=True)
    e = r.add_parser("eval")
    e.add_argument("--x", type=float, required=True)
    e.add_argument("--method", choices=["series", "kummer1", "kummer2"], default="kummer2")
    z = r.add_parser("zero")
    z.add_argument("--scan", action="store_true", help="search [0.5, 20] instead of [1.0, 1.3]")
    s = r.add_parser("sweep")
    s.add_argument("--xmax", type=float, required=True)
    s.add_argument("--xmin", type=float, default=None)
    s.add_argument("--points", type=_int, default=1000)
    s.add_argument("--spacing", choices=["linear", "log"], default="linear")
    s.add_argument("--out")

    c = sub.add_parser("ck", help="compute c_k").add_subparsers(dest="action", required=True)
    cc = c.add_parser("compute")
    cc.add_argument("--k", type=_int, required=True)
    cc.add_argument("--method", choices=["binomial", "moebius", "spectral"], default="moebius")
    cc.add_argument("--zeros", type=int, default=10, help="zeros in the spectral model")
    cs = c.add_parser("sweep")
    cs.add_argument("--kmax", type=_int, required=True)
    cs.add_argument("--stride", type=_int, default=1)
    cs.add_argument("--method", choices=["binomial", "moebius"], default="moebius")
    cs.add_argument("--out")

    v = sub.add_parser("verify", help="check identities and bounds").add_subparsers(dest="action", required=True)
    vb = v.add_parser("bound")
    vb.add_argument("--kmin", type=_int, default=17)
    vb.add_argument("--kmax", type=_int, default=10**4)
    vb.add_argument("--precise", action="store_true")
    vb.add_argument("--out")
    vi = v.add_parser("identity")
    vi.add_argument("--which", required=True,
                    choices=["gf", "altsum", "abel", "powerseries", "approx33", "approx34"])
    vi.add_argument("--x", type=float)
    vi.add_argument("--s", type=float)
    vi.add_argument("--k", type=_int)
    vi.add_argument("--kmax", type=_int, default=100, help="terms for the gf check")
    vi.add_argument("--kmax-34", type=_int, default=None, help="terms for approx34")
    va = v.add_parser("all")
    for q in (vb, vi, va):
        q.add_argument("--summary", help="write the summary CSV here instead of stdout")

    su = sub.add_parser("sums", help="partial sums of c_k").add_subparsers(dest="action", required=True)
    sp = su.add_parser("partial")
    sp.add_argument("--kmax", type=_int, required=True)
    sp.add_argument("--stride", type=_int, default=1, help="emit every stride-th K")
    sp.add_argument("--out")

    zz = sub.add_parser("zeros", help="zero coefficients").add_subparsers(dest="action", required=True)
    zc = zz.add_parser("coeffs")
    zc.add_argument("--count", type=int, default=10)
    zc.add_argument("--out")

    f = sub.add_parser("fit", help="power-law fits").add_subparsers(dest="action", required=True)
    fe = f.add_parser("envelope")
    fe.add_argument("--in", dest="input", required=True)
    fe.add_argument("--window", type=float, nargs=2, required=True, metavar=("A", "B"))
    fe.add_argument("--min-extrema", type=int, default=10)
    fe.add_argument("--pair-lobes", action="store_true",
                    help="average neighbouring lobes to cancel a drifting baseline")
    fe.add_argument("--out")
    fk = f.add_parser("ckdiff")
    fk.add_argument("--kmin", type=_int, default=10**4)
    fk.add_argument("--kmax", type=_int, default=10**5)
    fk.add_argument("--out")
    return p


_COMMANDS = {"riesz": cmd_riesz, "ck": cmd_ck, "verify": cmd_verify, "sums": cmd_sums,
             "zeros": cmd_zeros, "fit": cmd_fit}


def main(argv: list[str] | None = None) -> int:
    try:
        parser = build_parser()
    except InputError as exc:
        print(f"rieszbd: error: {exc}", file=sys.stderr)
        return 2
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = RunConfig(args.digits, args.mobius_limit, args.zeros_file, getattr(args, "out", None),
                        args.csv_digits, args.threads)
        _kernels.set_threads(cfg.threads)
        return _COMMANDS[args.command](args, cfg)
    except InputError as exc:
        print(f"rieszbd: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except RzlError as exc:
        print(f"rieszbd: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except (ArithmeticError, MemoryError) as exc:
        print(f"rieszbd: numeric failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
