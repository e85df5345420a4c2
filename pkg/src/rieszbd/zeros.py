"""Zeta-zero ordinates and the coefficients Gamma(1 - rho/2) / zeta'(rho).

Ordinates are data: a file with the first 100 (35 significant digits) ships
with the package.  Each ordinate is validated by |zeta(1/2 + i gamma)| before
its coefficient is formed.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import mpmath as mp

from .errors import DomainError, InputError
from .mpcore import DEFAULT_CONTEXT, PrecisionContext, gamma as gamma_fn
from .zeta import zeta_em

RESIDUAL_THRESHOLD = 1e-12
MIN_SIGNIFICANT_DIGITS = 15
_PARSE_DPS = 60


@dataclass(frozen=True)
class ZeroCoefficient:
    index: int
    gamma: object
    rho: object
    a: object
    b: object
    modulus: object


def bundled_zeros_path() -> Path:
    return Path(str(resources.files("rieszbd").joinpath("data").joinpath("zeta_zeros_100.txt")))


def _significant_digits(text: str) -> int:
    mantissa = text.lower().split("e")[0].lstrip("+-")
    digits = mantissa.replace(".", "").lstrip("0")
    return len(digits)


def load_zeros(path: str | Path | None = None, count: int | None = None) -> list:
    """First ``count`` ordinates from ``path`` (bundled file by default), as mpf."""
    path = bundled_zeros_path() if path is None else Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise InputError(f"cannot read zeros file {path}: {exc}") from exc
    out = []
    with mp.workdps(_PARSE_DPS):
        for lineno, raw in enumerate(lines, start=1):
            text = raw.split("#", 1)[0].strip()
            if not text:
                continue
            try:
                value = mp.mpf(text)
            except (ValueError, TypeError) as exc:
                raise InputError(f"{path}:{lineno}: not a decimal number: {text!r}") from exc
            if not mp.isfinite(value) or value <= 0:
                raise InputError(f"{path}:{lineno}: ordinate must be positive and finite")
            if _significant_digits(text) < MIN_SIGNIFICANT_DIGITS:
                raise InputError(
                    f"{path}:{lineno}: ordinate needs >= {MIN_SIGNIFICANT_DIGITS} significant digits"
                )
            if out and value <= out[-1]:
                raise InputError(f"{path}:{lineno}: ordinates must be strictly increasing")
            out.append(value)
            if count is not None and len(out) == count:
                break
    if count is not None:
        if count < 0:
            raise InputError("count must be nonnegative")
        if len(out) < count:
            raise InputError(f"{path} holds {len(out)} ordinates, {count} requested")
    return out


def compute_coefficient(gamma, ctx: PrecisionContext = DEFAULT_CONTEXT, index: int = 1,
                        residual_threshold: float = RESIDUAL_THRESHOLD) -> ZeroCoefficient:
    """a + i b = Gamma(1 - rho/2) / zeta'(rho) at rho = 1/2 + i gamma."""
    with ctx.workdps():
        g = mp.mpf(gamma)
        if g <= 0:
            raise DomainError("ordinate must be positive (negative ones are conjugates)")
        rho = mp.mpc(mp.mpf(1) / 2, g)
    em = zeta_em(rho, ctx)
    if abs(em.value) >= residual_threshold:
        raise InputError(
            f"|zeta(1/2 + i*{mp.nstr(g, 20)})| = {mp.nstr(abs(em.value), 3)} is not below "
            f"{residual_threshold:g}; not a zero ordinate"
        )
    gm = gamma_fn(1 - rho / 2, ctx)
    with ctx.workdps():
        q = gm / em.derivative
        return ZeroCoefficient(index, g, rho, mp.re(q), mp.im(q), abs(q))


def coefficient_table(count: int, ctx: PrecisionContext = DEFAULT_CONTEXT,
                      path: str | Path | None = None) -> list[ZeroCoefficient]:
    if count < 0:
        raise InputError("count must be nonnegative")
    if count == 0:
        return []
    gammas = load_zeros(path, count)
    return [compute_coefficient(g, ctx, i + 1) for i, g in enumerate(gammas)]
