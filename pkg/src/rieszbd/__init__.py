"""Riesz function R(x) and the Baez-Duarte sequence c_k, computed several ways."""

from .analysis import (
    alternating_sum,
    fit_envelope,
    partial_sums,
    verify_bound,
    verify_generating_identity,
)
from .baez import CkMethod, CkRecord, ck_binomial, ck_compute, ck_difftable, ck_moebius, ck_sweep
from .errors import DomainError, InputError, NumericError, ResourceError, RzlError
from .mpcore import DEFAULT_CONTEXT, PrecisionContext
from .riesz import RieszMethod, RieszSample, first_zero, riesz_eval, riesz_kummer2, riesz_series
from .sieve import MobiusTable, build_mobius
from .zeros import ZeroCoefficient, coefficient_table, load_zeros

__version__ = "0.1.0"

__all__ = [
    "CkMethod",
    "CkRecord",
    "DEFAULT_CONTEXT",
    "DomainError",
    "InputError",
    "MobiusTable",
    "NumericError",
    "PrecisionContext",
    "ResourceError",
    "RieszMethod",
    "RieszSample",
    "RzlError",
    "ZeroCoefficient",
    "alternating_sum",
    "build_mobius",
    "ck_binomial",
    "ck_compute",
    "ck_difftable",
    "ck_moebius",
    "ck_sweep",
    "coefficient_table",
    "first_zero",
    "fit_envelope",
    "load_zeros",
    "partial_sums",
    "riesz_eval",
    "riesz_kummer2",
    "riesz_series",
    "verify_bound",
    "verify_generating_identity",
]
