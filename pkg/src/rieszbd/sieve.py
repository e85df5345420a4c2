"""Möbius function tables from a linear (smallest-prime-factor) sieve."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _kernels
from .errors import DomainError, ResourceError

MAX_LIMIT = 10**9


@dataclass(frozen=True, eq=False)
class MobiusTable:
    """mu(n) for 0 <= n <= limit stored as int8 (entry 0 is 0)."""

    limit: int
    values: np.ndarray

    def __getitem__(self, n: int) -> int:
        if not 1 <= n <= self.limit:
            raise DomainError(f"n={n} outside table range 1..{self.limit}")
        return int(self.values[n])

    def require(self, n: int) -> None:
        if n > self.limit:
            raise DomainError(
                f"Möbius table limit {self.limit} too small; need N >= {n} "
                f"(raise --mobius-limit / RZL_MOBIUS_LIMIT)"
            )

    def squarefree(self, n_max: int | None = None) -> np.ndarray:
        """Indices 1..n_max with mu(n) != 0."""
        n_max = self.limit if n_max is None else n_max
        return np.flatnonzero(self.values[: n_max + 1])

    def divisor_sum_check(self, upto: int = 10**5) -> bool:
        """Sum_{d|n} mu(d) == [n == 1] for every n <= min(limit, upto)."""
        m = min(self.limit, upto)
        acc = np.zeros(m + 1, dtype=np.int64)
        for d in range(1, m + 1):
            v = self.values[d]
            if v:
                acc[d::d] += v
        expected = np.zeros(m + 1, dtype=np.int64)
        expected[1] = 1
        return bool(np.array_equal(acc[1:], expected[1:]))


def build_mobius(limit: int) -> MobiusTable:
    if limit < 1:
        raise DomainError("Möbius table limit must be >= 1")
    if limit > MAX_LIMIT:
        raise ResourceError(f"Möbius table limit {limit} exceeds cap {MAX_LIMIT}")
    try:
        values = _kernels.mobius_sieve(int(limit))
    except MemoryError as exc:
        raise ResourceError(f"cannot allocate Möbius table of size {limit}") from exc
    values.flags.writeable = False
    return MobiusTable(int(limit), values)


@lru_cache(maxsize=4)
def cached_mobius(limit: int) -> MobiusTable:
    """Shared table instance; tables are immutable so sharing is safe."""
    return build_mobius(limit)


def table_for(n_required: int, table: MobiusTable | None = None) -> MobiusTable:
    """``table`` if it reaches ``n_required``, else a cached table that does."""
    if table is not None:
        table.require(n_required)
        return table
    limit = 1 << max(10, (int(n_required) - 1).bit_length())
    return cached_mobius(limit)


def mertens_prefix(table: MobiusTable, n: int) -> int:
    """M(n) = sum_{m <= n} mu(m)."""
    if not 1 <= n <= table.limit:
        raise DomainError(f"n={n} outside table range 1..{table.limit}")
    return int(table.values[1 : n + 1].sum(dtype=np.int64))
