import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rieszbd import _kernels
from rieszbd.errors import DomainError
from rieszbd.sieve import build_mobius, cached_mobius, mertens_prefix, table_for


def mobius_trial_division(n):
    result, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    return -result if n > 1 else result


@pytest.fixture(scope="module")
def small():
    return build_mobius(10_000)


def test_named_values(small):
    assert small[1] == 1
    assert small[12] == 0
    assert small[30] == -1


def test_mertens(small):
    assert mertens_prefix(small, 1) == 1
    assert mertens_prefix(small, 2) == 0
    assert mertens_prefix(small, 100) == 1
    with pytest.raises(DomainError):
        mertens_prefix(small, 10_001)


def test_matches_trial_division(small):
    ref = np.array([0] + [mobius_trial_division(n) for n in range(1, 10_001)])
    assert np.array_equal(small.values.astype(int), ref)


def test_divisor_sum_identity():
    assert cached_mobius(10**6).divisor_sum_check(upto=20_000)


def test_limit_errors(small):
    with pytest.raises(DomainError):
        build_mobius(0)
    with pytest.raises(DomainError):
        small[0]
    with pytest.raises(DomainError):
        small.require(10**5)


def test_table_for_reuses_or_grows(small):
    assert table_for(500, small) is small
    grown = table_for(3000)
    assert grown.limit >= 3000


def test_backends_agree():
    ref = _kernels.implementations("numpy")["mobius_sieve"](50_000)
    fast = _kernels.mobius_sieve(50_000)
    assert np.array_equal(ref, fast)


@given(st.integers(min_value=1, max_value=10_000), st.integers(min_value=1, max_value=10_000))
def test_multiplicative_on_coprime(a, b):
    from math import gcd

    table = cached_mobius(10**6)
    if gcd(a, b) == 1 and a * b <= table.limit:
        assert table[a * b] == table[a] * table[b]


def test_table_is_read_only(small):
    with pytest.raises(ValueError):
        small.values[5] = 3
