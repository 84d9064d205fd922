import math

import pytest
from hypothesis import given, strategies as st

from bigrr.bounds import bound_crossover, drr_lower_bound, log2_margin


def test_examples():
    b8 = drr_lower_bound(8)
    assert b8.sign == -1
    # 2^4 - 5 * 2^(3 + 3*2) = 16 - 2560
    assert b8.exact_value == 16 - 5 * 2**9
    assert drr_lower_bound(640).sign == 1
    assert drr_lower_bound(638).sign == -1


def test_crossover():
    assert bound_crossover() == 640


def test_crossover_small_horizon():
    # with a horizon below the crossover the bound is never positive
    assert bound_crossover(600) == 602


def test_margin_at_640():
    # 80 > log2(5) + 77.59...
    m = log2_margin(640)
    assert 0 < m < 1
    assert abs(float(m) - (80 - 2.321928094887362 - 9.321928094887362 * 8.321928094887362)) < 1e-9


@pytest.mark.parametrize("n", [1, 3, 0, -4])
def test_bad_n(n):
    with pytest.raises(ValueError):
        drr_lower_bound(n)


@given(st.integers(3, 12))
def test_exact_value_for_powers_of_two(k):
    n = 2**k
    b = drr_lower_bound(n)
    expect = 2 ** (n // 2) - 5 * 2 ** (3 * n // 8 + k * (k - 1))
    assert b.exact_value == expect
    assert (expect > 0) == (b.sign > 0)


@given(st.integers(1, 5000))
def test_sign_matches_float_comparison(h):
    n = 2 * h
    b = drr_lower_bound(n)
    # float check of the exponent comparison, away from zero
    f = n / 8 - 2.321928094887362 - math.log2(n) * math.log2(n / 2)
    if abs(f) > 1e-9:
        assert b.sign == (1 if f > 0 else -1)
    assert b.to_json()["sign"] == b.sign
