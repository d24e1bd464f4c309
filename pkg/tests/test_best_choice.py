import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oddstop import best_choice as bc
from oddstop.errors import ValidationError

mp.mp.dps = 80
E_INV = mp.e ** -1


def mp_p(n, x):
    x = mp.mpf(x)
    return (1 - x) ** n / n + x * mp.fsum((1 - x) ** k / k for k in range(1, n))


def mp_threshold(n):
    f = lambda x: mp.fsum((1 - x) ** k / k for k in range(1, n)) - 1
    return mp.findroot(f, (mp.mpf("0.2"), E_INV), solver="anderson")


def test_small_closed_forms():
    assert bc.success_probability(1, 0.3) == pytest.approx(0.7)
    assert bc.success_probability(2, bc.INV_E) == pytest.approx((1 - math.exp(-2)) / 2, abs=1e-15)
    assert bc.success_probability(2, 0.0) == 0.5
    assert bc.success_probability(5, 1.0) == 0.0
    assert bc.success_probability(7, 0.0) == pytest.approx(1 / 7)


@pytest.mark.parametrize("n", [1, 2, 3, 7, 30, 200])
@pytest.mark.parametrize("x", [0.05, 0.3, math.exp(-1), 0.8])
def test_success_probability_against_mpmath(n, x):
    assert bc.success_probability(n, x) == pytest.approx(float(mp_p(n, x)), rel=1e-13)


@pytest.mark.parametrize("n", [3, 10, 50, 200])
@pytest.mark.parametrize("x", [0.1, math.exp(-1), 0.7])
def test_excess_over_limit_against_mpmath(n, x):
    ref = mp_p(n, x) + mp.mpf(x) * mp.log(x)
    assert bc.excess_over_limit(n, x) == pytest.approx(float(ref), rel=1e-11)


def test_large_n_uses_limit_plus_excess():
    n = 2 * 10**6
    assert bc.success_probability(n, 0.5) == pytest.approx(0.5 * math.log(2), abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(st.floats(0.0, 1.0), st.integers(2, 400))
def test_success_sequence_nonincreasing(x, n_max):
    p = bc.success_probabilities(n_max, x)
    assert np.all(np.diff(p) <= 0.0)
    assert np.all(p >= bc.limiting_success(x) - 1e-15)


def test_no_selection_is_x():
    for n in (1, 5, 50):
        assert bc.no_selection_probability(n, bc.INV_E) == bc.INV_E


def test_thresholds():
    assert bc.optimal_wait_threshold(1) == 0.0
    assert bc.optimal_wait_threshold(2) == 0.0
    assert bc.optimal_wait_threshold(3) == pytest.approx(2 - math.sqrt(3), abs=1e-11)


@pytest.mark.parametrize("n", [3, 4, 10, 40, 100, 200])
def test_threshold_gap_against_mpmath(n):
    ref = E_INV - mp_threshold(n)
    assert bc.threshold_gap(n) == pytest.approx(float(ref), rel=1e-10)


@pytest.mark.parametrize("n", [2, 3, 5, 20, 80, 150, 200])
def test_optimal_excess_against_mpmath(n):
    x = mp_threshold(n) if n >= 3 else mp.mpf(0)
    ref = mp_p(n, x) - E_INV
    assert bc.optimal_excess(n) == pytest.approx(float(ref), rel=1e-9)


def test_gap_strictly_decreasing_to_200():
    gaps = [bc.threshold_gap(n) for n in range(2, 201)]
    assert all(b < a for a, b in zip(gaps, gaps[1:]))
    assert 0 < gaps[-1] < 0.002


def test_optimal_dominates_inv_e():
    for n in range(1, 60):
        assert bc.optimal_success(n) >= bc.success_probability(n, bc.INV_E) - 1e-15


def test_margin_log_form():
    for n in (1, 2, 10, 100):
        direct = bc.success_probability(n, bc.INV_E) - bc.INV_E
        assert bc.margin_over_inv_e(n) == pytest.approx(direct, rel=1e-6)
    assert math.isfinite(bc.log10_margin_over_inv_e(10_000))
    assert bc.log10_margin_over_inv_e(10_000) < -1000


def test_validation():
    with pytest.raises(ValidationError):
        bc.success_probability(0, 0.5)
    with pytest.raises(ValidationError):
        bc.XStrategy(1.5)


def test_table_rows():
    rows = bc.threshold_table(4)
    assert [r["n"] for r in rows] == [1, 2, 3, 4]
    assert rows[0]["p_n_x_n"] == 1.0
    assert rows[1]["p_n_inv_e"] == pytest.approx((1 - math.exp(-2)) / 2)
