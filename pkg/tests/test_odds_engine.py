import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oddstop import odds_engine as oe, oracles
from oddstop.errors import PartitionTooCoarse, ValidationError

probs = st.lists(st.floats(0.0, 0.95, allow_nan=False), min_size=1, max_size=10)


def test_half_triple_is_a_tie():
    res = oe.solve(oe.OddsProblem((0.5, 0.5, 0.5)))
    assert (res.s, res.s_prime) == (3, 2)
    assert res.near_tie
    assert res.win_probability == pytest.approx(0.5, abs=1e-15)
    assert oe.win_probability(oe.OddsProblem((0.5,) * 3), 3) == pytest.approx(0.5, abs=1e-15)


def test_half_ten():
    res = oe.solve(oe.OddsProblem((0.5,) * 10))
    assert (res.s, res.s_prime) == (10, 9)


def test_secretary_n4_matches_the_classical_eleven_24ths():
    prob = oe.secretary_problem(4)
    res = oe.solve(prob)
    assert res.s == res.s_prime == 2
    assert res.win_probability == pytest.approx(11 / 24, abs=1e-8)
    assert Fraction(11, 24) == oracles.index_rule_success_exact(4, 2)


def test_tail_odds_shape_and_values():
    prob = oe.OddsProblem((0.5, 0.2, 0.0))
    R = oe.tail_odds(prob)
    assert len(R) == 4
    assert R[-1] == 0.0
    assert R[0] == pytest.approx(1.0 + 0.25)


def test_sup_form_defaults_to_one_when_total_odds_are_small():
    prob = oe.OddsProblem((0.1, 0.1))
    assert oe.threshold_sup_form(prob) == 1
    assert oe.threshold_inf_form(prob) == 1


def test_exact_odds_oracle_agrees():
    p = [Fraction(1, 3), Fraction(1, 4), Fraction(2, 5)]
    r = oracles.exact_odds(p)
    assert r == [Fraction(1, 2), Fraction(1, 3), Fraction(2, 3)]
    assert oe.odds_of(oe.OddsProblem(tuple(float(v) for v in p))) == pytest.approx([float(v) for v in r])


@pytest.mark.parametrize("bad", [(), (1.0,), (-0.1,), (float("nan"),)])
def test_validation(bad):
    with pytest.raises(ValidationError):
        oe.OddsProblem(bad)


@settings(max_examples=150, deadline=None)
@given(probs)
def test_win_probability_matches_enumeration(p):
    prob = oe.OddsProblem(tuple(p))
    for k in range(1, prob.n + 1):
        assert oe.win_probability(prob, k) == pytest.approx(oracles.enumerate_win_probability(p, k), abs=1e-12)


@settings(max_examples=150, deadline=None)
@given(probs)
def test_odds_rule_is_optimal_among_stop_sets(p):
    res = oe.solve(oe.OddsProblem(tuple(p)))
    _, values = oracles.stop_set_values(p)
    assert values.max() <= res.win_probability + 1e-12
    assert oracles.dp_optimal_value(p) == pytest.approx(res.win_probability, abs=1e-12)


@settings(max_examples=150, deadline=None)
@given(probs)
def test_inf_form_not_after_sup_form_and_equal_value(p):
    prob = oe.OddsProblem(tuple(p))
    res = oe.solve(prob)
    assert res.s_prime <= res.s or res.s == 1
    assert oe.win_probability(prob, res.s) == pytest.approx(oe.win_probability(prob, res.s_prime), abs=1e-12)


def test_threshold_result_round_trip():
    res = oe.solve(oe.OddsProblem((0.3, 0.6, 0.2)))
    assert oe.ThresholdResult.from_dict(res.to_dict()) == res


def test_delayed_threshold():
    rule = oe.delayed_threshold(oe.DelayedOddsProblem(5, 4, (0.9, 0.9)))
    assert rule.threshold == 5
    assert rule.win_probability == pytest.approx(0.9)
    rule = oe.delayed_threshold(oe.DelayedOddsProblem(6, 3, (0.1, 0.1, 0.1, 0.1)))
    assert rule.threshold == 3
    assert rule.to_dict()["w"] == 3


def test_delayed_needs_matching_length():
    with pytest.raises(ValidationError):
        oe.DelayedOddsProblem(5, 4, (0.9,))


def test_continuous_thresholds():
    assert oe.continuous_threshold(oe.IntensityFunction.constant(2.0)) == pytest.approx(0.5, abs=1e-9)
    recip = oe.IntensityFunction.reciprocal((1e-6, 1.0))
    assert oe.continuous_threshold(recip) == pytest.approx(math.exp(-1), abs=1e-9)
    # a delay past t* is honoured
    assert oe.continuous_threshold(oe.IntensityFunction.constant(2.0), T=0.7) == pytest.approx(0.7)
    # total mass below one: stop from T
    assert oe.continuous_threshold(oe.IntensityFunction.constant(0.5), T=0.1) == pytest.approx(0.1)


def test_piecewise_linear_integral():
    eta = oe.IntensityFunction.piecewise_linear([(0.0, 0.0), (1.0, 4.0)])
    # tail of 4u from t is 2(1 - t^2) = 1 at t = 1/sqrt(2)
    assert eta.integral(0.0, 1.0) == pytest.approx(2.0)
    assert oe.continuous_threshold(eta) == pytest.approx(1 / math.sqrt(2), abs=1e-9)


def test_intensity_round_trip():
    for eta in (
        oe.IntensityFunction.constant(2.0),
        oe.IntensityFunction.reciprocal((0.01, 1.0)),
        oe.IntensityFunction.piecewise_linear([(0.0, 1.0), (0.5, 3.0), (1.0, 0.5)]),
    ):
        assert oe.IntensityFunction.from_dict(eta.to_dict()) == eta


@pytest.mark.parametrize("m", [10, 100, 1000])
def test_partition_squeeze(m):
    eta = oe.IntensityFunction.constant(2.0)
    part = oe.partition_odds_sum(eta, 0.0, m)
    assert part.squeeze_holds()
    assert part.mass == pytest.approx(part.integral, abs=1e-12)
    assert part.odds_sum >= part.integral


def test_discretized_threshold_converges():
    eta = oe.IntensityFunction.reciprocal((0.01, 1.0))
    t_star = oe.continuous_threshold(eta, 0.2)
    gaps = [abs(oe.discretized_threshold(eta, 0.2, m) - t_star) for m in (10, 100, 1000)]
    assert gaps[-1] <= 0.8 / 1000
    assert gaps[-1] <= gaps[0]


def test_coarse_partition_rejected():
    eta = oe.IntensityFunction.constant(50.0)
    with pytest.raises(PartitionTooCoarse):
        oe.partition_odds_sum(eta, 0.0, 10)
