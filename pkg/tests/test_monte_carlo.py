import math

import pytest

from oddstop import best_choice as bc, oracles
from oddstop.errors import ValidationError
from oddstop.monte_carlo import (
    IndexRule,
    SimulationConfig,
    SimulationReport,
    XStrategy,
    dominance_report,
    evaluate_index_rule,
    parse_strategy,
    simulate,
    z_score,
)


def test_parse_strategy():
    assert parse_strategy("x=0.3678") == XStrategy(0.3678)
    assert parse_strategy("x=1/e") == XStrategy(bc.INV_E)
    assert parse_strategy("cutoff=4") == IndexRule(4)
    for bad in ("y=2", "x=abc", "x=1.5"):
        with pytest.raises(ValidationError):
            parse_strategy(bad)


def test_same_seed_same_report():
    cfg = SimulationConfig(50_000, 123, 10, XStrategy(0.3))
    assert simulate(cfg) == simulate(cfg)


def test_worker_count_does_not_change_results():
    one = simulate(SimulationConfig(150_000, 7, 6, XStrategy(bc.INV_E), workers=1))
    many = simulate(SimulationConfig(150_000, 7, 6, XStrategy(bc.INV_E), workers=4))
    assert one.outcome_counts == many.outcome_counts


def test_outcomes_partition_trials():
    r = simulate(SimulationConfig(30_000, 3, 8, XStrategy(0.5)))
    c = r.outcome_counts
    assert c["success"] + c["wrong_pick"] + c["no_pick"] == 30_000


@pytest.mark.parametrize("n,x", [(1, 0.3), (3, 0.0), (10, 0.3678), (25, 0.6)])
def test_estimate_matches_closed_form(n, x):
    r = simulate(SimulationConfig(200_000, 11, n, XStrategy(x)))
    assert abs(z_score(r.estimate, bc.success_probability(n, x), r.std_error)) < 4
    assert abs(z_score(r.no_pick_rate, x, r.no_pick_std_error)) < 4


def test_x_zero_never_passes_anyone():
    r = simulate(SimulationConfig(10_000, 1, 4, XStrategy(0.0)))
    assert r.outcome_counts["no_pick"] == 0


@pytest.mark.parametrize("n,cutoff", [(5, 3), (7, 3), (7, 1)])
def test_index_rule_matches_permutation_oracle(n, cutoff):
    r = evaluate_index_rule(SimulationConfig(200_000, 5, n, IndexRule(cutoff)))
    exact = float(oracles.index_rule_success_exact(n, cutoff))
    assert abs(r.estimate - exact) < 4 * r.std_error


def test_report_round_trip_and_addition():
    cfg = SimulationConfig(1_000, 2, 4, XStrategy(0.5))
    r = simulate(cfg)
    assert SimulationReport.from_dict(r.to_dict()) == r
    assert (r + r).trials == 2_000


def test_config_validation():
    with pytest.raises(ValidationError):
        SimulationConfig(0, 1, 4, XStrategy(0.5))
    with pytest.raises(ValidationError):
        SimulationConfig(10, -1, 4, XStrategy(0.5))
    with pytest.raises(ValidationError):
        SimulationConfig(10, 1, 0, XStrategy(0.5))


def test_dominance_small_n():
    rows = dominance_report([2, 3, 10], trials=20_000)
    assert rows[0]["p_n_x_n"] == 0.5
    assert rows[0]["p_n_inv_e"] == pytest.approx((1 - math.exp(-2)) / 2)
    assert not any(r["violation"] for r in rows)
