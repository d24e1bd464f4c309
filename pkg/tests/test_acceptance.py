"""Acceptance criteria 1-11. Each test prints one PASS/FAIL line."""
import math
import time
from fractions import Fraction

import numpy as np
import pytest

from oddstop import bandit, best_choice as bc, odds_engine as oe, oracles, point_processes as pp
from oddstop._seeding import binomial_se, block_rng, run_blocks
from oddstop.monte_carlo import SimulationConfig, XStrategy, simulate

SEED = 20240601
MC = 1_000_000


@pytest.fixture
def report(capsys):
    def _report(number, title, ok, detail=""):
        with capsys.disabled():
            print(f"\n[criterion {number:2d}] {'PASS' if ok else 'FAIL'}  {title}  {detail}")
        assert ok, f"criterion {number}: {title} {detail}"

    return _report


def test_01_threshold_table(report):
    t0 = time.perf_counter()
    x1 = bc.optimal_wait_threshold(1)
    err3 = abs(bc.optimal_wait_threshold(3) - (2 - math.sqrt(3)))
    gaps = [bc.threshold_gap(n) for n in range(2, 201)]
    increasing = all(b < a for a, b in zip(gaps, gaps[1:]))
    x200 = bc.optimal_wait_threshold(200)
    seconds = time.perf_counter() - t0
    ok = x1 == 0.0 and err3 <= 1e-9 and increasing and x200 <= bc.INV_E and 0 < gaps[-1] < 0.002 and seconds < 1
    report(1, "threshold table", ok, f"|x3-(2-sqrt3)|={err3:.1e} 1/e-x200={gaps[-1]:.3e} t={seconds:.2f}s")


def test_02_inv_e_lower_bound(report):
    t0 = time.perf_counter()
    logm = [bc.log10_margin_over_inv_e(n) for n in range(1, 10_001)]
    closed_ok = all(math.isfinite(v) for v in logm)
    zs = {}
    for n in (2, 10, 100):
        r = simulate(SimulationConfig(MC, SEED, n, XStrategy(bc.INV_E)))
        zs[n] = (r.estimate - bc.success_probability(n, bc.INV_E)) / r.std_error
    seconds = time.perf_counter() - t0
    ok = closed_ok and all(abs(z) <= 3 for z in zs.values()) and seconds < 60
    z_txt = " ".join(f"z{n}={z:+.2f}" for n, z in zs.items())
    report(2, "p_n(1/e) >= 1/e", ok, f"min log10 margin={min(logm):.1f} {z_txt} t={seconds:.1f}s")


def test_03_no_pick_rate(report):
    zs = {}
    for n in (1, 5, 50):
        r = simulate(SimulationConfig(MC, SEED + n, n, XStrategy(bc.INV_E)))
        zs[n] = (r.no_pick_rate - bc.INV_E) / r.no_pick_std_error
    ok = all(abs(z) <= 3 for z in zs.values())
    report(3, "no-selection frequency = 1/e", ok, " ".join(f"z{n}={z:+.2f}" for n, z in zs.items()))


def test_04_odds_optimality(report):
    t0 = time.perf_counter()
    rng = block_rng(SEED, 4)
    shortfall = enum_err = 0.0
    for _ in range(500):
        n = int(rng.integers(1, 13))
        p = tuple(rng.uniform(0.0, rng.uniform(0.05, 0.95), size=n))
        prob = oe.OddsProblem(p)
        sol = oe.solve(prob)
        _, values = oracles.stop_set_values(p)
        shortfall = max(shortfall, float(values.max()) - oracles.enumerate_win_probability(p, sol.s_prime))
        enum_err = max(enum_err, abs(sol.win_probability - oracles.enumerate_win_probability(p, sol.s_prime)))
    seconds = time.perf_counter() - t0
    ok = shortfall <= 1e-12 and enum_err <= 1e-12 and seconds < 60
    report(4, "s'-cutoff is optimal", ok, f"shortfall={shortfall:.1e} enum_err={enum_err:.1e} t={seconds:.1f}s")


def test_05_tie_case(report):
    rng = block_rng(SEED, 5)
    problems = [oe.OddsProblem((0.5,) * n) for n in range(2, 13)]
    for _ in range(40):
        prefix = tuple(rng.uniform(0.0, 0.6, size=int(rng.integers(1, 8))))
        problems.append(oe.OddsProblem(prefix + (0.5,) + (0.0,) * int(rng.integers(0, 3))))
    worst = 0.0
    for prob in problems:
        assert np.any(oe.tail_odds(prob)[:-1] == 1.0)
        sol = oe.solve(prob)
        a = oracles.enumerate_win_probability(prob.p, sol.s)
        b = oracles.enumerate_win_probability(prob.p, sol.s_prime)
        worst = max(worst, abs(a - b))
    report(5, "tie-case indifference", worst <= 1e-12, f"max |win(s)-win(s')|={worst:.1e} over {len(problems)} problems")


def test_06_continuous(report):
    recip = oe.IntensityFunction.reciprocal((1e-6, 1.0))
    const = oe.IntensityFunction.constant(2.0)
    e1 = abs(oe.continuous_threshold(recip) - math.exp(-1))
    e2 = abs(oe.continuous_threshold(const) - 0.5)
    cell_ok = squeeze_ok = True
    for eta, T in ((oe.IntensityFunction.reciprocal((1e-6, 1.0)), 0.2), (const, 0.0)):
        t_star = oe.continuous_threshold(eta, T)
        cell_ok &= abs(oe.discretized_threshold(eta, T, 1000) - t_star) <= (1 - T) / 1000
        for m in (10, 100, 1000):
            part = oe.partition_odds_sum(eta, T, m)
            p = np.asarray(part.cell_probs)
            r = np.asarray(part.cell_odds)
            s = p.max()
            squeeze_ok &= p.sum() <= r.sum() + 1e-15 and r.sum() <= p.sum() / (1 - s) + 1e-12
    ok = e1 <= 1e-9 and e2 <= 1e-9 and cell_ok and squeeze_ok
    report(6, "continuous threshold", ok, f"|t*-1/e|={e1:.1e} |t*-1/2|={e2:.1e} cell={cell_ok} squeeze={squeeze_ok}")


def test_07_renyi(report):
    counts = oracles.record_indicator_counts(8)
    exact = all(Fraction(int(c), math.factorial(8)) == Fraction(1, k) for k, c in enumerate(counts, 1))

    def block(rng, size):
        ranks = rng.permuted(np.tile(np.arange(1, 9), (size, 1)), axis=1)
        return pp.record_flags(ranks).sum(axis=0)

    hits = np.sum(run_blocks(block, MC, SEED + 7), axis=0)
    zs = [(hits[k - 1] / MC - 1 / k) / binomial_se(hits[k - 1] / MC, MC) if k > 1 else 0.0 for k in range(1, 9)]
    ok = exact and hits[0] == MC and max(abs(z) for z in zs) <= 4
    report(7, "record probability 1/k", ok, f"exact={exact} max|z|={max(abs(z) for z in zs):.2f}")


def test_08_retention_by_post_jump_count(report):
    batches = run_blocks(lambda rng, size: pp.simulate_thinned_batch(0.05, 1, size, rng, max_count=6), 1_500_000, SEED + 8)
    jumps = np.sum([np.pad(b.jumps_by_precount, (0, 7 - len(b.jumps_by_precount))) for b in batches], axis=0)
    kept = np.sum([np.pad(b.kept_by_precount, (0, 7 - len(b.kept_by_precount))) for b in batches], axis=0)
    ok = True
    parts = []
    for k in range(1, 6):
        f = kept[k] / jumps[k]
        se = binomial_se(f, int(jumps[k]))
        z_new = (f - 1 / (k + 1)) / se
        z_old = (f - 1 / k) / se
        ok &= jumps[k] >= 1_000_000 and abs(z_new) <= 4 and abs(z_old) > 4
        parts.append(f"k={k}: n={jumps[k]} z(1/(k+1))={z_new:+.2f} z(1/k)={z_old:+.0f}")
    report(8, "retention 1/(k+1), not 1/k", bool(ok), "; ".join(parts))


def test_09_future_records_below_one(report):
    t = math.exp(-1)
    est = {k: pp.expected_future_records(t, k, MC, seed=SEED + 9 + k) for k in (1, 10, 100)}
    e1 = est[1]
    below = (1 - e1.mean) / e1.std_error
    monotone = est[1].mean < est[10].mean < est[100].mean < 1
    closed = all(abs(e.mean - pp.exact_future_records(t, k)) <= 4 * e.std_error for k, e in est.items())
    ok = below > 3 and monotone and closed
    vals = " ".join(f"k={k}:{e.mean:.4f}" for k, e in est.items())
    report(9, "E(R_1 - R_t | N_t = 1) < 1", ok, f"{vals} (1-E)/se={below:.0f}")


def test_10_records_in_interval(report):
    bad = [
        (k, J)
        for k in range(0, 9)
        for J in range(0, 9 - k)
        if pp.expected_records_in_interval(k, J, exact=True) != oracles.records_among_last(k, J)
    ]
    report(10, "records in interval = sum 1/(k+j)", not bad, f"mismatches={bad}")


def test_11_accumulated_max(report):
    rng = block_rng(SEED, 11)
    instances = [bandit.TwoLineInstance((0.2,) * 10, (0.8,) * 10)]
    for _ in range(30):
        n = int(rng.integers(1, 11))
        instances.append(bandit.TwoLineInstance(tuple(rng.random(n)), tuple(rng.random(n))))
    excess = max(
        float(bandit.policy_values(inst, n).max()) - bandit.accumulated_max(inst, n)
        for inst in instances
        for n in range(1, inst.n + 1)
    )
    gap_ok = True
    worst = -math.inf
    for delta in (0.0, 0.05, 0.1, 0.5):
        for i, inst in enumerate(instances[:6]):
            g = bandit.simulate_red_light(inst, delta, 200_000, seed=SEED + i)
            gap_ok &= g.gap <= g.bound + 3 * g.std_error
            if g.std_error > 0:
                worst = max(worst, (g.gap - g.bound) / g.std_error)
    ok = excess <= 1e-12 and gap_ok
    report(11, "M(n) optimal; red-light gap <= delta*l_n", ok, f"policy excess={excess:.1e} max (gap-bound)/se={worst:+.2f}")
