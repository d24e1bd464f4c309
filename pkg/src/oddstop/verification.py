"""Property suite run by ``oddstop verify``.

Statistical sub-checks are judged at ``sigma`` standard errors. A sub-check
whose ``sigma * std_error`` exceeds ``resolution`` cannot discriminate at the
requested trial count and is reported INCONCLUSIVE instead of PASS/FAIL.
"""
from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from . import bandit, best_choice as bc, odds_engine as oe, oracles, point_processes as pp
from ._seeding import binomial_se, block_rng, run_blocks
from .monte_carlo import SimulationConfig, XStrategy, simulate

PASS, FAIL, INCONCLUSIVE = "PASS", "FAIL", "INCONCLUSIVE"


@dataclass(frozen=True)
class VerifyConfig:
    trials: int = 200_000
    seed: int = 42
    sigma: float = 4.0
    resolution: float = 0.01
    tolerance: float | None = None
    workers: int = 1

    def tol(self, default: float) -> float:
        return default if self.tolerance is None else self.tolerance


@dataclass
class PropertyResult:
    name: str
    status: str = PASS
    margin: float | None = None
    checks: list = field(default_factory=list)
    seconds: float = 0.0

    def add(self, label: str, status: str, **values) -> None:
        self.checks.append({"check": label, "status": status, **values})
        if status == FAIL or (status == INCONCLUSIVE and self.status == PASS):
            self.status = status

    def to_dict(self) -> dict:
        return asdict(self)


def _agree(res: PropertyResult, label: str, est: float, target: float, se: float, cfg: VerifyConfig, k=None):
    k = cfg.sigma if k is None else k
    if se == 0.0:
        status = PASS if est == target else (INCONCLUSIVE if k * se > cfg.resolution else FAIL)
        z = 0.0 if est == target else math.inf
    else:
        z = (est - target) / se
        if k * se > cfg.resolution:
            status = INCONCLUSIVE
        else:
            status = PASS if abs(z) <= k else FAIL
    res.add(label, status, estimate=est, target=target, std_error=se, z=z)
    return z


def _separate(res: PropertyResult, label: str, est: float, forbidden: float, se: float, cfg: VerifyConfig, k=None):
    # est must differ from `forbidden` by more than k standard errors
    k = cfg.sigma if k is None else k
    gap = abs(est - forbidden) / se if se > 0 else math.inf
    # a clear separation is conclusive at any se; a missed one only if se is small
    if gap > k:
        status = PASS
    else:
        status = INCONCLUSIVE if k * se > cfg.resolution else FAIL
    res.add(label, status, estimate=est, forbidden=forbidden, std_error=se, separation_sigma=gap)
    return gap


def _analytic(res: PropertyResult, label: str, ok: bool, **values):
    res.add(label, PASS if ok else FAIL, **values)


# ---------------------------------------------------------------------------


def check_threshold_table(cfg: VerifyConfig) -> PropertyResult:
    res = PropertyResult("threshold-table")
    _analytic(res, "x_1 = 0", bc.optimal_wait_threshold(1) == 0.0)
    err = abs(bc.optimal_wait_threshold(3) - (2.0 - math.sqrt(3.0)))
    _analytic(res, "x_3 = 2 - sqrt(3)", err <= cfg.tol(1e-9), error=err)
    gaps = [bc.threshold_gap(n) for n in range(2, 201)]
    ratios = [b / a for a, b in zip(gaps, gaps[1:])]
    _analytic(res, "x_n strictly increasing, 2 <= n <= 200", max(ratios) < 1.0, max_gap_ratio=max(ratios))
    _analytic(res, "0 < 1/e - x_200 < 0.002", 0.0 < gaps[-1] < 0.002, gap=gaps[-1])
    excess = [bc.optimal_excess(n) for n in range(1, 201)]
    _analytic(
        res,
        "p_n(x_n) strictly decreasing and > 1/e (n <= 200)",
        all(b < a for a, b in zip(excess, excess[1:])) and min(excess) > 0.0,
        min_excess=min(excess),
    )
    res.margin = max(ratios)
    return res


def check_inv_e_lower_bound(cfg: VerifyConfig) -> PropertyResult:
    res = PropertyResult("inv-e-lower-bound")
    logm = [bc.log10_margin_over_inv_e(n) for n in range(1, 10_001)]
    ok = all(math.isfinite(v) for v in logm)
    _analytic(res, "p_n(1/e) - 1/e > 0 for n <= 10^4", ok, min_log10_margin=min(logm))
    for n in (2, 10, 100):
        r = simulate(SimulationConfig(cfg.trials, cfg.seed, n, XStrategy(bc.INV_E), cfg.workers))
        _agree(res, f"MC success n={n}", r.estimate, bc.success_probability(n, bc.INV_E), r.std_error, cfg)
        lower = bc.INV_E - cfg.sigma * r.std_error
        _analytic(res, f"MC success n={n} > 1/e - sigma*se", r.estimate > lower, estimate=r.estimate)
    res.margin = min(logm)
    return res


def check_inv_e_no_pick(cfg: VerifyConfig) -> PropertyResult:
    res = PropertyResult("inv-e-no-pick-rate")
    zs = []
    for n in (1, 5, 50):
        r = simulate(SimulationConfig(cfg.trials, cfg.seed, n, XStrategy(bc.INV_E), cfg.workers))
        zs.append(_agree(res, f"no-pick n={n}", r.no_pick_rate, bc.INV_E, r.no_pick_std_error, cfg))
        _analytic(res, f"outcome partition n={n}", r.trials == cfg.trials)
    res.margin = max(abs(z) for z in zs)
    return res


def check_closed_form_grid(cfg: VerifyConfig) -> PropertyResult:
    res = PropertyResult("closed-form-grid")
    worst = 0.0
    for n in (1, 2, 3, 5, 10, 50, 100):
        for x in (0.0, 0.1, bc.INV_E, 0.5, 0.9):
            r = simulate(SimulationConfig(cfg.trials, cfg.seed, n, XStrategy(x), cfg.workers))
            z1 = _agree(res, f"p_{n}({x:.4f})", r.estimate, bc.success_probability(n, x), r.std_error, cfg)
            z2 = _agree(res, f"no-pick n={n} x={x:.4f}", r.no_pick_rate, x, r.no_pick_std_error, cfg)
            worst = max(worst, abs(z1), abs(z2))
    res.margin = worst
    return res


def _random_odds_problems(count: int, rng: np.random.Generator, n_max: int = 12):
    for _ in range(count):
        n = int(rng.integers(1, n_max + 1))
        scale = rng.uniform(0.05, 0.9)
        yield oe.OddsProblem(tuple(rng.uniform(0.0, scale, size=n)))


def check_odds_optimality(cfg: VerifyConfig) -> PropertyResult:
    res = PropertyResult("odds-optimality")
    tol = cfg.tol(1e-12)
    worst_enum = worst_opt = 0.0
    problems = list(_random_odds_problems(500, block_rng(cfg.seed, 10_001)))
    for prob in problems:
        sol = oe.solve(prob)
        _, values = oracles.stop_set_values(prob.p)
        worst_opt = max(worst_opt, float(values.max()) - sol.win_probability)
        for k in range(1, prob.n + 1):
            e = abs(oe.win_probability(prob, k) - oracles.enumerate_win_probability(prob.p, k))
            worst_enum = max(worst_enum, e)
    _analytic(res, "s'-rule attains the best stop-set value", worst_opt <= tol, max_shortfall=worst_opt)
    _analytic(res, "backward recursion = enumeration", worst_enum <= tol, max_error=worst_enum)
    res.margin = max(worst_opt, worst_enum)
    return res


def tie_problems(rng: np.random.Generator, count: int = 50):
    """Problems with some ``R(k, n) == 1`` exactly in floating point."""
    out = [oe.OddsProblem((0.5,) * n) for n in range(1, 13)]
    while len(out) < count:
        prefix = tuple(rng.uniform(0.0, 0.6, size=int(rng.integers(0, 8))))
        zeros = (0.0,) * int(rng.integers(0, 3))
        prob = oe.OddsProblem(prefix + (0.5,) + zeros)
        out.append(prob)
    return out


def check_tie_case(cfg: VerifyConfig) -> PropertyResult:
    res = PropertyResult("tie-case")
    tol = cfg.tol(1e-12)
    worst = 0.0
    for prob in tie_problems(block_rng(cfg.seed, 10_002)):
        R = oe.tail_odds(prob)
        assert np.any(R[:-1] == 1.0)
        sol = oe.solve(prob)
        diff = abs(oe.win_probability(prob, sol.s) - oe.win_probability(prob, sol.s_prime))
        worst = max(worst, diff)
    _analytic(res, "win(s) = win(s') on exact ties", worst <= tol, max_difference=worst)
    res.margin = worst
    return res


def check_continuous(cfg: VerifyConfig) -> PropertyResult:
    res = PropertyResult("continuous-threshold")
    tol = cfg.tol(1e-9)
    recip = oe.IntensityFunction.reciprocal((1e-6, 1.0))
    const = oe.IntensityFunction.constant(2.0)
    e1 = abs(oe.continuous_threshold(recip) - bc.INV_E)
    e2 = abs(oe.continuous_threshold(const) - 0.5)
    _analytic(res, "eta = 1/u gives t* = 1/e", e1 <= tol, error=e1)
    _analytic(res, "eta = 2 gives t* = 1/2", e2 <= tol, error=e2)
    cases = [(oe.IntensityFunction.reciprocal((0.01, 1.0)), 0.2), (const, 0.0)]
    squeeze_ok = True
    for eta, T in cases:
        t_star = oe.continuous_threshold(eta, T)
        m = 1000
        d = abs(oe.discretized_threshold(eta, T, m) - t_star)
        _analytic(res, f"{eta.kind}: discretized threshold within one cell (m={m})", d <= (1 - T) / m, distance=d)
        for m in (10, 100, 1000):
            part = oe.partition_odds_sum(eta, T, m)
            squeeze_ok &= part.squeeze_holds() and abs(part.mass - part.integral) <= 1e-12
    _analytic(res, "squeeze bounds at m in {10, 100, 1000}", squeeze_ok)
    res.margin = max(e1, e2)
    return res


def check_renyi(cfg: VerifyConfig) -> PropertyResult:
    res = PropertyResult("renyi")
    counts = oracles.record_indicator_counts(8)
    exact = all(int(c) * k == math.factorial(8) for k, c in enumerate(counts, start=1))
    _analytic(res, "record probability of arrival k is 1/k (all 8! orders)", exact)

    def block(rng, size):
        ranks = rng.permuted(np.tile(np.arange(1, 11), (size, 1)), axis=1)
        return pp.record_flags(ranks).sum(axis=0)

    hits = np.sum(run_blocks(block, cfg.trials, cfg.seed, cfg.workers), axis=0)
    zs = []
    for k in range(1, 11):
        f = hits[k - 1] / cfg.trials
        zs.append(_agree(res, f"MC record frequency k={k}", f, 1.0 / k, binomial_se(f, cfg.trials), cfg))
    res.margin = max(abs(z) for z in zs)
    return res


def check_record_intensity(cfg: VerifyConfig) -> PropertyResult:
    res = PropertyResult("record-intensity")
    batches = run_blocks(
        lambda rng, size: pp.simulate_thinned_batch(0.05, 1, size, rng, max_count=6),
        cfg.trials,
        cfg.seed,
        cfg.workers,
    )
    batch = batches[0]
    for b in batches[1:]:
        batch = batch.merge(b)
    worst = 0.0
    for row in pp.retention_frequencies(batch):
        k = row["pre_count"]
        if not 1 <= k <= 5:
            continue
        f, se = row["frequency"], row["std_error"]
        worst = max(worst, abs(_agree(res, f"retention after count {k} = 1/(k+1)", f, 1 / (k + 1), se, cfg)))
        _separate(res, f"retention after count {k} != 1/k", f, 1 / k, se, cfg)

    # same question asked of genuine ranked arrivals
    def block(rng, size):
        ranks = rng.permuted(np.tile(np.arange(1, 9), (size, 1)), axis=1)
        return pp.record_flags(ranks).sum(axis=0)

    hits = np.sum(run_blocks(block, cfg.trials, cfg.seed + 1, cfg.workers), axis=0)
    for k in range(1, 6):
        f = hits[k] / cfg.trials
        _agree(res, f"ranked arrivals: record after {k} earlier = 1/(k+1)", f, 1 / (k + 1), binomial_se(f, cfg.trials), cfg)
    res.margin = worst
    return res


def check_future_records(cfg: VerifyConfig) -> PropertyResult:
    res = PropertyResult("future-records-below-one")
    est = {k: pp.expected_future_records(bc.INV_E, k, cfg.trials, cfg.seed, cfg.workers) for k in (1, 10, 100)}
    e1 = est[1]
    _separate(res, "E(R_1 - R_t | N_t = 1) < 1 at t = 1/e", e1.mean, 1.0, e1.std_error, cfg, k=3.0)
    _analytic(res, "estimate below 1", e1.mean < 1.0, estimate=e1.mean)
    for k, e in est.items():
        _agree(res, f"k={k} matches closed form", e.mean, pp.exact_future_records(bc.INV_E, k), e.std_error, cfg)
    for a, b in ((1, 10), (10, 100)):
        se = math.hypot(est[a].std_error, est[b].std_error)
        _separate(res, f"increase from k={a} to k={b}", est[b].mean - est[a].mean, 0.0, se, cfg)
        _analytic(res, f"k={b} estimate above k={a}", est[b].mean > est[a].mean)
    res.margin = (1.0 - e1.mean) / e1.std_error
    return res


def check_records_in_interval(cfg: VerifyConfig) -> PropertyResult:
    res = PropertyResult("records-in-interval")
    mismatches = 0
    for n in range(1, 9):
        counts = oracles.record_indicator_counts(n)
        total = math.factorial(n)
        for k in range(0, n + 1):
            J = n - k
            oracle = Fraction(int(counts[k:].sum()), total)
            if pp.expected_records_in_interval(k, J, exact=True) != oracle:
                mismatches += 1
    _analytic(res, "sum 1/(k+j) = permutation average, k + J <= 8", mismatches == 0, mismatches=mismatches)
    res.margin = float(mismatches)
    return res


def bandit_instances(rng: np.random.Generator, count: int = 40):
    out = [bandit.TwoLineInstance((0.2,) * 10, (0.8,) * 10)]
    while len(out) < count:
        n = int(rng.integers(1, 11))
        out.append(bandit.TwoLineInstance(tuple(rng.random(n)), tuple(rng.random(n))))
    return out


def check_bandit(cfg: VerifyConfig) -> PropertyResult:
    res = PropertyResult("bandit")
    instances = bandit_instances(block_rng(cfg.seed, 10_003))
    worst = -math.inf
    for inst in instances:
        for n in range(1, inst.n + 1):
            worst = max(worst, float(bandit.policy_values(inst, n).max()) - bandit.accumulated_max(inst, n))
    _analytic(res, "M(n) >= every policy value (n <= 10)", worst <= 1e-12, max_excess=worst)
    eq = instances[0]
    trials = max(2, cfg.trials // 4)
    for delta in (0.0, 0.05, 0.1, 0.5):
        for i, inst in enumerate(instances[:5]):
            g = bandit.simulate_red_light(inst, delta, trials, cfg.seed + i, workers=cfg.workers)
            ok = g.gap <= g.bound + 3.0 * g.std_error
            _analytic(res, f"instance {i} delta={delta}: gap <= delta*l + 3se", ok, gap=g.gap, bound=g.bound)
    g = bandit.simulate_red_light(eq, 0.1, cfg.trials, cfg.seed, workers=cfg.workers)
    _agree(res, "equality instance gap = 0.6", g.gap, 0.6, g.std_error, cfg, k=3.0)
    res.margin = worst
    return res


PROPERTIES: dict[str, Callable[[VerifyConfig], PropertyResult]] = {
    "threshold-table": check_threshold_table,
    "inv-e-lower-bound": check_inv_e_lower_bound,
    "inv-e-no-pick-rate": check_inv_e_no_pick,
    "closed-form-grid": check_closed_form_grid,
    "odds-optimality": check_odds_optimality,
    "tie-case": check_tie_case,
    "continuous-threshold": check_continuous,
    "renyi": check_renyi,
    "record-intensity": check_record_intensity,
    "future-records-below-one": check_future_records,
    "records-in-interval": check_records_in_interval,
    "bandit": check_bandit,
}


def run(cfg: VerifyConfig, names=None) -> list[PropertyResult]:
    names = list(PROPERTIES) if not names else list(names)
    unknown = [n for n in names if n not in PROPERTIES]
    if unknown:
        raise KeyError(f"unknown properties: {', '.join(unknown)}")
    out = []
    for name in names:
        t0 = time.perf_counter()
        r = PROPERTIES[name](cfg)
        r.seconds = time.perf_counter() - t0
        r.margin = None if r.margin is None else float(r.margin)
        out.append(r)
    return out
