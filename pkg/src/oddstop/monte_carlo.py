"""Monte Carlo evaluation of x-strategies and index-cutoff rules.

Each trial draws ``n`` i.i.d. uniform arrival times and an independent uniform
rank order, then applies the strategy. Trials are simulated in fixed-size
blocks with counter-derived seeds (see :mod:`oddstop._seeding`), so a report
depends on ``(master_seed, trials, n, strategy)`` and not on ``workers``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from . import best_choice as bc
from ._seeding import binomial_se, run_blocks
from .best_choice import XStrategy
from .errors import ValidationError
from .point_processes import record_flags

# rows per vectorized sub-chunk are capped so a block never holds more than this many cells
_CELLS_PER_CHUNK = 1 << 22


@dataclass(frozen=True)
class IndexRule:
    """Let ``cutoff - 1`` arrivals pass, then take the next relative best."""

    cutoff: int

    def label(self) -> str:
        return f"cutoff={self.cutoff}"


Strategy = Union[XStrategy, IndexRule]


def parse_strategy(text: str) -> Strategy:
    """``"x=0.3678"``, ``"x=1/e"`` or ``"cutoff=4"``."""
    key, _, value = text.partition("=")
    key = key.strip().lower()
    value = value.strip()
    try:
        if key == "x":
            return XStrategy(bc.INV_E if value.lower() in ("1/e", "inv_e") else float(value))
        if key == "cutoff":
            return IndexRule(int(value))
    except ValueError as exc:
        raise ValidationError(f"bad strategy {text!r}: {exc}") from exc
    raise ValidationError(f"bad strategy {text!r}; expected x=<float> or cutoff=<int>")


@dataclass(frozen=True)
class SimulationConfig:
    trials: int
    master_seed: int
    n: int
    strategy: Strategy
    workers: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise ValidationError("trials must be >= 1")
        if self.n < 1:
            raise ValidationError("n must be >= 1")
        if not 0 <= self.master_seed < 2**64:
            raise ValidationError("master seed must be an unsigned 64-bit integer")
        if isinstance(self.strategy, IndexRule) and not 1 <= self.strategy.cutoff <= self.n:
            raise ValidationError(f"cutoff must lie in 1..{self.n}")

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "seed": self.master_seed,
            "n": self.n,
            "strategy": self.strategy.label(),
            "workers": self.workers,
        }


@dataclass(frozen=True)
class SimulationReport:
    success: int
    wrong_pick: int
    no_pick: int
    config: dict = field(default_factory=dict)

    @property
    def trials(self) -> int:
        return self.success + self.wrong_pick + self.no_pick

    @property
    def estimate(self) -> float:
        return self.success / self.trials

    @property
    def std_error(self) -> float:
        return binomial_se(self.estimate, self.trials)

    @property
    def no_pick_rate(self) -> float:
        return self.no_pick / self.trials

    @property
    def no_pick_std_error(self) -> float:
        return binomial_se(self.no_pick_rate, self.trials)

    @property
    def outcome_counts(self) -> dict:
        return {"success": self.success, "wrong_pick": self.wrong_pick, "no_pick": self.no_pick}

    def __add__(self, other: "SimulationReport") -> "SimulationReport":
        return SimulationReport(
            self.success + other.success,
            self.wrong_pick + other.wrong_pick,
            self.no_pick + other.no_pick,
            self.config or other.config,
        )

    def to_dict(self) -> dict:
        return {
            "estimate": self.estimate,
            "std_error": self.std_error,
            "trials": self.trials,
            "outcome_counts": self.outcome_counts,
            "config": self.config,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SimulationReport":
        c = d["outcome_counts"]
        return cls(int(c["success"]), int(c["wrong_pick"]), int(c["no_pick"]), dict(d.get("config", {})))


def _draw_arrivals(rng: np.random.Generator, rows: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    times = rng.random((rows, n))
    times.sort(axis=1)
    if n > 1:
        # probability-zero ties: redraw affected rows
        bad = np.flatnonzero(np.any(np.diff(times, axis=1) == 0, axis=1))
        while bad.size:
            fresh = np.sort(rng.random((bad.size, n)), axis=1)
            times[bad] = fresh
            bad = bad[np.any(np.diff(fresh, axis=1) == 0, axis=1)]
    ranks = rng.permuted(np.tile(np.arange(1, n + 1, dtype=np.int32), (rows, 1)), axis=1)
    return times, ranks


def _outcomes(eligible: np.ndarray, ranks: np.ndarray) -> tuple[int, int, int]:
    picked = eligible.any(axis=1)
    pos = eligible.argmax(axis=1)
    best = ranks[np.arange(len(ranks)), pos] == 1
    success = int(np.count_nonzero(picked & best))
    wrong = int(np.count_nonzero(picked & ~best))
    return success, wrong, len(ranks) - success - wrong


def _simulate_block(rng: np.random.Generator, size: int, n: int, strategy: Strategy) -> SimulationReport:
    rows = max(1, _CELLS_PER_CHUNK // n)
    total = SimulationReport(0, 0, 0)
    for start in range(0, size, rows):
        m = min(rows, size - start)
        times, ranks = _draw_arrivals(rng, m, n)
        flags = record_flags(ranks)
        if isinstance(strategy, XStrategy):
            eligible = flags & (times >= strategy.x)
        else:
            eligible = flags.copy()
            eligible[:, : strategy.cutoff - 1] = False
        total = total + SimulationReport(*_outcomes(eligible, ranks))
    return total


def simulate(config: SimulationConfig) -> SimulationReport:
    parts = run_blocks(
        lambda rng, size: _simulate_block(rng, size, config.n, config.strategy),
        config.trials,
        config.master_seed,
        config.workers,
    )
    out = sum(parts, SimulationReport(0, 0, 0))
    return SimulationReport(out.success, out.wrong_pick, out.no_pick, config.to_dict())


def evaluate_x_strategy(config: SimulationConfig) -> SimulationReport:
    if not isinstance(config.strategy, XStrategy):
        raise ValidationError("evaluate_x_strategy needs an XStrategy")
    return simulate(config)


def evaluate_index_rule(config: SimulationConfig, cutoff: int | None = None) -> SimulationReport:
    if cutoff is not None:
        config = SimulationConfig(config.trials, config.master_seed, config.n, IndexRule(cutoff), config.workers)
    if not isinstance(config.strategy, IndexRule):
        raise ValidationError("evaluate_index_rule needs a cutoff")
    return simulate(config)


def dominance_report(n_list, trials: int = 100_000, seed: int = 0, workers: int = 1) -> list[dict]:
    """Closed-form and simulated ``p_n(x_n)`` against ``p_n(1/e)`` for each n."""
    rows = []
    for n in n_list:
        x_n = bc.optimal_wait_threshold(n)
        opt = bc.optimal_success(n)
        at_e = bc.success_probability(n, bc.INV_E)
        mc_opt = simulate(SimulationConfig(trials, seed, n, XStrategy(x_n), workers))
        mc_e = simulate(SimulationConfig(trials, seed, n, XStrategy(bc.INV_E), workers))
        rows.append(
            {
                "n": n,
                "x_n": x_n,
                "p_n_x_n": opt,
                "p_n_inv_e": at_e,
                "mc_p_n_x_n": mc_opt.estimate,
                "mc_p_n_x_n_se": mc_opt.std_error,
                "mc_p_n_inv_e": mc_e.estimate,
                "mc_p_n_inv_e_se": mc_e.std_error,
                "violation": opt < at_e,
            }
        )
    return rows


def z_score(estimate: float, target: float, se: float) -> float:
    if se == 0.0:
        return 0.0 if estimate == target else math.inf
    return (estimate - target) / se
