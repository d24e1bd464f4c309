"""Two-line betting with known per-step success probabilities.

At step ``j`` the bettor sees ``p1[j]`` and ``p2[j]`` and bets on one line,
receiving a Bernoulli reward with that success probability. Betting on the
larger of the two is optimal and earns ``M(n) = sum_j max(p1[j], p2[j])``.

In the red-light variant Line 2 is blocked at each step independently with
probability ``delta``. The greedy-whenever-possible rule then loses
``delta * sum_j max(p2[j] - p1[j], 0) <= delta * l_n`` in expectation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._seeding import run_blocks
from .errors import ValidationError

LINE1, LINE2 = 1, 2
COUPLINGS = ("independent", "comonotone")


@dataclass(frozen=True)
class TwoLineInstance:
    p1: tuple[float, ...]
    p2: tuple[float, ...]

    def __post_init__(self):
        p1 = tuple(float(v) for v in self.p1)
        p2 = tuple(float(v) for v in self.p2)
        if len(p1) != len(p2) or not p1:
            raise ValidationError("both lines need the same, non-zero number of steps")
        for label, seq in (("p1", p1), ("p2", p2)):
            for j, v in enumerate(seq, start=1):
                if not 0.0 <= v <= 1.0:
                    raise ValidationError(f"{label}[{j}] = {v} is outside [0, 1]")
        object.__setattr__(self, "p1", p1)
        object.__setattr__(self, "p2", p2)

    @property
    def n(self) -> int:
        return len(self.p1)

    def arrays(self, n: int | None = None) -> tuple[np.ndarray, np.ndarray]:
        n = self._horizon(n)
        return np.asarray(self.p1[:n]), np.asarray(self.p2[:n])

    def _horizon(self, n: int | None) -> int:
        if n is None:
            return self.n
        if not 0 <= n <= self.n:
            raise ValidationError(f"n must lie in 0..{self.n}")
        return n


@dataclass(frozen=True)
class RedLightModel:
    delta: float

    def __post_init__(self):
        if not 0.0 <= self.delta <= 1.0:
            raise ValidationError(f"delta must lie in [0, 1], got {self.delta}")


def greedy_choice(instance: TwoLineInstance, j: int, line2_available: bool = True) -> int:
    """Line with the larger entry at (1-based) step ``j``; ties and a blocked Line 2 give Line 1."""
    if not 1 <= j <= instance.n:
        raise ValidationError(f"step {j} outside 1..{instance.n}")
    if line2_available and instance.p2[j - 1] > instance.p1[j - 1]:
        return LINE2
    return LINE1


def accumulated_max(instance: TwoLineInstance, n: int | None = None) -> float:
    p1, p2 = instance.arrays(n)
    return math.fsum(np.maximum(p1, p2))


def l_divergence(instance: TwoLineInstance, n: int | None = None) -> float:
    p1, p2 = instance.arrays(n)
    return math.fsum(np.abs(p1 - p2))


def red_light_gap(instance: TwoLineInstance, delta: float, n: int | None = None) -> float:
    """Exact expected loss of greedy-whenever-possible under per-step blocking."""
    RedLightModel(delta)
    p1, p2 = instance.arrays(n)
    return delta * math.fsum(np.maximum(p2 - p1, 0.0))


@dataclass(frozen=True)
class GapEstimate:
    gap: float
    std_error: float
    trials: int
    bound: float
    analytic_gap: float

    def to_dict(self) -> dict:
        return {
            "gap": self.gap,
            "std_error": self.std_error,
            "trials": self.trials,
            "delta_l_bound": self.bound,
            "analytic_gap": self.analytic_gap,
        }


def _gap_block(rng, size, p1, p2, delta, coupling):
    n = len(p1)
    blocked = rng.random((size, n)) < delta
    v1 = rng.random((size, n))
    v2 = v1 if coupling == "comonotone" else rng.random((size, n))
    i1 = v1 < p1
    i2 = v2 < p2
    wants2 = p2 > p1
    # reward(free greedy) - reward(red-light greedy), on common random numbers
    switched = blocked & wants2
    diff = np.where(switched, i2.astype(np.int8) - i1.astype(np.int8), 0)
    return diff.sum(axis=1)


def simulate_red_light(
    instance: TwoLineInstance,
    delta: float,
    trials: int,
    seed: int = 0,
    coupling: str = "independent",
    workers: int = 1,
) -> GapEstimate:
    """Estimate ``M(n) - E(reward)`` of greedy-whenever-possible under red lights.

    Each trial runs the unrestricted greedy rule and the red-light rule on the
    same reward draws; the mean paired difference is unbiased for the gap since
    the unrestricted rule earns ``M(n)`` in expectation.
    """
    RedLightModel(delta)
    if coupling not in COUPLINGS:
        raise ValidationError(f"coupling must be one of {COUPLINGS}")
    p1, p2 = instance.arrays()
    parts = run_blocks(lambda rng, size: _gap_block(rng, size, p1, p2, delta, coupling), trials, seed, workers)
    d = np.concatenate(parts).astype(float)
    se = float(d.std(ddof=1) / math.sqrt(trials)) if trials > 1 else math.inf
    return GapEstimate(
        gap=float(d.mean()),
        std_error=se,
        trials=trials,
        bound=delta * l_divergence(instance),
        analytic_gap=red_light_gap(instance, delta),
    )


def policy_values(instance: TwoLineInstance, n: int | None = None) -> np.ndarray:
    """Expected reward of every open-loop line sequence (2^n of them), by enumeration.

    Rewards carry no information about later steps, so these cover the
    deterministic policies.
    """
    p1, p2 = instance.arrays(n)
    n = len(p1)
    codes = np.arange(1 << n)
    pick2 = ((codes[:, None] >> np.arange(n)) & 1).astype(bool)
    return np.where(pick2, p2, p1).sum(axis=1)


def instance_from_rows(rows: Sequence[Sequence[float]]) -> TwoLineInstance:
    return TwoLineInstance(tuple(r[0] for r in rows), tuple(r[1] for r in rows))
