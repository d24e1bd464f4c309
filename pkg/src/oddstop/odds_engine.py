"""Odds-theorem stopping rules: discrete, delayed, and continuous time.

Indices exposed by this module are 1-based, matching the usual statement of
the odds-theorem (``X_1, ..., X_n``). Internally arrays are 0-based.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from ._bisect import bisect_first_true
from .errors import NumericalError, PartitionTooCoarse, ValidationError

__all__ = [
    "OddsProblem",
    "DelayedOddsProblem",
    "IntensityFunction",
    "ThresholdResult",
    "DelayedRule",
    "PartitionOdds",
    "secretary_problem",
    "odds_of",
    "tail_odds",
    "threshold_sup_form",
    "threshold_inf_form",
    "win_probability",
    "solve",
    "delayed_threshold",
    "continuous_threshold",
    "partition_odds_sum",
    "discretized_threshold",
]

TIE_EPS = 1e-12


def _check_probabilities(p: Sequence[float], label: str = "p") -> tuple[float, ...]:
    out = []
    for i, v in enumerate(p, start=1):
        v = float(v)
        if not (0.0 <= v < 1.0):
            raise ValidationError(f"{label}[{i}] = {v!r} is outside [0, 1)")
        out.append(v)
    return tuple(out)


@dataclass(frozen=True)
class OddsProblem:
    """Independent Bernoulli successes ``X_1..X_n`` with ``P(X_k = 1) = p[k-1]``."""

    p: tuple[float, ...]

    def __post_init__(self):
        p = _check_probabilities(self.p)
        if not p:
            raise ValidationError("an odds problem needs at least one index")
        object.__setattr__(self, "p", p)

    @property
    def n(self) -> int:
        return len(self.p)


def secretary_problem(n: int, eps: float = 1e-9) -> OddsProblem:
    """Classical secretary problem as an odds problem: ``X_j`` = "j-th arrival is a record".

    The first arrival is a record with certainty; its probability is stored as
    ``1 - eps`` so that odds stay finite. For n >= 2 this cannot move either
    threshold since the index-1 odds only enter ``R(1, n)``.
    """
    if n < 1:
        raise ValidationError("n must be >= 1")
    return OddsProblem((1.0 - eps,) + tuple(1.0 / j for j in range(2, n + 1)))


def odds_of(problem: OddsProblem) -> list[float]:
    return [pk / (1.0 - pk) for pk in problem.p]


def tail_odds(problem: OddsProblem) -> np.ndarray:
    """``R(k, n)`` for k = 1..n+1 (entry k-1), accumulated backwards from ``r_n``."""
    r = odds_of(problem)
    out = np.zeros(problem.n + 1)
    acc = 0.0
    for k in range(problem.n - 1, -1, -1):
        acc += r[k]
        out[k] = acc
    return out


def threshold_sup_form(problem: OddsProblem) -> int:
    """Odds algorithm: sum odds from the end until the sum reaches 1.

    Returns the largest ``k`` with ``R(k, n) >= 1``, or 1 if ``R(1, n) < 1``.
    """
    r = odds_of(problem)
    acc = 0.0
    for k in range(problem.n, 0, -1):
        acc += r[k - 1]
        if acc >= 1.0:
            return k
    return 1


def threshold_inf_form(problem: OddsProblem) -> int:
    """Smallest ``k`` in 1..n with ``R(k+1, n) <= 1`` (empty sum = 0)."""
    R = tail_odds(problem)
    for k in range(1, problem.n + 1):
        if R[k] <= 1.0:
            return k
    raise AssertionError("unreachable: R(n+1, n) = 0")


def _backward_win(p: Sequence[float]) -> list[float]:
    # V[j] = P(win | rule "stop at first success from position j"), last-success objective.
    n = len(p)
    V = [0.0] * (n + 1)
    none_after = 1.0
    for j in range(n - 1, -1, -1):
        V[j] = p[j] * none_after + (1.0 - p[j]) * V[j + 1]
        none_after *= 1.0 - p[j]
    return V


def win_probability(problem: OddsProblem, from_index: int) -> float:
    """Probability that "stop at the first success at index >= from_index" stops on the last success."""
    if not 1 <= from_index <= problem.n:
        raise ValidationError(f"index {from_index} outside 1..{problem.n}")
    return _backward_win(problem.p)[from_index - 1]


@dataclass(frozen=True)
class ThresholdResult:
    s: int
    s_prime: int
    tail_odds_at_s: float
    win_probability: float
    near_tie: bool = False

    def to_dict(self) -> dict:
        return {
            "s": self.s,
            "s_prime": self.s_prime,
            "tail_odds_at_s": self.tail_odds_at_s,
            "win_probability": self.win_probability,
            "near_tie": self.near_tie,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ThresholdResult":
        return cls(
            s=int(d["s"]),
            s_prime=int(d["s_prime"]),
            tail_odds_at_s=float(d["tail_odds_at_s"]),
            win_probability=float(d["win_probability"]),
            near_tie=bool(d.get("near_tie", False)),
        )


def solve(problem: OddsProblem) -> ThresholdResult:
    """Both threshold forms, the tail odds at ``s`` and the value of the canonical (``s'``) rule."""
    R = tail_odds(problem)
    s = threshold_sup_form(problem)
    s_prime = threshold_inf_form(problem)
    near_tie = bool(np.any(np.abs(R[:-1] - 1.0) < TIE_EPS))
    return ThresholdResult(
        s=s,
        s_prime=s_prime,
        tail_odds_at_s=float(R[s - 1]),
        win_probability=win_probability(problem, s_prime),
        near_tie=near_tie,
    )


@dataclass(frozen=True)
class DelayedOddsProblem:
    """Stopping is forbidden before the (realized) delay index ``w``.

    ``p_given_w`` lists ``P(X_j = 1 | W <= w)`` for j = w..n. That the delay
    leaves the laws of the later ``X_j`` intact is the caller's assumption.
    """

    n: int
    w: int
    p_given_w: tuple[float, ...]

    def __post_init__(self):
        if self.n < 1 or not 1 <= self.w <= self.n:
            raise ValidationError(f"need 1 <= w <= n, got w={self.w}, n={self.n}")
        p = _check_probabilities(self.p_given_w, "p_given_w")
        if len(p) != self.n - self.w + 1:
            raise ValidationError(
                f"p_given_w must cover indices {self.w}..{self.n} ({self.n - self.w + 1} values), got {len(p)}"
            )
        object.__setattr__(self, "p_given_w", p)


@dataclass(frozen=True)
class DelayedRule:
    """Stop at the first success at index >= ``threshold`` (always >= ``w``)."""

    w: int
    threshold: int
    tail_odds_after: float
    win_probability: float

    def to_dict(self) -> dict:
        return {
            "w": self.w,
            "threshold": self.threshold,
            "tail_odds_after": self.tail_odds_after,
            "win_probability": self.win_probability,
        }


def delayed_threshold(problem: DelayedOddsProblem) -> DelayedRule:
    sub = OddsProblem(problem.p_given_w)
    R = tail_odds(sub)
    k_local = threshold_inf_form(sub)
    return DelayedRule(
        w=problem.w,
        threshold=problem.w + k_local - 1,
        tail_odds_after=float(R[k_local]),
        win_probability=win_probability(sub, k_local),
    )


# ---------------------------------------------------------------------------
# continuous time


@dataclass(frozen=True)
class IntensityFunction:
    """Non-negative intensity on ``[a, b]`` (zero elsewhere in [0, 1]).

    Construct with :meth:`constant`, :meth:`piecewise_linear`, :meth:`reciprocal`
    or :meth:`from_dict`. Integrals are exact for all three kinds.
    """

    kind: str
    support: tuple[float, float]
    value: float = 0.0
    knots: tuple[tuple[float, float], ...] = field(default=())

    def __post_init__(self):
        a, b = (float(v) for v in self.support)
        if not (0.0 <= a < b <= 1.0):
            raise ValidationError(f"support [{a}, {b}] must satisfy 0 <= a < b <= 1")
        object.__setattr__(self, "support", (a, b))
        if self.kind == "constant":
            v = float(self.value)
            if not math.isfinite(v) or v < 0:
                raise ValidationError(f"constant intensity must be finite and >= 0, got {v}")
            object.__setattr__(self, "value", v)
        elif self.kind == "reciprocal":
            if a <= 0.0:
                raise ValidationError("reciprocal intensity 1/u needs a support bounded away from 0")
        elif self.kind == "piecewise_linear":
            ts = [t for t, _ in self.knots]
            vs = [v for _, v in self.knots]
            if len(ts) < 2:
                raise ValidationError("piecewise_linear needs at least two knots")
            if any(t1 <= t0 for t0, t1 in zip(ts, ts[1:])):
                raise ValidationError("knot times must be strictly increasing")
            if any(not math.isfinite(v) or v < 0 for v in vs):
                raise ValidationError("piecewise_linear values must be finite and >= 0")
            if (ts[0], ts[-1]) != (a, b):
                raise ValidationError("support must match the first and last knot")
        else:
            raise ValidationError(f"unknown intensity kind {self.kind!r}")

    @classmethod
    def constant(cls, value: float, support=(0.0, 1.0)) -> "IntensityFunction":
        return cls("constant", tuple(support), value=value)

    @classmethod
    def reciprocal(cls, support) -> "IntensityFunction":
        return cls("reciprocal", tuple(support))

    @classmethod
    def piecewise_linear(cls, knots: Iterable[Sequence[float]]) -> "IntensityFunction":
        knots = tuple((float(t), float(v)) for t, v in knots)
        if len(knots) < 2:
            raise ValidationError("piecewise_linear needs at least two knots")
        return cls("piecewise_linear", (knots[0][0], knots[-1][0]), knots=knots)

    @classmethod
    def from_dict(cls, d: dict) -> "IntensityFunction":
        try:
            kind = d["kind"]
            if kind == "constant":
                return cls.constant(d["value"], d.get("support", (0.0, 1.0)))
            if kind == "reciprocal":
                return cls.reciprocal(d["support"])
            if kind == "piecewise_linear":
                return cls.piecewise_linear(d["knots"])
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed intensity document: {exc}") from exc
        raise ValidationError(f"unknown intensity kind {kind!r}")

    def to_dict(self) -> dict:
        if self.kind == "constant":
            return {"kind": "constant", "value": self.value, "support": list(self.support)}
        if self.kind == "reciprocal":
            return {"kind": "reciprocal", "support": list(self.support)}
        return {"kind": "piecewise_linear", "knots": [list(k) for k in self.knots]}

    def __call__(self, u: float) -> float:
        a, b = self.support
        if u < a or u > b:
            return 0.0
        if self.kind == "constant":
            return self.value
        if self.kind == "reciprocal":
            return 1.0 / u
        ts, vs = zip(*self.knots)
        return float(np.interp(u, ts, vs))

    def integral(self, lo: float, hi: float) -> float:
        """Exact ``∫_lo^hi η(u) du`` (0 when the ranges do not meet)."""
        a, b = self.support
        lo, hi = max(lo, a), min(hi, b)
        if hi <= lo:
            return 0.0
        if self.kind == "constant":
            return self.value * (hi - lo)
        if self.kind == "reciprocal":
            return math.log(hi / lo)
        total = 0.0
        for (t0, v0), (t1, v1) in zip(self.knots, self.knots[1:]):
            x0, x1 = max(lo, t0), min(hi, t1)
            if x1 <= x0:
                continue
            slope = (v1 - v0) / (t1 - t0)
            y0 = v0 + slope * (x0 - t0)
            y1 = v0 + slope * (x1 - t0)
            total += 0.5 * (y0 + y1) * (x1 - x0)
        return total

    def tail(self, t: float) -> float:
        return self.integral(t, 1.0)


def continuous_threshold(eta: IntensityFunction, T: float = 0.0, xtol: float = 1e-10) -> float:
    """``t* = inf{t >= T : ∫_t^1 η <= 1}``; accept the first jump at or after ``t*``."""
    if not 0.0 <= T < 1.0:
        raise ValidationError(f"T = {T} must lie in [0, 1)")
    total = eta.tail(T)
    if not math.isfinite(total):
        raise NumericalError("tail integral is not finite")
    return bisect_first_true(lambda t: eta.tail(t) <= 1.0, T, 1.0, xtol)


@dataclass(frozen=True)
class PartitionOdds:
    """Bernoulli model of an intensity on an equidistant partition of ``[t, 1]``."""

    t: float
    m: int
    cell_probs: np.ndarray
    cell_odds: np.ndarray
    integral: float

    @property
    def odds_sum(self) -> float:
        return math.fsum(self.cell_odds)

    @property
    def max_cell_prob(self) -> float:
        return float(self.cell_probs.max()) if self.m else 0.0

    @property
    def mass(self) -> float:
        return math.fsum(self.cell_probs)

    @property
    def upper_bound(self) -> float:
        return math.fsum(self.cell_probs / (1.0 - self.max_cell_prob))

    def squeeze_holds(self) -> bool:
        # termwise p_j <= r_j <= p_j/(1-s(m)), then summed; fsum keeps the order exact.
        p, r = self.cell_probs, self.cell_odds
        s = self.max_cell_prob
        if not (np.all(p <= r) and np.all(r <= p / (1.0 - s))):
            return False
        return self.mass <= self.odds_sum <= self.upper_bound


def partition_odds_sum(eta: IntensityFunction, t: float, m: int) -> PartitionOdds:
    if m < 1:
        raise ValidationError("m must be >= 1")
    if not 0.0 <= t < 1.0:
        raise ValidationError(f"t = {t} must lie in [0, 1)")
    edges = np.linspace(t, 1.0, m + 1)
    p = np.array([eta.integral(lo, hi) for lo, hi in zip(edges[:-1], edges[1:])])
    if np.any(p >= 1.0):
        j = int(np.argmax(p >= 1.0)) + 1
        raise PartitionTooCoarse(f"cell {j} of {m} has mass {p[j - 1]:.6g} >= 1; increase m")
    return PartitionOdds(t=t, m=m, cell_probs=p, cell_odds=p / (1.0 - p), integral=eta.tail(t))


def discretized_threshold(eta: IntensityFunction, T: float, m: int) -> float:
    """Left edge of the cell where the odds rule on the ``m``-cell Bernoulli model starts stopping."""
    part = partition_odds_sum(eta, T, m)
    k = threshold_inf_form(OddsProblem(tuple(part.cell_probs)))
    return T + (k - 1) * (1.0 - T) / m
