"""x-strategies for best choice with i.i.d. U[0,1] arrival times.

An x-strategy waits until time ``x`` and then takes the first record. Given
``N = n`` options its success probability is

    p_n(x) = (1-x)^n / n + x * sum_{k=1}^{n-1} (1-x)^k / k.

Two rearrangements are used for numerics. Consecutive differences are
``p_n(x) - p_{n+1}(x) = (1-x)^{n+1} / (n(n+1))``, so ``p_n`` is evaluated as
``p_1 = 1 - x`` minus accumulated non-negative decrements (monotone in ``n``
even after rounding). Summing those decrements to infinity gives

    p_n(x) + x log x = sum_{k>n} (1-x)^k / (k(k-1)),

the excess over the limit ``-x log x``, which stays accurate far below the
float resolution of ``p_n`` itself.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._bisect import bisect_first_true
from .errors import ValidationError

INV_E = math.exp(-1.0)
THRESHOLD_XTOL = 1e-12
_DIRECT_MAX_N = 10**6


def _check(n: int, x: float | None = None) -> None:
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    if x is not None and not 0.0 <= x <= 1.0:
        raise ValidationError(f"x must lie in [0, 1], got {x}")


@dataclass(frozen=True)
class XStrategy:
    """Wait until time ``x``, then take the first record (if any)."""

    x: float

    def __post_init__(self):
        if not 0.0 <= self.x <= 1.0:
            raise ValidationError(f"x must lie in [0, 1], got {self.x}")

    def label(self) -> str:
        return f"x={self.x!r}"


def limiting_success(x: float) -> float:
    """``-x log x``, the n -> infinity limit of ``p_n(x)`` (0 at x = 0)."""
    if not 0.0 <= x <= 1.0:
        raise ValidationError(f"x must lie in [0, 1], got {x}")
    return 0.0 if x == 0.0 else -x * math.log(x)


def _tail_series(y: float, start: int, weight) -> float:
    # sum_{k >= start} y^k * weight(k), stopped once terms are negligible
    if y == 0.0:
        return 0.0
    total = 0.0
    chunk = 256
    k0 = start
    log_y = math.log(y)
    while True:
        k = np.arange(k0, k0 + chunk, dtype=float)
        terms = np.exp(k * log_y) * weight(k)
        total += math.fsum(terms)
        if terms[-1] <= 1e-18 * total or terms[-1] == 0.0:
            return total
        k0 += chunk


def excess_over_limit(n: int, x: float) -> float:
    """``p_n(x) - (-x log x) = sum_{k>n} (1-x)^k/(k(k-1))`` (always >= 0)."""
    _check(n, x)
    if x == 1.0:
        return 0.0
    if x == 0.0:
        return 1.0 / n
    return _tail_series(1.0 - x, n + 1, lambda k: 1.0 / (k * (k - 1.0)))


def success_probabilities(n_max: int, x: float) -> np.ndarray:
    """``[p_1(x), ..., p_{n_max}(x)]``; nonincreasing entry by entry, also in floating point."""
    _check(n_max, x)
    if x == 0.0:
        return 1.0 / np.arange(1, n_max + 1)
    if x == 1.0:
        return np.zeros(n_max)
    y = 1.0 - x
    m = np.arange(1, n_max, dtype=float)
    decrements = np.exp((m + 1.0) * math.log(y)) / (m * (m + 1.0))
    return np.concatenate([[y], y - np.cumsum(decrements)])


def success_probability(n: int, x: float) -> float:
    """``p_n(x)``: success probability of the x-strategy given ``N = n``."""
    _check(n, x)
    if x == 0.0:
        return 1.0 / n
    if x == 1.0:
        return 0.0
    if n > _DIRECT_MAX_N:
        return limiting_success(x) + excess_over_limit(n, x)
    return float(success_probabilities(n, x)[-1])


def no_selection_probability(n: int, x: float) -> float:
    """The x-strategy selects nobody iff the overall best arrives before ``x``."""
    _check(n, x)
    return x


def _record_sum(n: int, x: float) -> float:
    # sum_{k=1}^{n-1} (1-x)^k / k, forward accumulation of powers
    y = 1.0 - x
    k = np.arange(1, n, dtype=float)
    return math.fsum(np.power(y, k) / k)


def _bisect_threshold(n: int, xtol: float = THRESHOLD_XTOL) -> float:
    return bisect_first_true(lambda x: _record_sum(n, x) <= 1.0, 0.0, 1.0, xtol)


def optimal_wait_threshold(n: int) -> float:
    """``x_n``: root of ``sum_{k=1}^{n-1} (1-x)^k/k = 1`` (``x_1 = x_2 = 0``).

    Returned as ``1/e - threshold_gap(n)``, so the values never exceed ``1/e``
    and never decrease in n; from n of about 70 on they round to ``1/e``.
    """
    _check(n)
    if n <= 2:
        return 0.0
    return INV_E - threshold_gap(n)


def threshold_gap(n: int) -> float:
    """``1/e - x_n`` to full relative precision, also where ``x_n`` rounds to ``1/e``.

    For n >= 3 the threshold satisfies ``x = exp(-1 - tail_n(1 - x))`` with
    ``tail_n(y) = sum_{k>=n} y^k/k``; the fixed point is a contraction and the
    gap follows as ``-expm1(-tail)/e``.
    """
    _check(n)
    if n <= 2:
        return INV_E
    x = _bisect_threshold(n)
    gap = INV_E - x
    for _ in range(500):
        tail = _tail_series(1.0 - x, n, lambda k: 1.0 / k)
        new_gap = -math.expm1(-tail) * INV_E
        x = INV_E * math.exp(-tail)
        if abs(new_gap - gap) <= 1e-15 * new_gap:
            return new_gap
        gap = new_gap
    return gap


def optimal_excess(n: int) -> float:
    """``p_n(x_n) - 1/e``, accurate where both terms agree to many digits.

    At the optimum the record sum equals 1, so ``p_n(x_n) = x_n + (1-x_n)^n/n``
    and the excess is ``(1-x_n)^n/n - (1/e - x_n)``, with ``1 - x_n`` rebuilt
    from the gap rather than from the rounded threshold.
    """
    _check(n)
    if n == 1:
        return 1.0 - INV_E
    gap = threshold_gap(n)
    y = (1.0 - INV_E) + gap
    return math.exp(n * math.log(y)) / n - gap


def optimal_success(n: int) -> float:
    """``p_n(x_n)``, the best success probability among x-strategies given ``N = n``."""
    _check(n)
    if n == 1:
        return 1.0
    return INV_E + optimal_excess(n)


def log10_margin_over_inv_e(n: int) -> float:
    """``log10(p_n(1/e) - 1/e)``; the margin is positive for every finite n.

    With ``y = 1 - 1/e`` the margin equals
    ``y^n * (1/e) * sum_{j>=1} y^j * j / (n (n + j))``, all terms positive.
    """
    _check(n)
    y = 1.0 - INV_E
    inner = _tail_series(y, 1, lambda j: j / (n * (n + j)))
    return (n * math.log(y) + math.log(INV_E * inner)) / math.log(10.0)


def margin_over_inv_e(n: int) -> float:
    """``p_n(1/e) - 1/e`` (underflows to 0.0 beyond n of a few hundred)."""
    return 10.0 ** log10_margin_over_inv_e(n)


def threshold_table(n_max: int) -> list[dict]:
    """Rows ``(n, x_n, p_n(x_n), p_n(1/e))`` for n = 1..n_max."""
    _check(n_max)
    at_inv_e = success_probabilities(n_max, INV_E)
    return [
        {
            "n": n,
            "x_n": optimal_wait_threshold(n),
            "p_n_x_n": optimal_success(n),
            "p_n_inv_e": float(at_inv_e[n - 1]),
        }
        for n in range(1, n_max + 1)
    ]
