"""Brute-force reference computations.

Everything here is deliberately naive (full enumeration over outcomes,
policies or permutations) and shares no code with the fast paths it checks.
"""
from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Sequence

import numpy as np


def outcome_matrix(n: int) -> np.ndarray:
    """All 2^n Bernoulli outcome vectors as rows of a 0/1 matrix."""
    codes = np.arange(1 << n, dtype=np.int64)
    return ((codes[:, None] >> np.arange(n)) & 1).astype(bool)


def outcome_probabilities(p: Sequence[float], X: np.ndarray) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    return np.prod(np.where(X, p, 1.0 - p), axis=1)


def enumerate_win_probability(p: Sequence[float], from_index: int) -> float:
    """P(first success at index >= from_index is also the last success), by enumeration."""
    n = len(p)
    X = outcome_matrix(n)
    probs = outcome_probabilities(p, X)
    k0 = from_index - 1
    after = X[:, k0:]
    has = after.any(axis=1)
    # wins iff exactly one success at/after k0 (the one we stop on is then the last)
    win = has & (after.sum(axis=1) == 1)
    return float(math.fsum(probs[win]))


def stop_set_values(p: Sequence[float]) -> tuple[np.ndarray, np.ndarray]:
    """Value of every deterministic index policy "stop on the first success whose index is in S".

    With independent successes, history beyond "no stop yet" carries no
    information, so these 2^n stop-sets exhaust the non-randomized policies.
    Returns (masks, values) with masks[i, j] = index j+1 in S.
    """
    n = len(p)
    p = np.asarray(p, dtype=float)
    q = 1.0 - p
    S = outcome_matrix(n)
    # none_after[j] = prod_{i>j} q_i
    none_after = np.append(np.cumprod(q[::-1])[::-1][1:], 1.0)
    # probability of reaching j without having stopped: prod over i<j, i in S of q_i
    qS = np.where(S, q, 1.0)
    reach = np.hstack([np.ones((S.shape[0], 1)), np.cumprod(qS, axis=1)[:, :-1]])
    values = np.sum(np.where(S, reach * p * none_after, 0.0), axis=1)
    return S, values


def dp_optimal_value(p: Sequence[float]) -> float:
    """Backward induction over all history-dependent rules (independent successes)."""
    v_continue = 0.0
    none_after = 1.0
    for pj in reversed(list(p)):
        v_stop_here = none_after
        v_continue = pj * max(v_stop_here, v_continue) + (1.0 - pj) * v_continue
        none_after *= 1.0 - pj
    return v_continue


def exact_odds(p: Sequence[Fraction]) -> list[Fraction]:
    return [Fraction(x) / (1 - Fraction(x)) for x in p]


def record_indicator_counts(n: int) -> np.ndarray:
    """Over all n! rank orders, how many make arrival k a record (k = 1..n)."""
    counts = np.zeros(n, dtype=np.int64)
    for perm in itertools.permutations(range(1, n + 1)):
        best = n + 1
        for k, r in enumerate(perm):
            if r < best:
                counts[k] += 1
                best = r
    return counts


def records_among_last(k: int, J: int) -> Fraction:
    """Expected number of records among arrivals k+1..k+J, averaged over all (k+J)! orders."""
    n = k + J
    if J == 0:
        return Fraction(0)
    total = 0
    count = 0
    for perm in itertools.permutations(range(n)):
        best = n
        for i, r in enumerate(perm):
            if r < best:
                best = r
                if i >= k:
                    total += 1
        count += 1
    return Fraction(total, count)


def index_rule_success_exact(n: int, cutoff: int) -> Fraction:
    """Exact success probability of "skip cutoff-1, take the next relative best" over all n! orders."""
    wins = 0
    for perm in itertools.permutations(range(1, n + 1)):
        best_seen = min(perm[: cutoff - 1], default=n + 1)
        for r in perm[cutoff - 1:]:
            if r < best_seen:
                wins += r == 1
                break
    return Fraction(wins, math.factorial(n))
