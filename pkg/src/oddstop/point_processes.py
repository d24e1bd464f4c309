"""Arrivals, records, and the proportional-increments (p.i.) counting process.

The p.i. process is simulated as a pure-birth process with hazard ``N_t / t``:
from state ``k`` at time ``t`` the next jump ``S`` has survival
``P(S > s) = (t/s)^k`` and is drawn exactly as ``S = t * U^(-1/k)``. This is
one process satisfying ``E(N_{t+dt} - N_t | F_t) = N_t dt / t``; the
conditional-expectation description alone does not pin down a unique law.

Records are obtained from the counting process by inverse-proportional
thinning: the jump that raises the count to ``m`` is kept with probability
``1/m``. Seen from the pre-jump count ``k`` that is ``1/(k+1)``, which is
what makes the record intensity ``(N_u/u) * 1/(N_u + 1)``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from ._seeding import binomial_se, run_blocks
from .errors import ValidationError


@dataclass(frozen=True)
class ArrivalSample:
    """Sorted arrival times with the absolute rank (1 = best) of each arrival."""

    times: np.ndarray
    ranks: np.ndarray

    def __post_init__(self):
        n = len(self.times)
        if n < 1 or len(self.ranks) != n:
            raise ValidationError("times and ranks must be non-empty and of equal length")
        if np.any(np.diff(self.times) <= 0):
            raise ValidationError("arrival times must be strictly increasing")
        if not np.array_equal(np.sort(self.ranks), np.arange(1, n + 1)):
            raise ValidationError("ranks must be a permutation of 1..n")

    @property
    def n(self) -> int:
        return len(self.times)


@dataclass(frozen=True)
class PiProcessPath:
    """Jumps of a p.i. path observed from ``(seed_time, seed_count)`` up to ``horizon``.

    With ``seed_count == 1`` the path is born at ``seed_time`` and
    ``jump_times[0] == seed_time`` is that first arrival. For a conditional
    start ``seed_count = k > 1`` only the jumps after ``seed_time`` are listed.
    """

    seed_time: float
    jump_times: np.ndarray
    seed_count: int = 1
    horizon: float = 1.0

    @property
    def counts(self) -> np.ndarray:
        """Count right after each listed jump."""
        first = 1 if self.seed_count == 1 else self.seed_count + 1
        return np.arange(first, first + len(self.jump_times))

    def count_at(self, t: float) -> int:
        base = 0 if self.seed_count == 1 else self.seed_count
        if t < self.seed_time:
            raise ValidationError("path is not defined before its seed time")
        return base + int(np.searchsorted(self.jump_times, t, side="right"))


@dataclass(frozen=True)
class RecordMask:
    retained: np.ndarray

    @property
    def count(self) -> int:
        return int(self.retained.sum())


def sample_arrivals(n: int, rng: np.random.Generator) -> ArrivalSample:
    if n < 1:
        raise ValidationError("n must be >= 1 (with no options every strategy is optimal)")
    while True:
        times = np.sort(rng.random(n))
        if n == 1 or np.all(np.diff(times) > 0):
            break
    ranks = rng.permutation(n) + 1
    return ArrivalSample(times=times, ranks=ranks)


def record_flags(ranks: np.ndarray) -> np.ndarray:
    """Boolean record indicator per arrival (works row-wise on 2-D arrays)."""
    ranks = np.asarray(ranks)
    return ranks == np.minimum.accumulate(ranks, axis=-1)


def extract_records(sample: ArrivalSample) -> np.ndarray:
    """Times of the arrivals whose rank beats every earlier rank."""
    return sample.times[record_flags(sample.ranks)]


def simulate_pi_process(
    seed_time: float,
    rng: np.random.Generator,
    seed_count: int = 1,
    horizon: float = 1.0,
) -> PiProcessPath:
    if not 0.0 < seed_time < 1.0:
        raise ValidationError(f"seed time must lie in (0, 1), got {seed_time}")
    if seed_count < 1:
        raise ValidationError("seed_count must be >= 1")
    jumps = [seed_time] if seed_count == 1 else []
    t, k = seed_time, seed_count
    while True:
        t = t * rng.random() ** (-1.0 / k)
        if t > horizon:
            break
        jumps.append(t)
        k += 1
    return PiProcessPath(seed_time, np.asarray(jumps), seed_count, horizon)


def thin_records(path, rng: np.random.Generator) -> RecordMask:
    """Keep the jump raising the count to ``m`` with probability ``1/m``.

    Accepts a :class:`PiProcessPath` or an :class:`ArrivalSample` (whose
    arrivals are the jumps of ``N_t`` starting from 0). A jump to count 1,
    the first arrival, is always kept.
    """
    counts = path.counts if isinstance(path, PiProcessPath) else np.arange(1, path.n + 1)
    keep = rng.random(len(counts)) * counts < 1.0
    keep[counts == 1] = True
    return RecordMask(keep)


def expected_records_in_interval(k: int, J: int, exact: bool = False):
    """Expected records among ``J`` jumps that arrive on top of ``k`` earlier points.

    Only the counts matter, not where the jumps sit. ``exact=True`` returns a
    :class:`~fractions.Fraction`.
    """
    if k < 0 or J < 0:
        raise ValidationError("k and J must be >= 0")
    if exact:
        return sum((Fraction(1, k + j) for j in range(1, J + 1)), Fraction(0))
    return math.fsum(1.0 / (k + j) for j in range(1, J + 1))


def record_intensity(k: int, u: float) -> float:
    """Instantaneous record rate ``(k/u) / (k+1)`` given ``N_u = k``."""
    if k < 1:
        raise ValidationError("record intensity is defined once the process is born (k >= 1)")
    if not 0.0 < u <= 1.0:
        raise ValidationError(f"u must lie in (0, 1], got {u}")
    return (k / u) / (k + 1)


def integrated_record_intensity(k: int, t: float, s: float) -> float:
    """``∫_t^s record_intensity(k, u) du`` with the count frozen at ``k``."""
    return k / (k + 1) * math.log(s / t)


# ---------------------------------------------------------------------------
# vectorized batches


@dataclass
class PiBatch:
    """Per-path retained-record counts plus jump/retention tallies by pre-jump count."""

    records: np.ndarray
    jumps_by_precount: np.ndarray
    kept_by_precount: np.ndarray

    def merge(self, other: "PiBatch") -> "PiBatch":
        size = max(len(self.jumps_by_precount), len(other.jumps_by_precount))

        def pad(a):
            return np.pad(a, (0, size - len(a)))

        return PiBatch(
            np.concatenate([self.records, other.records]),
            pad(self.jumps_by_precount) + pad(other.jumps_by_precount),
            pad(self.kept_by_precount) + pad(other.kept_by_precount),
        )


def simulate_thinned_batch(
    seed_time: float,
    seed_count: int,
    paths: int,
    rng: np.random.Generator,
    horizon: float = 1.0,
    max_count: int | None = None,
) -> PiBatch:
    """Run ``paths`` thinned p.i. paths from ``N_{seed_time} = seed_count`` in lockstep.

    ``records`` counts retained jumps strictly after ``seed_time``. Paths are
    cut once their count reaches ``max_count`` (when given); tallies index the
    pre-jump count.
    """
    if not 0.0 < seed_time < horizon <= 1.0:
        raise ValidationError("need 0 < seed_time < horizon <= 1")
    t = np.full(paths, float(seed_time))
    idx = np.arange(paths)
    records = np.zeros(paths, dtype=np.int64)
    jumps_by = []
    kept_by = []
    k = seed_count
    while idx.size and (max_count is None or k < max_count):
        t = t * rng.random(idx.size) ** (-1.0 / k)
        alive = t <= horizon
        idx, t = idx[alive], t[alive]
        kept = rng.random(idx.size) * (k + 1) < 1.0
        records[idx[kept]] += 1
        jumps_by.append(idx.size)
        kept_by.append(int(kept.sum()))
        k += 1
    pad = [0] * seed_count
    return PiBatch(records, np.array(pad + jumps_by, dtype=np.int64), np.array(pad + kept_by, dtype=np.int64))


@dataclass(frozen=True)
class Estimate:
    mean: float
    std_error: float
    trials: int

    def to_dict(self) -> dict:
        return {"estimate": self.mean, "std_error": self.std_error, "trials": self.trials}


def expected_future_records(
    t: float,
    k: int,
    trials: int,
    seed: int = 0,
    workers: int = 1,
    horizon: float = 1.0,
) -> Estimate:
    """Monte Carlo ``E(R_horizon - R_t | N_t = k)`` over thinned p.i. paths."""
    if k < 1:
        raise ValidationError("k must be >= 1")
    batches = run_blocks(
        lambda rng, size: simulate_thinned_batch(t, k, size, rng, horizon=horizon).records,
        trials,
        seed,
        workers,
    )
    rec = np.concatenate(batches)
    return Estimate(float(rec.mean()), float(rec.std(ddof=1) / math.sqrt(trials)) if trials > 1 else math.inf, trials)


def exact_future_records(t: float, k: int) -> float:
    """Closed form of ``E(R_1 - R_t | N_t = k)`` for the pure-birth model.

    In log-time the process is a Yule process, so ``N_1`` given ``N_t = k`` is
    negative binomial: ``P(N_1 >= m)`` is the probability of at most ``k-1``
    successes in ``m-1`` trials with success probability ``t``. Records after
    ``t`` then number ``sum_{m>k} P(N_1 >= m) / m`` in expectation.
    """
    from scipy.stats import binom

    m = np.arange(k + 1, k + 1 + 200000)
    surv = binom.cdf(k - 1, m - 1, t)
    total = 0.0
    for start in range(0, len(m), 10000):
        part = surv[start:start + 10000] / m[start:start + 10000]
        total += math.fsum(part)
        if part[-1] < 1e-18:
            break
    return total


def retention_frequencies(batch: PiBatch) -> list[dict]:
    out = []
    for k, (j, r) in enumerate(zip(batch.jumps_by_precount, batch.kept_by_precount)):
        if j == 0:
            continue
        f = float(r / j)
        out.append({"pre_count": k, "jumps": int(j), "kept": int(r), "frequency": f, "std_error": binomial_se(f, int(j))})
    return out


def path_to_json(path: PiProcessPath, mask: RecordMask) -> str:
    return json.dumps(
        {
            "seed_time": path.seed_time,
            "jumps": path.jump_times.tolist(),
            "records": path.jump_times[mask.retained].tolist(),
        }
    )


def path_from_json(line: str) -> tuple[PiProcessPath, RecordMask]:
    d = json.loads(line)
    jumps = np.asarray(d["jumps"], dtype=float)
    records = set(d["records"])
    return PiProcessPath(float(d["seed_time"]), jumps), RecordMask(np.array([j in records for j in jumps], dtype=bool))


def iter_sample_rows(samples: Iterable[ArrivalSample]) -> Iterable[str]:
    for s in samples:
        yield json.dumps(
            {
                "seed_time": float(s.times[0]),
                "jumps": s.times.tolist(),
                "ranks": s.ranks.tolist(),
                "records": extract_records(s).tolist(),
            }
        )
