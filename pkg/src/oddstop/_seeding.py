"""Counter-based seeding for block-parallel Monte Carlo.

Trials are grouped into fixed-size blocks. Block ``b`` of a run with master
seed ``s`` always draws from ``SeedSequence(s, spawn_key=(b,))``, so the
output of a run depends on (seed, trials) only and never on how blocks are
scheduled across workers.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, TypeVar

import numpy as np

BLOCK_SIZE = 1 << 16

T = TypeVar("T")


def block_rng(master_seed: int, block: int) -> np.random.Generator:
    seq = np.random.SeedSequence(int(master_seed), spawn_key=(int(block),))
    return np.random.Generator(np.random.PCG64(seq))


def block_sizes(trials: int, block_size: int = BLOCK_SIZE) -> list[int]:
    if trials < 1:
        raise ValueError("trials must be >= 1")
    full, rest = divmod(trials, block_size)
    return [block_size] * full + ([rest] if rest else [])


def run_blocks(
    fn: Callable[[np.random.Generator, int], T],
    trials: int,
    master_seed: int,
    workers: int = 1,
    block_size: int = BLOCK_SIZE,
) -> list[T]:
    """Evaluate ``fn(rng, size)`` on every block; results come back in block order."""
    sizes = block_sizes(trials, block_size)

    def job(b: int) -> T:
        return fn(block_rng(master_seed, b), sizes[b])

    if workers <= 1 or len(sizes) == 1:
        return [job(b) for b in range(len(sizes))]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(job, range(len(sizes))))


def binomial_se(p_hat: float, trials: int) -> float:
    return float(np.sqrt(max(p_hat * (1.0 - p_hat), 0.0) / trials))
