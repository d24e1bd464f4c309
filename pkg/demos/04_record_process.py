# %% [markdown]
# # Records as a thinned counting process
#
# Arrival k is a record with probability 1/k, independently (all 8!
# orderings checked below). Seen as a counting process N_t with hazard N_t/t,
# the jump that lifts the count from k to k+1 is a record with probability
# 1/(k+1): retention is by the post-jump count, not the pre-jump count.

# %%
import math

from oddstop import oracles, point_processes as pp
from oddstop._seeding import block_rng

counts = oracles.record_indicator_counts(8)
print([int(c) * k / math.factorial(8) for k, c in enumerate(counts, start=1)])

batch = pp.simulate_thinned_batch(0.05, 1, 300_000, block_rng(3, 0), max_count=6)
for row in pp.retention_frequencies(batch):
    k = row["pre_count"]
    print(f"pre-count {k}: kept {row['frequency']:.4f}  1/(k+1) = {1 / (k + 1):.4f}  1/k = {1 / k:.4f}")

# %% [markdown]
# Expected records still to come after time t = 1/e given N_t = k, closed
# form against simulation. All stay below 1, rising with k.

# %%
t = math.exp(-1)
for k in (1, 10, 100):
    e = pp.expected_future_records(t, k, 100_000, seed=k)
    print(k, f"mc {e.mean:.4f} +- {e.std_error:.4f}  exact {pp.exact_future_records(t, k):.5f}")

# %% [markdown]
# Expected records among J jumps on top of k earlier points: sum 1/(k+j).

# %%
print(pp.expected_records_in_interval(3, 4, exact=True), oracles.records_among_last(3, 4))
path = pp.simulate_pi_process(0.3, block_rng(4, 0))
print(pp.path_to_json(path, pp.thin_records(path, block_rng(4, 1))))
