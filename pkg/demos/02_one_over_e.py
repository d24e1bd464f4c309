# %% [markdown]
# # Waiting until 1/e
#
# N options arrive at i.i.d. uniform times on [0, 1]. An x-strategy lets
# everything before time x pass and then takes the first record. We compare
# the closed form p_n(x) with simulation, and the 1/e-strategy with the best
# x for each n.

# %%
import math

from oddstop import best_choice as bc
from oddstop.monte_carlo import SimulationConfig, XStrategy, simulate

for n in (1, 2, 5, 10, 100):
    r = simulate(SimulationConfig(200_000, 7, n, XStrategy(bc.INV_E)))
    print(f"n={n:4d}  closed {bc.success_probability(n, bc.INV_E):.5f}  mc {r.estimate:.5f} +- {r.std_error:.5f}"
          f"  no pick {r.no_pick_rate:.4f}")

# %% [markdown]
# The 1/e-strategy never falls below 1/e. The margin shrinks
# geometrically, so it is tracked on a log scale.

# %%
for n in (1, 10, 100, 1000, 10_000):
    print(n, f"log10(p_n(1/e) - 1/e) = {bc.log10_margin_over_inv_e(n):.2f}")

# %% [markdown]
# The optimal wait x_n climbs toward 1/e from below. The gap 1/e - x_n is
# computed directly since x_n itself rounds to 1/e long before n = 200.

# %%
for row in bc.threshold_table(8):
    print(row)
for n in (10, 50, 100, 200):
    print(n, "1/e - x_n =", bc.threshold_gap(n), " p_n(x_n) - 1/e =", bc.optimal_excess(n))
print("x_3 vs 2 - sqrt(3):", bc.optimal_wait_threshold(3), 2 - math.sqrt(3))
