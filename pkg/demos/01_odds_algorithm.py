# %% [markdown]
# # Stopping on the last success
#
# Independent events with success probabilities p_1..p_n arrive one at a time.
# We want to stop on the last success. The rule: sum the odds r_k = p_k/(1-p_k)
# backwards and start accepting successes from the index where that sum
# first drops to 1 or below.

# %%
import numpy as np

from oddstop import odds_engine as oe, oracles

prob = oe.OddsProblem((0.1, 0.3, 0.2, 0.4, 0.25))
print("odds      ", np.round(oe.odds_of(prob), 4))
print("tail odds ", np.round(oe.tail_odds(prob), 4))
res = oe.solve(prob)
print(res)

# %% [markdown]
# Brute force over every stop-set (2^n of them) and every outcome confirms
# nothing beats the threshold rule.

# %%
_, values = oracles.stop_set_values(prob.p)
print("best stop-set value", values.max(), " threshold rule", res.win_probability)

# %% [markdown]
# Classical secretary problem: p_j = 1/j. For n = 4 the rule skips one
# candidate and wins with probability 11/24.

# %%
sec = oe.solve(oe.secretary_problem(4))
print(sec.s_prime, sec.win_probability, 11 / 24)

# %% [markdown]
# Ties. With p = (1/2, 1/2, 1/2) the tail sum from index 3 is exactly 1. The
# largest index with tail sum >= 1 is 3, the smallest k with tail sum after k
# <= 1 is 2. Both starting points win with probability 1/2.

# %%
tie = oe.OddsProblem((0.5, 0.5, 0.5))
r = oe.solve(tie)
print(r.s, r.s_prime, oe.win_probability(tie, r.s), oe.win_probability(tie, r.s_prime))

# %% [markdown]
# Delayed start: only the indices from a (random) delay w onward count.

# %%
print(oe.delayed_threshold(oe.DelayedOddsProblem(n=8, w=3, p_given_w=(0.2, 0.3, 0.1, 0.5, 0.3, 0.2))))
