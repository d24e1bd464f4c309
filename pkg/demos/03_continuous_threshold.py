# %% [markdown]
# # Thresholds for an intensity
#
# For a Poisson-like stream of successes with intensity eta on [0, 1], stop
# on the first success after t* = inf{t >= T : integral_t^1 eta <= 1}. Cutting
# [T, 1] into m cells turns this into a discrete odds problem, and the
# discrete threshold lands within one cell of t*.

# %%
from oddstop import odds_engine as oe

cases = {
    "constant 2": (oe.IntensityFunction.constant(2.0), 0.0),
    "1/u": (oe.IntensityFunction.reciprocal((1e-6, 1.0)), 0.2),
    "ramp": (oe.IntensityFunction.piecewise_linear([(0.0, 0.0), (1.0, 4.0)]), 0.0),
}
for name, (eta, T) in cases.items():
    t_star = oe.continuous_threshold(eta, T)
    print(f"{name:10s} t* = {t_star:.10f}")
    for m in (10, 100, 1000):
        part = oe.partition_odds_sum(eta, T, m)
        print(f"   m={m:5d} odds sum {part.odds_sum:.6f} integral {part.integral:.6f}"
              f" squeeze {part.squeeze_holds()} discrete t {oe.discretized_threshold(eta, T, m):.4f}")
