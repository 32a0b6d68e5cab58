"""Simulate an exact event-driven trace and sample it on a uniform grid.

The time average of the sampled activity converges to the stationary mean
as the horizon grows.
"""
from buzzld import (BUZZ_PARAMS, build_generator, sample, simulate,
                    steady_state)

gen = build_generator(BUZZ_PARAMS)
trace = simulate(gen, horizon=20_000.0, seed=7)
series = sample(trace, dt=1.0)

print(f"events: {len(trace)}")
print(f"time-average activity: {trace.time_average_i():.4f}")
print(f"fraction of time in surge phase: {trace.phase2_fraction():.4f}")

ss = steady_state(gen)
print(f"stationary mean (exact): {ss.mean_i:.4f}")
print(f"sampled series mean:     {series.values.mean():.4f}")
