"""Answer the three provisioning questions from the exact spectrum.

1. How often must a controller reconfigure to catch surges above a threshold?
2. How much capacity headroom keeps the overflow-loss mass below a target?
3. How many independent channels fit on a shared link given that headroom?
"""
import numpy as np

from buzzld import (BUZZ_PARAMS, CapacityQuery, TimescaleQuery,
                    build_generator, capacity_margin, estimate_spectrum,
                    block_sums, legendre, max_servers, reactive_timescale,
                    sample, scgf, simulate)

gen = build_generator(BUZZ_PARAMS)
q = np.concatenate([-np.geomspace(3, 1e-4, 60), [0.0], np.geomspace(1e-4, 3, 60)])
spec = legendre(scgf(gen, q))
print(f"asymptotic mean rate: {spec.alpha_as:.4f}")

# 1: reconfiguration timescale, from empirical spectra at several scales.
trace = simulate(gen, horizon=200_000.0, seed=7)
series = sample(trace, dt=1.0)
q_emp = np.linspace(-2.0, 2.0, 81)
spectra = [estimate_spectrum(block_sums(series, tau), q_emp)
           for tau in (25.0, 50.0, 100.0, 200.0, 400.0)]
ans = reactive_timescale(spectra, TimescaleQuery(
    alpha_star=7.0, sigma_star=1e-4, tau_range=(25.0, 400.0)))
print(f"reconfigure at least every tau* = {ans.value:.1f}"
      f"{' (bracket-limited)' if ans.bracket_limited else ''}")

# 2: capacity safety margin above the mean.
query = CapacityQuery(p_loss=1e-3, buffer_q=5.0)
ans = capacity_margin(spec, spec.alpha_as, query)
print(f"safety margin C0 = {ans.value:.3f} (loss residual {ans.residual:.2e})")

# 3: how many channels a link of 40 units supports with that margin.
ans = max_servers(spec, spec.alpha_as, link_capacity=40.0, query=query)
print(f"max channels on a 40-unit link: K = {ans.value:.0f}")
