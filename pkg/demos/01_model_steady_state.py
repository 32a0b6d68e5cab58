"""Build the workload chain and inspect its stationary behaviour.

Two reference parameter sets are compared: one with rare, self-reinforcing
demand surges ("buzz") and a memoryless control with a matched long-run mean.
"""
import numpy as np

from buzzld import (BUZZ_PARAMS, BUZZFREE_PARAMS, build_generator,
                    marginal_i, steady_state)

for name, params in [("buzz", BUZZ_PARAMS), ("buzz-free", BUZZFREE_PARAMS)]:
    gen = build_generator(params)
    ss = steady_state(gen)
    marg = marginal_i(ss)
    print(f"{name}: {gen.rates.shape[0]} states, mean activity {ss.mean_i:.4f}")
    tail = float(marg[10:].sum())
    print(f"  P(activity >= 10) = {tail:.3e}")
    top = np.argsort(marg)[-3:][::-1]
    print(f"  most likely activity levels: {list(map(int, top))}")
