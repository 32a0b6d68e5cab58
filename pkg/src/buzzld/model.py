"""Epidemic hidden-Markov workload model.

State (i, r, phase): i current viewers (the observable), r gossip-active past
viewers, phase the hidden dissemination regime (1 = quiet, 2 = buzz).
Transitions:
  arrival     (i,r,p) -> (i+1,r,p)   rate l + (i+r)*beta_p   (blocked at i_max)
  completion  (i,r,p) -> (i-1,r+1,p) rate gamma*i            (r saturates at r_max)
  forgetting  (i,r,p) -> (i,r-1,p)   rate mu*r
  phase flip  (i,r,1) <-> (i,r,2)    rates a1 / a2

When a1 = a2 = 0 (then beta1 must equal beta2) the hidden phase is frozen and
the chain is enumerated over phase 1 only.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from .errors import ConfigError, InvalidModelError, NumericalFailureError

PARAM_FIELDS = ("beta1", "beta2", "gamma", "mu", "l", "a1", "a2", "i_max", "r_max")


@dataclass(frozen=True)
class ModelParams:
    beta1: float
    beta2: float
    gamma: float
    mu: float
    l: float
    a1: float
    a2: float
    i_max: int
    r_max: int

    def __post_init__(self):
        for name in ("beta1", "beta2", "gamma", "mu", "l"):
            if getattr(self, name) <= 0:
                raise InvalidModelError(f"{name} must be strictly positive")
        if self.a1 < 0 or self.a2 < 0:
            raise InvalidModelError("a1, a2 must be nonnegative")
        if (self.a1 == 0) != (self.a2 == 0):
            raise InvalidModelError("a1 and a2 may only vanish together")
        if self.a1 == 0 and self.beta1 != self.beta2:
            raise InvalidModelError(
                "a1 = a2 = 0 requires beta1 = beta2 (single-phase model)")
        if self.beta2 < self.beta1:
            raise InvalidModelError("beta2 must be >= beta1")
        if int(self.i_max) != self.i_max or self.i_max < 1:
            raise InvalidModelError("i_max must be an integer >= 1")
        if int(self.r_max) != self.r_max or self.r_max < 0:
            raise InvalidModelError("r_max must be an integer >= 0")

    @property
    def n_phases(self) -> int:
        return 1 if self.a1 == 0 and self.a2 == 0 else 2

    def beta(self, phase: int) -> float:
        return self.beta1 if phase == 1 else self.beta2


# Fig. "buzz" and "buzz-free" reference parameter sets used throughout the
# tests and demos.
BUZZ_PARAMS = ModelParams(beta1=0.1, beta2=0.8, gamma=0.7, mu=0.3, l=1.0,
                          a1=0.006, a2=0.6, i_max=30, r_max=60)
BUZZFREE_PARAMS = ModelParams(beta1=0.1, beta2=0.1, gamma=0.7, mu=0.3, l=1.0,
                              a1=0.0, a2=0.0, i_max=30, r_max=60)


@dataclass(frozen=True)
class Generator:
    """Infinitesimal generator over the enumerated state space.

    Canonical index: idx = (phase-1)*(i_max+1)*(r_max+1) + i*(r_max+1) + r,
    phase-1 block first.
    """
    params: ModelParams
    rates: sp.csr_matrix

    @property
    def n_states(self) -> int:
        return self.rates.shape[0]

    @property
    def phi(self) -> np.ndarray:
        """Observable i per state index."""
        p = self.params
        per_phase = (p.i_max + 1) * (p.r_max + 1)
        idx = np.arange(self.n_states)
        return (idx % per_phase) // (p.r_max + 1)

    def state_index(self, i: int, r: int, phase: int) -> int:
        p = self.params
        if not (0 <= i <= p.i_max and 0 <= r <= p.r_max and 1 <= phase <= p.n_phases):
            raise InvalidModelError(f"state ({i},{r},{phase}) out of bounds")
        return (phase - 1) * (p.i_max + 1) * (p.r_max + 1) + i * (p.r_max + 1) + r

    def index_state(self, idx: int) -> tuple[int, int, int]:
        p = self.params
        per_phase = (p.i_max + 1) * (p.r_max + 1)
        phase, rem = divmod(idx, per_phase)
        i, r = divmod(rem, p.r_max + 1)
        return i, r, phase + 1


@dataclass(frozen=True)
class SteadyState:
    generator: Generator
    pi: np.ndarray
    mean_i: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "mean_i", float(self.pi @ self.generator.phi))


def build_generator(params: ModelParams) -> Generator:
    """Assemble the sparse rate matrix for the full (i, r, phase) chain."""
    rows, cols, vals = [], [], []
    per_phase = (params.i_max + 1) * (params.r_max + 1)
    n = params.n_phases * per_phase

    def idx(i, r, phase):
        return (phase - 1) * per_phase + i * (params.r_max + 1) + r

    for phase in range(1, params.n_phases + 1):
        beta = params.beta(phase)
        for i in range(params.i_max + 1):
            for r in range(params.r_max + 1):
                s = idx(i, r, phase)
                out = 0.0

                def add(target, rate):
                    nonlocal out
                    rows.append(s)
                    cols.append(target)
                    vals.append(rate)
                    out += rate

                if i < params.i_max:
                    add(idx(i + 1, r, phase), params.l + (i + r) * beta)
                if i > 0:
                    # completion; r saturates at r_max instead of blocking
                    add(idx(i - 1, min(r + 1, params.r_max), phase),
                        params.gamma * i)
                if r > 0:
                    add(idx(i, r - 1, phase), params.mu * r)
                if params.n_phases == 2:
                    flip_rate = params.a1 if phase == 1 else params.a2
                    add(idx(i, r, 3 - phase), flip_rate)
                rows.append(s)
                cols.append(s)
                vals.append(-out)

    rates = sp.coo_matrix((vals, (rows, cols)), shape=(n, n)).tocsr()
    rates.sum_duplicates()
    return Generator(params=params, rates=rates)


def is_irreducible(gen: Generator) -> bool:
    off = gen.rates.copy()
    off.setdiag(0)
    off.eliminate_zeros()
    n_comp, _ = connected_components(off, directed=True, connection="strong")
    return n_comp == 1


def steady_state(gen: Generator, tol: float = 1e-12,
                 max_iter: int = 10**6) -> SteadyState:
    """Solve pi A = 0 by the uniformized power method.

    Iterates pi <- pi (I + A/c) with c above the maximum exit rate; stops when
    the generator residual ||pi A||_inf drops below `tol`.
    """
    if not is_irreducible(gen):
        raise InvalidModelError("generator is reducible; no unique steady state")
    A = gen.rates
    n = gen.n_states
    c = 1.1 * float(-A.diagonal().min())
    At = sp.csr_matrix(A.T)

    pi = np.full(n, 1.0 / n)
    check_every = 16
    for it in range(max_iter):
        flow = At @ pi                       # = (pi A)^T
        pi = pi + flow / c
        pi /= pi.sum()
        if it % check_every == 0 and np.abs(flow).max() <= tol:
            break
    else:
        raise NumericalFailureError(
            f"steady-state power method did not reach tol={tol} "
            f"in {max_iter} iterations")
    pi = np.maximum(pi, 0.0)
    pi /= pi.sum()
    return SteadyState(generator=gen, pi=pi)


def marginal_i(ss: SteadyState) -> np.ndarray:
    """Marginal steady-state distribution of the viewer count i."""
    gen = ss.generator
    i_max = gen.params.i_max
    out = np.zeros(i_max + 1)
    np.add.at(out, gen.phi, ss.pi)
    return out


def load_params(path: str) -> ModelParams:
    """Read a flat `key = value` model config file."""
    values = {}
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read model config {path!r}: {exc}") from exc
    for lineno, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(f"{path}:{lineno}: expected `key = value`")
        key, _, raw = stripped.partition("=")
        key = key.strip()
        if key not in PARAM_FIELDS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
        try:
            values[key] = float(raw.strip())
        except ValueError:
            raise ConfigError(f"{path}:{lineno}: bad value for {key!r}")
    missing = [k for k in PARAM_FIELDS if k not in values]
    if missing:
        raise ConfigError(f"{path}: missing keys {missing}")
    values["i_max"] = int(values["i_max"])
    values["r_max"] = int(values["r_max"])
    return ModelParams(**values)


def export_generator_csv(gen: Generator, path: str, header=()):
    """Debug dump: one `row_index,col_index,rate` triplet per nonzero."""
    coo = gen.rates.tocoo()
    order = np.lexsort((coo.col, coo.row))
    with open(path, "w") as fh:
        for line in header:
            fh.write(f"# {line}\n")
        for k in order:
            fh.write(f"{coo.row[k]},{coo.col[k]},{float(coo.data[k])!r}\n")
