"""Provisioning solvers driven by a large-deviation spectrum.

Three questions: the largest reconfiguration period tau* that still sees
overflows with probability >= sigma*; the capacity safety margin C0 above the
almost-sure workload meeting an SLA loss probability; and the number K of
identical servers a fixed link can host given that margin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InfeasibleQueryError, InvalidInputError
from .spectrum_theory import Spectrum

_QUAD_CELLS = 2000


@dataclass(frozen=True)
class TimescaleQuery:
    alpha_star: float          # deviation threshold (viewers)
    sigma_star: float          # acceptable overflow probability
    tau_range: tuple[float, float]

    def __post_init__(self):
        if not (0 < self.sigma_star < 1):
            raise InvalidInputError("sigma_star must be in (0, 1)")
        if self.tau_range[0] >= self.tau_range[1]:
            raise InvalidInputError("tau_range must satisfy tau_lo < tau_hi")


@dataclass(frozen=True)
class CapacityQuery:
    p_loss: float              # tolerated loss probability
    buffer_q: float = 0.0      # buffer size Q (viewer-seconds)
    tau_max: float = math.inf  # maximum reservation period

    def __post_init__(self):
        if not (0 < self.p_loss < 1):
            raise InvalidInputError("p_loss must be in (0, 1)")
        if self.buffer_q < 0:
            raise InvalidInputError("buffer_q must be >= 0")
        if self.tau_max <= 0:
            raise InvalidInputError("tau_max must be > 0")


@dataclass(frozen=True)
class ProvisionAnswer:
    kind: str                  # "tau_star" | "c0" | "servers"
    value: float
    residual: float            # achieved left-hand side of the inequality
    inputs: dict = field(default_factory=dict)
    bracket_limited: bool = False


def overflow_probability(spec, alpha_star: float, tau: float) -> float:
    """P{ mean workload over tau >= alpha_star } by trapezoid quadrature.

    Integrates exp(tau*f(alpha)) over the spectrum's alpha grid above
    alpha_star; f is -inf outside the support, so the tail beyond the grid
    contributes nothing.
    """
    alpha = np.asarray(spec.alpha, dtype=float)
    f = np.asarray(spec.f, dtype=float)
    order = np.argsort(alpha, kind="stable")
    alpha, f = alpha[order], f[order]
    hi = float(alpha[-1])
    if alpha_star >= hi:
        return 0.0
    if alpha_star > alpha[0]:
        f_star = float(np.interp(alpha_star, alpha, f))
        keep = alpha > alpha_star
        alpha = np.concatenate(([alpha_star], alpha[keep]))
        f = np.concatenate(([f_star], f[keep]))
    return float(np.trapezoid(np.exp(tau * f), alpha))


def reactive_timescale(spectra, query: TimescaleQuery) -> ProvisionAnswer:
    """Largest scale whose overflow probability still reaches sigma*.

    The grid answer is refined by log-linear interpolation of P(tau) between
    the bracketing scales (the overflow mass decays exponentially in tau).
    """
    spectra = sorted(spectra, key=lambda s: s.tau)
    taus = [s.tau for s in spectra]
    if len(spectra) < 3:
        raise InvalidInputError("need spectra at >= 3 scales")
    if taus[0] > query.tau_range[0] or taus[-1] < query.tau_range[1]:
        raise InvalidInputError(
            f"spectra scales {taus} do not span tau_range {query.tau_range}")
    probs = [overflow_probability(s, query.alpha_star, s.tau) for s in spectra]
    inputs = {"alpha_star": query.alpha_star, "sigma_star": query.sigma_star,
              "taus": taus}
    if probs[0] < query.sigma_star:
        raise InfeasibleQueryError(
            f"no feasible timescale: P={probs[0]:.3e} < sigma*="
            f"{query.sigma_star} already at tau={taus[0]}")
    if probs[-1] >= query.sigma_star:
        return ProvisionAnswer(kind="tau_star", value=query.tau_range[1],
                               residual=probs[-1], inputs=inputs,
                               bracket_limited=True)
    k = max(j for j in range(len(taus)) if probs[j] >= query.sigma_star)
    # log P is interpolated linearly in tau between the bracketing scales
    lp0, lp1 = math.log(probs[k]), math.log(max(probs[k + 1], 1e-300))
    frac = (math.log(query.sigma_star) - lp0) / (lp1 - lp0)
    tau_star = taus[k] + frac * (taus[k + 1] - taus[k])
    tau_star = min(max(tau_star, query.tau_range[0]), query.tau_range[1])
    return ProvisionAnswer(kind="tau_star", value=tau_star,
                           residual=query.sigma_star, inputs=inputs)


def _upper_branch(spec: Spectrum, alpha_as: float):
    alpha = np.asarray(spec.alpha, dtype=float)
    f = np.asarray(spec.f, dtype=float)
    order = np.argsort(alpha, kind="stable")
    alpha, f = alpha[order], f[order]
    keep = alpha >= alpha_as
    if not np.any(keep):
        raise InvalidInputError("spectrum has no support above alpha_as")
    alpha, f = alpha[keep], f[keep]
    interior = alpha > alpha_as + 1e-9 * max(1.0, alpha_as)
    if np.any(f[interior] >= 0):
        raise InvalidInputError(
            "spectrum must satisfy f < 0 strictly above the apex")
    return alpha, f


def loss_rate(spec: Spectrum, alpha_as: float, capacity: float,
              query: CapacityQuery, n_cells: int = _QUAD_CELLS) -> float:
    """Overflow-loss mass L(C) above a provisioned capacity C.

    Composite midpoint rule (open at both ends, so the alpha -> C singular
    endpoint is never evaluated); f interpolated linearly on the spectrum's
    upper branch. With an unbounded reservation period the integrand is
    (-1/f) * exp(Q*f/(alpha - C)); with a finite one it is
    (exp(tau_max*f) - exp(tau_min*f)) / f with tau_min = Q/(alpha - C).
    """
    alpha, f = _upper_branch(spec, alpha_as)
    alpha_sup = float(alpha[-1])
    if capacity >= alpha_sup:
        return 0.0
    h = (alpha_sup - capacity) / n_cells
    mids = capacity + (np.arange(n_cells) + 0.5) * h
    fm = np.interp(mids, alpha, f)
    fm = np.minimum(fm, -1e-300)
    tau_min = query.buffer_q / (mids - capacity)
    if math.isinf(query.tau_max):
        vals = (-1.0 / fm) * np.exp(tau_min * fm)
    else:
        vals = (np.exp(query.tau_max * fm) - np.exp(tau_min * fm)) / fm
    return float(vals.sum() * h)


def capacity_margin(spec: Spectrum, alpha_as: float,
                    query: CapacityQuery, n_cells: int = _QUAD_CELLS,
                    rel_tol: float = 1e-6) -> ProvisionAnswer:
    """Smallest safety margin C0 = C - alpha_as with L(C) <= p_loss.

    L is decreasing in C, so plain bisection on [alpha_as, alpha_sup].
    """
    alpha, _ = _upper_branch(spec, alpha_as)
    alpha_sup = float(alpha[-1])
    lo, hi = alpha_as, alpha_sup
    if loss_rate(spec, alpha_as, hi, query, n_cells) > query.p_loss:
        raise InfeasibleQueryError(
            "even full-support capacity exceeds p_loss (malformed spectrum)")
    span = hi - lo
    while hi - lo > rel_tol * span:
        mid = 0.5 * (lo + hi)
        if loss_rate(spec, alpha_as, mid, query, n_cells) <= query.p_loss:
            hi = mid
        else:
            lo = mid
    residual = loss_rate(spec, alpha_as, hi, query, n_cells)
    return ProvisionAnswer(
        kind="c0", value=hi - alpha_as, residual=residual,
        inputs={"p_loss": query.p_loss, "buffer_q": query.buffer_q,
                "tau_max": query.tau_max, "alpha_as": alpha_as})


def max_servers(spec: Spectrum, alpha_as: float, link_capacity: float,
                query: CapacityQuery) -> ProvisionAnswer:
    """Largest K with link_capacity - K*alpha_as >= C0 (headroom >= margin)."""
    if link_capacity <= alpha_as:
        raise InvalidInputError("link_capacity must exceed alpha_as")
    c0 = capacity_margin(spec, alpha_as, query)
    k = math.floor((link_capacity - c0.value) / alpha_as + 1e-9)
    k = max(k, 0)
    return ProvisionAnswer(
        kind="servers", value=float(k),
        residual=link_capacity - k * alpha_as,
        inputs={**c0.inputs, "link_capacity": link_capacity, "c0": c0.value})
