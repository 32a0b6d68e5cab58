"""Multi-scale block estimation of the large-deviation spectrum from a trace.

At scale tau the series is chopped into non-overlapping blocks of length tau;
the empirical SCGF of the block integrals gives, for each tilt q, an adaptive
window center alpha = L_tau'(q) and half-width eps = sqrt(L_tau''(q)/tau), and
the spectrum value is the log-frequency of blocks whose mean lands in that
window, scaled by 1/tau.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import FormatError, InsufficientDataError, InvalidInputError
from .simulate import SampledSeries
from .spectrum_theory import DEFAULT_Q_GRID

MIN_BLOCKS = 10


@dataclass(frozen=True)
class BlockSums:
    """Block integrals of the observable at one scale (viewer-seconds each)."""
    tau: float
    sums: np.ndarray

    @property
    def k_tau(self) -> int:
        return self.sums.shape[0]


@dataclass(frozen=True)
class EmpiricalSpectrum:
    tau: float
    q: np.ndarray
    alpha: np.ndarray
    epsilon: np.ndarray
    f: np.ndarray

    @property
    def support(self) -> tuple[float, float]:
        return float(self.alpha.min()), float(self.alpha.max())

    def __len__(self):
        return self.q.shape[0]


def block_sums(series: SampledSeries, tau: float, skip: float = 0.0) -> BlockSums:
    """Rectangle-rule block integrals; the trailing partial block is dropped.

    `skip` discards an initial stretch of the series (burn-in) before blocking.
    """
    if tau < 2 * series.dt:
        raise InvalidInputError(f"tau must be >= 2*dt = {2 * series.dt}")
    values = series.values
    if skip > 0:
        values = values[int(np.ceil(skip / series.dt)):]
    duration = (values.shape[0] - 1) * series.dt
    k_tau = int(np.floor(duration / tau))
    if k_tau < MIN_BLOCKS:
        raise InsufficientDataError(
            f"only {k_tau} complete blocks at tau={tau}; need >= {MIN_BLOCKS} "
            f"(series duration >= {MIN_BLOCKS * tau})")
    # sample k belongs to block floor(k*dt/tau)
    block_of = np.floor(np.arange(values.shape[0]) * series.dt / tau).astype(int)
    sums = np.bincount(block_of, weights=values, minlength=k_tau + 1) * series.dt
    return BlockSums(tau=tau, sums=sums[:k_tau])


def empirical_scgf(blocks: BlockSums, q: float):
    """Empirical SCGF of the block sums at tilt q.

    Returns (L_tau(q), L_tau'(q), L_tau''(q)); the derivatives are the
    exponentially weighted mean and variance of the block sums, computed under
    a max-shift so large q*S never overflow.
    """
    if blocks.k_tau < MIN_BLOCKS:
        raise InsufficientDataError(f"need >= {MIN_BLOCKS} blocks")
    s = blocks.sums
    tau = blocks.tau
    z = q * s
    shift = z.max()
    w = np.exp(z - shift)
    wsum = w.sum()
    lam = (shift + np.log(wsum / s.shape[0])) / tau
    mean_s = float((s * w).sum() / wsum)
    var_s = float((((s - mean_s) ** 2) * w).sum() / wsum)
    return lam, mean_s / tau, var_s / tau


def estimate_spectrum(blocks: BlockSums, q_grid=DEFAULT_Q_GRID) -> EmpiricalSpectrum:
    """Per-scale spectrum estimate over a tilt grid.

    Tilts whose adaptive window [alpha - eps, alpha + eps] captures no block
    mean are omitted (their count ratio is 0).
    """
    q_grid = np.asarray(q_grid, dtype=float)
    tau = blocks.tau
    means = blocks.sums / tau
    out_q, out_alpha, out_eps, out_f = [], [], [], []
    for q in q_grid:
        _, alpha, d2 = empirical_scgf(blocks, q)
        eps = np.sqrt(max(d2, 0.0) / tau)
        count = int(np.count_nonzero(
            (means >= alpha - eps) & (means <= alpha + eps)))
        if count == 0:
            continue
        out_q.append(q)
        out_alpha.append(alpha)
        out_eps.append(eps)
        out_f.append(np.log(count / blocks.k_tau) / tau)
    if not out_q:
        raise InsufficientDataError(
            f"no tilt in the grid produced a nonempty window at tau={tau}")
    return EmpiricalSpectrum(tau=tau, q=np.asarray(out_q),
                             alpha=np.asarray(out_alpha),
                             epsilon=np.asarray(out_eps),
                             f=np.asarray(out_f))


def export_empirical_csv(spectra, path: str, header=()):
    """Write `tau,q,alpha,epsilon,f` rows for one or more scales."""
    with open(path, "w") as fh:
        for line in header:
            fh.write(f"# {line}\n")
        for spec in spectra:
            for k in range(len(spec)):
                fh.write(f"{float(spec.tau)!r},{float(spec.q[k])!r},"
                         f"{float(spec.alpha[k])!r},{float(spec.epsilon[k])!r},"
                         f"{float(spec.f[k])!r}\n")


def read_empirical_csv(path: str) -> list[EmpiricalSpectrum]:
    """Read a `tau,q,alpha,epsilon,f` CSV; one spectrum per distinct tau."""
    rows = []
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise FormatError(f"cannot read {path!r}: {exc}")
    for rowno, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = stripped.split(",")
        if len(parts) != 5:
            raise FormatError(f"{path}: expected tau,q,alpha,epsilon,f",
                              row=rowno)
        try:
            rows.append(tuple(float(p) for p in parts))
        except ValueError:
            raise FormatError(f"{path}: non-numeric field", row=rowno)
    if not rows:
        raise FormatError(f"{path}: no data rows")
    spectra = []
    for tau in sorted({r[0] for r in rows}):
        sel = [r for r in rows if r[0] == tau]
        spectra.append(EmpiricalSpectrum(
            tau=tau,
            q=np.asarray([r[1] for r in sel]),
            alpha=np.asarray([r[2] for r in sel]),
            epsilon=np.asarray([r[3] for r in sel]),
            f=np.asarray([r[4] for r in sel])))
    return spectra
