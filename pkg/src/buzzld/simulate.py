"""Exact stochastic simulation of the workload chain and trace handling."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import FormatError, InvalidModelError
from .model import Generator

_CHUNK = 1 << 16


class _UniformStream:
    """Seeded stream of uniforms drawn in chunks; PCG64 for portability."""

    def __init__(self, seed: int):
        self._rng = np.random.Generator(np.random.PCG64(seed))
        self._buf = self._rng.random(_CHUNK)
        self._pos = 0

    def next(self) -> float:
        if self._pos == self._buf.shape[0]:
            self._buf = self._rng.random(_CHUNK)
            self._pos = 0
        u = self._buf[self._pos]
        self._pos += 1
        return u


@dataclass(frozen=True)
class Trace:
    """Event path of the chain: state columns indexed in lockstep with times."""
    times: np.ndarray      # strictly increasing, times[0] == 0
    i: np.ndarray
    r: np.ndarray
    phase: np.ndarray
    horizon: float

    def __len__(self):
        return self.times.shape[0]

    def time_average_i(self) -> float:
        """Time average of the observable over [0, horizon]."""
        bounds = np.append(self.times, self.horizon)
        return float(np.sum(np.diff(bounds) * self.i) / self.horizon)

    def phase2_fraction(self) -> float:
        bounds = np.append(self.times, self.horizon)
        return float(np.sum(np.diff(bounds) * (self.phase == 2)) / self.horizon)

    def integral_i(self) -> float:
        bounds = np.append(self.times, self.horizon)
        return float(np.sum(np.diff(bounds) * self.i))


@dataclass(frozen=True)
class SampledSeries:
    """Uniformly sampled workload: values[k] is the observable held at k*dt."""
    dt: float
    values: np.ndarray

    def __len__(self):
        return self.values.shape[0]

    @property
    def duration(self) -> float:
        return (len(self) - 1) * self.dt

    @property
    def times(self) -> np.ndarray:
        return np.arange(len(self)) * self.dt


def simulate(gen: Generator, horizon: float, seed: int,
             initial: tuple[int, int, int] | None = None) -> Trace:
    """Exact event-driven sample path of the chain.

    Holding time in state s is Exponential(-A[s][s]) (inverse-transform
    variates), the jump target is drawn proportionally to the off-diagonal
    rates. Deterministic given (seed, gen, initial, horizon).
    """
    if horizon < 0:
        raise InvalidModelError("horizon must be >= 0")
    if initial is None:
        initial = (0, 0, 1)
    s = gen.state_index(*initial)

    A = gen.rates
    exit_rate = -A.diagonal()
    if np.any(exit_rate <= 0):
        raise InvalidModelError("chain has an absorbing state (zero exit rate)")

    # strip the diagonal, keep CSR structure for fast row scans
    off = A.copy().tolil()
    off.setdiag(0)
    off = off.tocsr()
    off.eliminate_zeros()
    indptr = off.indptr
    targets = off.indices
    # per-row cumulative probabilities
    cum = off.data.copy()
    for row in range(off.shape[0]):
        lo, hi = indptr[row], indptr[row + 1]
        cum[lo:hi] = np.cumsum(cum[lo:hi]) / exit_rate[row]

    stream = _UniformStream(seed)
    times = [0.0]
    states = [s]
    t = 0.0
    while True:
        u = stream.next()
        t += -math.log(1.0 - u) / exit_rate[s]
        if t > horizon:
            break
        u2 = stream.next()
        j = indptr[s]
        hi = indptr[s + 1]
        while j < hi - 1 and u2 > cum[j]:
            j += 1
        s = targets[j]
        times.append(t)
        states.append(s)

    idx = np.asarray(states, dtype=np.int64)
    i, r, phase = _decode(gen, idx)
    return Trace(times=np.asarray(times), i=i, r=r, phase=phase, horizon=horizon)


def _decode(gen: Generator, idx: np.ndarray):
    p = gen.params
    per_phase = (p.i_max + 1) * (p.r_max + 1)
    phase = idx // per_phase + 1
    rem = idx % per_phase
    i, r = np.divmod(rem, p.r_max + 1)
    return i, r, phase


def sample(trace: Trace, dt: float) -> SampledSeries:
    """Piecewise-constant left interpolation of the event trace."""
    if dt <= 0:
        raise InvalidModelError("dt must be > 0")
    n = math.floor(trace.horizon / dt) + 1
    sample_times = np.arange(n) * dt
    pos = np.searchsorted(trace.times, sample_times, side="right") - 1
    return SampledSeries(dt=dt, values=trace.i[pos].astype(float))


def export_trace_csv(trace: Trace, path: str, header=()):
    with open(path, "w") as fh:
        for line in header:
            fh.write(f"# {line}\n")
        for t, i, r, phase in zip(trace.times, trace.i, trace.r, trace.phase):
            fh.write(f"{float(t)!r},{i},{r},{phase}\n")


def export_series_csv(series: SampledSeries, path: str, header=()):
    with open(path, "w") as fh:
        for line in header:
            fh.write(f"# {line}\n")
        for t, v in zip(series.times, series.values):
            fh.write(f"{float(t)!r},{float(v)!r}\n")


def ingest_csv(path: str) -> SampledSeries:
    """Read a two-column `t,value` CSV with a constant positive step.

    Lines starting with `#` are comments. The step is inferred from the first
    two data rows; later deviations are rejected with the offending row number.
    """
    times, values = [], []
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
        if len(parts) != 2:
            raise FormatError(f"{path}: expected two columns", row=rowno)
        try:
            t, v = float(parts[0]), float(parts[1])
        except ValueError:
            raise FormatError(f"{path}: non-numeric field", row=rowno)
        if v < 0:
            raise FormatError(f"{path}: negative value {v}", row=rowno)
        times.append((rowno, t))
        values.append(v)
    if len(values) == 0:
        raise FormatError(f"{path}: no data rows")
    if len(values) == 1:
        return SampledSeries(dt=1.0, values=np.asarray(values))
    dt = times[1][1] - times[0][1]
    if dt <= 0:
        raise FormatError(f"{path}: non-increasing time step", row=times[1][0])
    for k in range(1, len(times)):
        rowno, t = times[k]
        if abs(t - (times[0][1] + k * dt)) > 1e-9 * max(1.0, abs(t)):
            raise FormatError(f"{path}: non-uniform time step", row=rowno)
    return SampledSeries(dt=dt, values=np.asarray(values))
