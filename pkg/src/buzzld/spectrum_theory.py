"""Theoretical large-deviation spectrum of the workload chain.

The scaled cumulant generating function L(q) is the principal (Perron)
eigenvalue of the tilted matrix T(q) = A + q*diag(phi). Uniformization
M = I + T(q)/c with c above the maximum shifted exit rate makes M
elementwise nonnegative with positive diagonal, so its largest-modulus
eigenvalue is the (simple) Perron root and L(q) = c*(rho(M) - 1). The root
is extracted with warm-started Arnoldi iteration; a uniformized power
iteration with Collatz-Wielandt bounds serves as fallback. The spectrum
follows by the parametric Legendre transform alpha = L'(q),
f = L(q) - q*L'(q), with L'(q) computed from the left/right Perron vectors.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import FormatError, InvalidInputError, NumericalFailureError
from .model import Generator

DEFAULT_Q_GRID = np.linspace(-3.0, 3.0, 201)

_MASK_FLOOR = 1e-280   # ignore eigenvector entries that underflowed


@dataclass(frozen=True)
class ScgfCurve:
    q: np.ndarray
    lam: np.ndarray     # L(q)
    dlam: np.ndarray    # L'(q)

    def __len__(self):
        return self.q.shape[0]


@dataclass(frozen=True)
class Spectrum:
    alpha: np.ndarray
    f: np.ndarray          # <= 0, apex at 0
    alpha_as: float        # apex location (alpha at q = 0)
    kind: str = "theoretical"
    tau: float | None = None
    q: np.ndarray | None = None

    @property
    def support(self) -> tuple[float, float]:
        return float(self.alpha.min()), float(self.alpha.max())


def _perron_power(T: sp.csr_matrix, c: float, x0: np.ndarray,
                  tol: float = 1e-10, max_iter: int = 10**5):
    """Perron eigenvalue/vector of I + T/c by power iteration.

    Returns (eigenvalue of T, eigenvector). Convergence is declared when the
    Collatz-Wielandt enclosure of the eigenvalue is narrower than
    tol * max(1, |estimate|) on the T scale.
    """
    x = np.abs(x0)
    x /= x.max()
    lam = 0.0
    check_every = 8
    for it in range(max_iter):
        y = x + (T @ x) / c
        if it % check_every == 0:
            mask = x > _MASK_FLOOR
            ratios = y[mask] / x[mask]
            lo, hi = ratios.min(), ratios.max()
            lam = c * (0.5 * (lo + hi) - 1.0)
            if c * (hi - lo) <= tol * max(1.0, abs(lam)):
                return lam, y / y.max()
        x = y / y.max()
    raise NumericalFailureError(
        f"Perron power iteration did not converge (c={c})")


def _perron(T: sp.csr_matrix, c: float, x0: np.ndarray,
            tol: float = 1e-10, max_iter: int = 10**5):
    """Principal eigenpair of the tilted matrix T.

    Warm-started Arnoldi on the uniformized M = I + T/c (its Perron root is
    the largest-modulus eigenvalue, so the Krylov solve targets exactly the
    eigenvalue uniformization isolates); falls back to plain power iteration
    if Arnoldi fails to converge.
    """
    n = T.shape[0]
    if n < 24:
        w, v = np.linalg.eig(T.toarray())
        k = int(np.argmax(w.real))
        vec = np.abs(v[:, k].real)
        return float(w[k].real), vec / vec.max()
    M = sp.identity(n, format="csr") + T / c
    try:
        vals, vecs = spla.eigs(M, k=1, which="LM", v0=np.abs(x0),
                               tol=1e-13, maxiter=max_iter)
    except spla.ArpackNoConvergence:
        return _perron_power(T, c, x0, tol, max_iter)
    vec = vecs[:, 0].real
    if vec.sum() < 0:
        vec = -vec
    vec = np.maximum(vec, 0.0)
    return float(c * (vals[0].real - 1.0)), vec / vec.max()


def scgf(gen: Generator, q_grid=DEFAULT_Q_GRID) -> ScgfCurve:
    """SCGF of the observable i over a sorted grid of tilt parameters."""
    q_grid = np.asarray(q_grid, dtype=float)
    if q_grid.ndim != 1 or len(q_grid) == 0 or np.any(np.diff(q_grid) <= 0):
        raise InvalidInputError("q_grid must be a nonempty sorted 1-D grid")
    A = gen.rates
    phi = gen.phi.astype(float)
    diag0 = A.diagonal()
    max_exit = float(-diag0.min())
    At = sp.csr_matrix(A.T)

    lam = np.empty_like(q_grid)
    dlam = np.empty_like(q_grid)
    # sweep outward from the q closest to 0 so warm starts stay close
    order = np.argsort(np.abs(q_grid), kind="stable")
    start = int(order[0])
    n = gen.n_states
    right_seed = {start: np.ones(n)}
    left_seed = {start: np.ones(n)}
    for k in order:
        k = int(k)
        q = q_grid[k]
        c = 1.1 * (max_exit + abs(q) * gen.params.i_max)
        T = A.copy()
        T.setdiag(diag0 + q * phi)
        Tt = At.copy()
        Tt.setdiag(diag0 + q * phi)
        xr = right_seed.get(k, np.ones(n))
        xl = left_seed.get(k, np.ones(n))
        lam_r, vr = _perron(T, c, xr)
        lam_l, vl = _perron(Tt, c, xl)
        lam[k] = 0.5 * (lam_r + lam_l)
        weight = vl @ vr
        dlam[k] = float((vl * phi) @ vr) / weight
        # seed both neighbours; the outward sweep consumes only the outer one
        for nb in (k - 1, k + 1):
            if 0 <= nb < len(q_grid) and nb not in right_seed:
                right_seed[nb] = vr
                left_seed[nb] = vl
    return ScgfCurve(q=q_grid, lam=lam, dlam=dlam)


def legendre(curve: ScgfCurve) -> Spectrum:
    """Parametric Legendre transform of a convex SCGF curve.

    Emits (alpha, f) = (L'(q), L(q) - q*L'(q)); f is nonpositive with its
    apex f = 0 at q = 0 where alpha equals the almost-sure workload.
    """
    if len(curve) < 3:
        raise InvalidInputError("need at least 3 SCGF points")
    if np.any(np.diff(curve.dlam) < -1e-6):
        raise InvalidInputError("SCGF curve is not convex")
    alpha = curve.dlam
    f = curve.lam - curve.q * curve.dlam
    order = np.argsort(alpha, kind="stable")
    alpha, f, q = alpha[order], f[order], curve.q[order]
    # collapse duplicate alphas (degenerate/constant observable)
    keep = np.concatenate(([True], np.diff(alpha) > 1e-12))
    alpha, f, q = alpha[keep], f[keep], q[keep]
    alpha_as = float(np.interp(0.0, curve.q, curve.dlam))
    return Spectrum(alpha=alpha, f=f, alpha_as=alpha_as,
                    kind="theoretical", tau=None, q=q)


def deviation_probability(spec: Spectrum, alpha: float, tau: float) -> float:
    """P{ mean workload over a window tau is near alpha } ~ exp(tau*f(alpha))."""
    lo, hi = spec.support
    if alpha < lo or alpha > hi:
        return 0.0
    f = float(np.interp(alpha, spec.alpha, spec.f))
    return float(np.exp(tau * f))


def export_spectrum_csv(curve: ScgfCurve, spec: Spectrum, path: str, header=()):
    """Write `q,lambda,alpha,f` rows in q order."""
    lam_by_q = {float(q): float(lam) for q, lam in zip(curve.q, curve.lam)}
    order = np.argsort(spec.q, kind="stable")
    with open(path, "w") as fh:
        for line in header:
            fh.write(f"# {line}\n")
        for k in order:
            q = float(spec.q[k])
            fh.write(f"{q!r},{lam_by_q[q]!r},"
                     f"{float(spec.alpha[k])!r},{float(spec.f[k])!r}\n")


def read_spectrum_csv(path: str) -> Spectrum:
    """Read a theoretical `q,lambda,alpha,f` spectrum CSV."""
    qs, alphas, fs = [], [], []
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
        if len(parts) != 4:
            raise FormatError(f"{path}: expected q,lambda,alpha,f", row=rowno)
        try:
            q, _, a, f = (float(p) for p in parts)
        except ValueError:
            raise FormatError(f"{path}: non-numeric field", row=rowno)
        qs.append(q)
        alphas.append(a)
        fs.append(f)
    if not qs:
        raise FormatError(f"{path}: no data rows")
    qs = np.asarray(qs)
    alphas = np.asarray(alphas)
    fs = np.asarray(fs)
    order = np.argsort(alphas, kind="stable")
    alpha_as = float(alphas[np.argmin(np.abs(qs))])
    return Spectrum(alpha=alphas[order], f=fs[order], alpha_as=alpha_as,
                    kind="theoretical", q=qs[order])
