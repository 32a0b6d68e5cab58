"""Acceptance suite: one test per release criterion, each printing a
PASS line with the measured quantities when it succeeds."""

import hashlib
import math
import time
from pathlib import Path

import numpy as np
import pytest

import buzzld as b
from buzzld.cli import main as cli_main
from buzzld.provision import loss_rate

from _helpers import (TAUS, log_q_grid, support_width, two_state_params,
                      two_state_scgf_closed_form)


def _report(n, text):
    print(f"\nACCEPTANCE {n} PASS: {text}")


def test_criterion_1_generator_properties():
    rng = np.random.default_rng(100)
    t0 = time.monotonic()
    for k in range(200):
        degenerate = k % 5 == 0
        beta1 = rng.uniform(0.01, 1.0)
        params = b.ModelParams(
            beta1=beta1,
            beta2=beta1 if degenerate else beta1 + rng.uniform(0, 2.0),
            gamma=rng.uniform(0.1, 3.0), mu=rng.uniform(0.05, 2.0),
            l=rng.uniform(0.1, 3.0),
            a1=0.0 if degenerate else rng.uniform(0.001, 1.0),
            a2=0.0 if degenerate else rng.uniform(0.01, 1.0),
            i_max=int(rng.integers(1, 7)), r_max=int(rng.integers(0, 6)))
        gen = b.build_generator(params)
        A = gen.rates
        assert np.abs(np.asarray(A.sum(axis=1)).ravel()).max() <= 1e-12
        off = A.tolil()
        off.setdiag(0)
        assert off.tocsr().min() >= 0
        assert b.is_irreducible(gen)
    elapsed = time.monotonic() - t0
    assert elapsed < 10.0
    _report(1, f"200 randomized generators valid in {elapsed:.1f}s")


def test_criterion_2_steady_state(buzz_gen):
    t0 = time.monotonic()
    ss2 = b.steady_state(b.build_generator(two_state_params(gamma=3.0)))
    assert np.abs(ss2.pi - [0.75, 0.25]).max() <= 1e-10
    ssb = b.steady_state(buzz_gen)
    residual = np.abs(ssb.pi @ buzz_gen.rates).max()
    assert residual <= 1e-10
    elapsed = time.monotonic() - t0
    assert elapsed < 5.0
    _report(2, f"pi=(0.75,0.25) exact; 3782-state residual {residual:.1e} "
               f"in {elapsed:.1f}s")


def test_criterion_3_scgf(two_state_gen, buzz_gen, buzzfree_gen,
                          buzz_ss, buzzfree_ss):
    t0 = time.monotonic()
    curve_buzz = b.scgf(buzz_gen, np.linspace(-3, 3, 201))
    elapsed = time.monotonic() - t0
    assert elapsed < 60.0
    i0 = np.argmin(np.abs(curve_buzz.q))
    assert abs(curve_buzz.lam[i0]) <= 1e-9
    assert curve_buzz.dlam[i0] == pytest.approx(buzz_ss.mean_i, rel=1e-6)

    curve_free = b.scgf(buzzfree_gen, np.linspace(-3, 3, 201))
    i0f = np.argmin(np.abs(curve_free.q))
    assert abs(curve_free.lam[i0f]) <= 1e-9
    assert curve_free.dlam[i0f] == pytest.approx(buzzfree_ss.mean_i, rel=1e-6)

    curve2 = b.scgf(two_state_gen, np.array([0.0, 1.0, 2.0]))
    assert curve2.lam[1] == pytest.approx((-1 + math.sqrt(5)) / 2, abs=1e-8)
    _report(3, f"Lam(0)=0, Lam'(0)=mean_i (both models), 2-state closed form; "
               f"201-point grid in {elapsed:.1f}s")


def test_criterion_4_gartner_ellis_cross_check(mc_block_integrals):
    t0 = time.monotonic()
    tau = 50.0
    worst = 0.0
    for q in (-1.0, -0.5, 0.5, 1.0):
        z = q * mc_block_integrals
        shift = z.max()
        lam_mc = (shift + np.log(np.mean(np.exp(z - shift)))) / tau
        lam_th = float(two_state_scgf_closed_form(q))
        rel = abs(lam_mc / lam_th - 1)
        worst = max(worst, rel)
        assert rel <= 0.05
    elapsed = time.monotonic() - t0
    assert elapsed < 120.0
    _report(4, f"MC vs eigenvalue worst relative error {worst:.3f} (<= 5%)")


def test_criterion_5_theoretical_spectra(buzz_spectrum, buzzfree_spectrum):
    assert abs(buzz_spectrum.f.max()) <= 1e-6
    assert abs(buzzfree_spectrum.f.max()) <= 1e-6
    rel = abs(buzz_spectrum.alpha_as - buzzfree_spectrum.alpha_as) \
        / buzzfree_spectrum.alpha_as
    assert rel <= 0.15
    wb = support_width(buzz_spectrum, -0.1)
    wf = support_width(buzzfree_spectrum, -0.1)
    assert wb >= 1.5 * wf
    _report(5, f"apexes match within {100 * rel:.0f}%; support widths "
               f"buzz {wb:.1f} vs buzz-free {wf:.1f} (>= 1.5x)")


def test_criterion_6_estimator_behavior(buzz_gen, buzzfree_gen):
    t0 = time.monotonic()
    buzz_series = b.sample(b.simulate(buzz_gen, 1e5, seed=7), 1.0)
    free_series = b.sample(b.simulate(buzzfree_gen, 1e5, seed=11), 1.0)
    buzz_spec = {tau: b.estimate_spectrum(b.block_sums(buzz_series, tau))
                 for tau in TAUS}
    free_spec = {tau: b.estimate_spectrum(b.block_sums(free_series, tau))
                 for tau in TAUS}

    # (a) nesting of buzz supports with 5% endpoint slack
    for t1, t2 in zip(TAUS[:-1], TAUS[1:]):
        lo1, hi1 = buzz_spec[t1].support
        lo2, hi2 = buzz_spec[t2].support
        slack = 0.05 * (hi1 - lo1)
        assert lo2 >= lo1 - slack and hi2 <= hi1 + slack
    # (b) apex within 5% of the trace mean
    mean = buzz_series.values.mean()
    for spec in buzz_spec.values():
        assert spec.alpha[np.argmax(spec.f)] == pytest.approx(mean, rel=0.05)
    # buzz-free spectra superimpose within 0.02 where f >= -0.05
    worst = 0.0
    taus = list(TAUS)
    for a in range(len(taus)):
        for c in range(a + 1, len(taus)):
            s1, s2 = free_spec[taus[a]], free_spec[taus[c]]
            lo = max(s1.alpha.min(), s2.alpha.min())
            hi = min(s1.alpha.max(), s2.alpha.max())
            grid = np.linspace(lo, hi, 200)
            f1 = np.interp(grid, s1.alpha, s1.f)
            f2 = np.interp(grid, s2.alpha, s2.f)
            m = (f1 >= -0.05) & (f2 >= -0.05)
            if m.any():
                worst = max(worst, float(np.abs(f1[m] - f2[m]).max()))
    assert worst <= 0.02
    elapsed = time.monotonic() - t0
    assert elapsed < 300.0
    _report(6, f"nesting + apex hold; superimpose worst diff {worst:.3f} "
               f"(<= 0.02) in {elapsed:.0f}s")


def test_criterion_7_points_a_b(buzz_empirical):
    hi100 = buzz_empirical[100.0].support[1]
    hi400 = buzz_empirical[400.0].support[1]
    assert hi400 <= 0.75 * hi100
    _report(7, f"max observable alpha: tau=400 -> {hi400:.2f}, "
               f"tau=100 -> {hi100:.2f} (ratio {hi400 / hi100:.2f} <= 0.75)")


def test_criterion_8_provisioning(two_state_spectrum, buzz_empirical):
    t0 = time.monotonic()
    spec = two_state_spectrum
    alpha_as = spec.alpha_as
    # quadrature-refinement oracle
    query = b.CapacityQuery(p_loss=1e-3)
    for cap in (0.6, 0.75, 0.9):
        coarse = loss_rate(spec, alpha_as, cap, query, n_cells=2000)
        fine = loss_rate(spec, alpha_as, cap, query, n_cells=20000)
        assert coarse == pytest.approx(fine, rel=1e-4)
    # monotonicity over 50 randomized queries
    rng = np.random.default_rng(8)
    spectra = list(buzz_empirical.values())
    for _ in range(50):
        p1, p2 = sorted(rng.uniform(1e-5, 1e-1, size=2))
        q1, q2 = sorted(rng.uniform(0.0, 10.0, size=2))
        c_p1 = b.capacity_margin(spec, alpha_as,
                                 b.CapacityQuery(p_loss=p1, buffer_q=q1)).value
        c_p2 = b.capacity_margin(spec, alpha_as,
                                 b.CapacityQuery(p_loss=p2, buffer_q=q1)).value
        c_q2 = b.capacity_margin(spec, alpha_as,
                                 b.CapacityQuery(p_loss=p1, buffer_q=q2)).value
        assert c_p1 >= c_p2 - 1e-6
        assert c_p1 >= c_q2 - 1e-6

        s1, s2 = sorted(rng.uniform(1e-8, 1e-3, size=2))
        alpha_star = rng.uniform(3.5, 5.0)
        tq = dict(tau_range=(25.0, 400.0))

        def tau_star(a, s):
            try:
                return b.reactive_timescale(
                    spectra,
                    b.TimescaleQuery(alpha_star=a, sigma_star=s, **tq)).value
            except b.errors.InfeasibleQueryError:
                return 0.0

        assert tau_star(alpha_star, s1) >= tau_star(alpha_star, s2) - 1e-9

        link = rng.uniform(alpha_as * 1.5, alpha_as * 15)
        pq = b.CapacityQuery(p_loss=rng.uniform(1e-4, 1e-1))
        c0 = b.capacity_margin(spec, alpha_as, pq).value
        if link > alpha_as + c0:
            k = b.max_servers(spec, alpha_as, link, pq).value
            assert k == math.floor((link - c0) / alpha_as + 1e-9)
    elapsed = time.monotonic() - t0
    assert elapsed < 60.0
    _report(8, f"quadrature oracle 1e-4; monotonicity and K identity over "
               f"50 queries in {elapsed:.0f}s")


def test_criterion_9_cli_reproducibility(tmp_path):
    params = tmp_path / "model.conf"
    params.write_text(
        "beta1 = 0.1\nbeta2 = 0.4\ngamma = 0.7\nmu = 0.3\nl = 1.0\n"
        "a1 = 0.05\na2 = 0.5\ni_max = 8\nr_max = 8\n")

    def run_all(root):
        root.mkdir(exist_ok=True)
        sim = root / "sim"
        cli_main(["simulate", "--params", str(params), "--horizon", "5000",
                  "--seed", "4", "--out", str(sim)])
        cli_main(["steady-state", "--params", str(params),
                  "--out", str(root / "marginal.csv")])
        cli_main(["spectrum-theory", "--params", str(params),
                  "--q-points", "51", "--out", str(root / "theory.csv")])
        cli_main(["spectrum-empirical", "--series", str(sim / "series.csv"),
                  "--tau", "25", "--tau", "50", "--tau", "100",
                  "--out", str(root / "emp.csv")])
        cli_main(["provision-timescale", "--spectra", str(root / "emp.csv"),
                  "--alpha-star", "4", "--sigma-star", "0.01",
                  "--out", str(root / "tau.csv")])
        cli_main(["provision-capacity", "--spectrum", str(root / "theory.csv"),
                  "--p-loss", "1e-3", "--out", str(root / "cap.csv")])
        cli_main(["provision-servers", "--spectrum", str(root / "theory.csv"),
                  "--p-loss", "1e-3", "--link-capacity", "30",
                  "--out", str(root / "srv.csv")])
        return {p.relative_to(root): hashlib.sha256(Path(p).read_bytes()).hexdigest()
                for p in sorted(root.rglob("*.csv"))}

    # identical command lines and seeds: outputs must be byte-identical
    root = tmp_path / "run"
    d1 = run_all(root)
    d2 = run_all(root)
    assert d1 == d2
    assert len(d1) == 8
    _report(9, f"{len(d1)} CLI outputs byte-identical across reruns")
