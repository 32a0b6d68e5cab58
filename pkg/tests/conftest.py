import numpy as np
import pytest

import buzzld as b

from _helpers import TAUS, log_q_grid, two_state_params


@pytest.fixture(scope="session")
def two_state_gen():
    return b.build_generator(two_state_params())


@pytest.fixture(scope="session")
def buzz_gen():
    return b.build_generator(b.BUZZ_PARAMS)


@pytest.fixture(scope="session")
def buzzfree_gen():
    return b.build_generator(b.BUZZFREE_PARAMS)


@pytest.fixture(scope="session")
def buzz_ss(buzz_gen):
    return b.steady_state(buzz_gen)


@pytest.fixture(scope="session")
def buzzfree_ss(buzzfree_gen):
    return b.steady_state(buzzfree_gen)


@pytest.fixture(scope="session")
def buzz_spectrum(buzz_gen):
    return b.legendre(b.scgf(buzz_gen, log_q_grid()))


@pytest.fixture(scope="session")
def buzzfree_spectrum(buzzfree_gen):
    return b.legendre(b.scgf(buzzfree_gen, log_q_grid()))


@pytest.fixture(scope="session")
def buzz_series(buzz_gen):
    return b.sample(b.simulate(buzz_gen, 1e5, seed=7), 1.0)


@pytest.fixture(scope="session")
def buzzfree_series(buzzfree_gen):
    return b.sample(b.simulate(buzzfree_gen, 1e5, seed=11), 1.0)


@pytest.fixture(scope="session")
def buzz_empirical(buzz_series):
    return {tau: b.estimate_spectrum(b.block_sums(buzz_series, tau))
            for tau in TAUS}


@pytest.fixture(scope="session")
def buzzfree_empirical(buzzfree_series):
    return {tau: b.estimate_spectrum(b.block_sums(buzzfree_series, tau))
            for tau in TAUS}


@pytest.fixture(scope="session")
def mc_block_integrals(two_state_gen):
    """Path integrals of the observable over tau=50 windows, 1e4 replications."""
    return np.array([b.simulate(two_state_gen, 50.0, seed=1000 + k).integral_i()
                     for k in range(10_000)])


@pytest.fixture(scope="session")
def two_state_spectrum(two_state_gen):
    # wide dense grid so the [0, 1] support is finely resolved
    return b.legendre(b.scgf(two_state_gen, np.linspace(-8.0, 8.0, 641)))
