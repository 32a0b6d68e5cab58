import subprocess

import pytest

PARAMS = """\
beta1 = 0.1
beta2 = 0.4
gamma = 0.7
mu = 0.3
l = 1.0
a1 = 0.05
a2 = 0.5
i_max = 8
r_max = 8
"""


def buzzld(*args):
    proc = subprocess.run(["buzzld", *map(str, args)],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    return proc


@pytest.fixture(scope="session")
def corpus(tmp_path_factory):
    """Real buzzld CSV outputs for a small model, via its command line."""
    root = tmp_path_factory.mktemp("corpus")
    conf = root / "model.conf"
    conf.write_text(PARAMS)
    buzzld("simulate", "--params", conf, "--horizon", "4000", "--seed", "4",
           "--out", root)
    buzzld("steady-state", "--params", conf, "--out", root / "marginal.csv")
    calm = root / "calm.conf"
    calm.write_text(PARAMS.replace("beta2 = 0.4", "beta2 = 0.1")
                          .replace("a1 = 0.05", "a1 = 0")
                          .replace("a2 = 0.5", "a2 = 0"))
    buzzld("steady-state", "--params", calm, "--out", root / "marginal_calm.csv")
    buzzld("spectrum-theory", "--params", conf, "--q-min", "-2",
           "--q-max", "2", "--q-points", "41", "--out", root / "theory.csv")
    buzzld("spectrum-empirical", "--series", root / "series.csv",
           "--tau", "25", "--tau", "50", "--tau", "100",
           "--q-min", "-2", "--q-max", "2", "--q-points", "41",
           "--out", root / "empirical.csv")
    buzzld("provision-capacity", "--spectrum", root / "theory.csv",
           "--p-loss", "1e-3", "--buffer", "5",
           "--out", root / "c0.csv")
    buzzld("provision-servers", "--spectrum", root / "theory.csv",
           "--p-loss", "1e-3", "--buffer", "5", "--link-capacity", "30",
           "--out", root / "servers.csv")
    return root
