import numpy as np
import pytest

import buzzld as b
from buzzld.errors import FormatError
from buzzld.simulate import export_series_csv

from _helpers import two_state_params


def test_zero_horizon_single_event(two_state_gen):
    tr = b.simulate(two_state_gen, 0.0, seed=1, initial=(1, 0, 1))
    assert len(tr) == 1
    assert tr.times[0] == 0.0
    assert tr.i[0] == 1


def test_reproducible_traces(two_state_gen):
    t1 = b.simulate(two_state_gen, 500.0, seed=123)
    t2 = b.simulate(two_state_gen, 500.0, seed=123)
    np.testing.assert_array_equal(t1.times, t2.times)
    np.testing.assert_array_equal(t1.i, t2.i)
    t3 = b.simulate(two_state_gen, 500.0, seed=124)
    assert len(t3) != len(t1) or not np.array_equal(t3.times, t1.times)


def test_events_change_one_coordinate(buzz_gen):
    tr = b.simulate(buzz_gen, 300.0, seed=3)
    di = np.abs(np.diff(tr.i.astype(int)))
    dr = np.abs(np.diff(tr.r.astype(int)))
    dp = np.abs(np.diff(tr.phase.astype(int)))
    changed = (di > 0).astype(int) + (dr > 0).astype(int) + (dp > 0).astype(int)
    # completion moves i and r together; all other events touch one coordinate
    completion = (np.diff(tr.i.astype(int)) == -1)
    assert np.all(changed[~completion] == 1)
    assert np.all(di <= 1) and np.all(dr <= 1) and np.all(dp <= 1)
    assert np.all(np.diff(tr.times) > 0)
    assert tr.times[0] == 0.0 and tr.times[-1] <= tr.horizon


def test_bounds_respected(buzz_gen):
    tr = b.simulate(buzz_gen, 2000.0, seed=9)
    p = buzz_gen.params
    assert tr.i.min() >= 0 and tr.i.max() <= p.i_max
    assert tr.r.min() >= 0 and tr.r.max() <= p.r_max
    assert set(np.unique(tr.phase)) <= {1, 2}


def test_ergodic_two_state(two_state_gen):
    tr = b.simulate(two_state_gen, 1e5, seed=42)
    assert tr.time_average_i() == pytest.approx(0.5, abs=0.01)


def test_buzz_phase_occupancy():
    params = b.ModelParams(beta1=0.1, beta2=0.3, gamma=0.7, mu=0.3, l=1.0,
                           a1=0.05, a2=0.5, i_max=10, r_max=10)
    gen = b.build_generator(params)
    tr = b.simulate(gen, 3e4, seed=5)
    expect = params.a1 / (params.a1 + params.a2)
    assert tr.phase2_fraction() == pytest.approx(expect, rel=0.10)


def test_sample_constant_trace(two_state_gen):
    tr = b.simulate(two_state_gen, 0.0, seed=0, initial=(1, 0, 1))
    series = b.sample(tr, 0.5)
    assert np.all(series.values == 1.0)


def test_sample_interpolation_rule():
    # one jump at t=1.5 from i=0 to i=1, dt=1, horizon=3 -> (0, 0, 1, 1)
    tr = b.Trace(times=np.array([0.0, 1.5]), i=np.array([0, 1]),
                 r=np.array([0, 0]), phase=np.array([1, 1]), horizon=3.0)
    series = b.sample(tr, 1.0)
    np.testing.assert_array_equal(series.values, [0.0, 0.0, 1.0, 1.0])


def test_sample_mean_matches_steady_state(two_state_gen):
    ss = b.steady_state(two_state_gen)
    tr = b.simulate(two_state_gen, 1e5, seed=8)
    series = b.sample(tr, 0.5)
    assert series.values.mean() == pytest.approx(ss.mean_i, rel=0.02)


def test_ingest_csv_basic(tmp_path):
    path = tmp_path / "s.csv"
    path.write_text("0,5\n1,5\n2,7\n")
    series = b.ingest_csv(str(path))
    assert series.dt == 1.0
    np.testing.assert_array_equal(series.values, [5.0, 5.0, 7.0])


def test_ingest_csv_errors(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("")
    with pytest.raises(FormatError):
        b.ingest_csv(str(path))
    path.write_text("0,1\n1,2\n3,4\n")
    with pytest.raises(FormatError, match="row 3"):
        b.ingest_csv(str(path))
    path.write_text("0,1\n1,-2\n")
    with pytest.raises(FormatError, match="row 2"):
        b.ingest_csv(str(path))
    path.write_text("0,1\n1,x\n")
    with pytest.raises(FormatError, match="row 2"):
        b.ingest_csv(str(path))


def test_series_roundtrip(tmp_path, two_state_gen):
    tr = b.simulate(two_state_gen, 200.0, seed=17)
    series = b.sample(tr, 0.25)
    path = tmp_path / "series.csv"
    export_series_csv(series, str(path), header=("tool=test", "seed=17"))
    back = b.ingest_csv(str(path))
    assert back.dt == series.dt
    np.testing.assert_array_equal(back.values, series.values)
