import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from mbo import (
    AlgorithmParams,
    DivergenceError,
    InvalidArgument,
    State,
    ct_flow,
    ct_flow_many,
    dt_iterate,
    dt_step,
    heavy_ball_params,
    heavy_ball_step,
    make_builtin,
    make_quadratic,
    non_potential_force,
    parse_selector,
    split_step,
)
import oracles

Q1 = make_quadratic([1.0])


def test_fnp_examples():
    z = State([0.7], [0.4])
    assert np.array_equal(non_potential_force(Q1, z, AlgorithmParams(1, 0.3, 0.0)), -2 * 0.3 * z.p)
    assert np.all(non_potential_force(Q1, State([0.7], [0.0]), AlgorithmParams(1, 0.3, 0.2)) == 0)
    np.testing.assert_allclose(non_potential_force(Q1, z, AlgorithmParams(1, 0.3, 0.2)), -(0.6 + 0.2) * z.p,
                               rtol=0, atol=1e-15)


def test_params_validation():
    for bad in [dict(T=0), dict(d=0), dict(beta=-0.1)]:
        with pytest.raises(InvalidArgument):
            AlgorithmParams(**bad)
    with pytest.raises(InvalidArgument):
        State([1.0, 2.0], [0.0])


def test_ct_flow_zero_horizon():
    tr = ct_flow(Q1, AlgorithmParams(), State([1.0], [0.0]), 0.0)
    assert len(tr) == 1 and tr.final == State([1.0], [0.0])


def test_ct_flow_conservative_oscillator():
    tr = ct_flow(Q1, AlgorithmParams(d=1e-300), State([1.0], [0.0]), 10.0, dt=0.01)
    assert abs(tr.energies[-1] - 0.5) < 1e-8
    assert tr.times[-1] == 10.0


def test_ct_flow_critical_damping():
    tr = ct_flow(Q1, AlgorithmParams(d=1.0), State([1.0], [0.0]), 10.0, dt=1e-3)
    exact = (1 + tr.times) * np.exp(-tr.times)
    assert np.max(np.abs(tr.q[:, 0] - exact)) < 1e-6


def test_ct_flow_last_step_shortened():
    tr = ct_flow(Q1, AlgorithmParams(d=1.0), State([1.0], [0.0]), 0.105, dt=0.01)
    assert tr.times[-1] == 0.105 and np.all(np.diff(tr.times) > 0)


def test_ct_flow_many_matches_single():
    f = make_builtin("double_well")
    starts = [State([0.3], [0.1]), State([-0.2], [0.0])]
    many = ct_flow_many(f, AlgorithmParams(d=0.5), starts, 5.0, dt=0.01)
    for z, tr in zip(starts, many):
        single = ct_flow(f, AlgorithmParams(d=0.5), z, 5.0, dt=0.01)
        np.testing.assert_allclose(tr.q, single.q, rtol=0, atol=1e-14)


def test_dt_step_examples():
    assert dt_step(Q1, AlgorithmParams(0.7, 0.2, 0.1), State([0.0], [0.0])) == State([0.0], [0.0])
    z1 = dt_step(Q1, AlgorithmParams(1.0, 0.5, 0.0), State([1.0], [0.0]))
    assert z1 == State([0.0], [-1.0])
    assert dt_step(Q1, AlgorithmParams(1.0, 0.5, 0.0), z1) == State([0.0], [0.0])
    z = dt_step(Q1, AlgorithmParams(0.5, 1e-300, 0.0), State([1.0], [0.0]))
    assert z == State([0.75], [-0.5])


def test_split_step_examples():
    p = AlgorithmParams(0.3, 0.4, 0.0)
    bar, _ = split_step(Q1, p, State([0.2], [1.0]))
    assert bar == State([0.2], [(1 - 2 * 0.4 * 0.3) * 1.0])
    bar, _ = split_step(Q1, AlgorithmParams(0.3, 0.4, 0.5), State([0.2], [0.0]))
    assert bar == State([0.2], [0.0])


@pytest.mark.parametrize("sel", ["quadratic:kappa=30,n=3", "double_well", "quartic_well:eps=0.5", "rosenbrock"])
def test_split_composition_bitwise(sel):
    f = parse_selector(sel)
    rng = np.random.default_rng(99)
    for _ in range(250):
        z = State(rng.normal(size=f.dimension), rng.normal(size=f.dimension))
        p = AlgorithmParams(rng.uniform(0.01, 1), rng.uniform(0.01, 2), rng.uniform(0, 1))
        assert split_step(f, p, z)[1] == dt_step(f, p, z)


def test_heavy_ball():
    assert heavy_ball_params(1.0, 4.0).d == 0.5
    assert heavy_ball_step(Q1, 1.0, 1.0, State([1.0], [0.0])) == State([0.0], [-1.0])
    f = parse_selector("quadratic:kappa=100,n=4")
    rng = np.random.default_rng(1)
    for _ in range(100):
        z = State(rng.normal(size=4), rng.normal(size=4))
        kappa = float(rng.uniform(1, 1e4))
        assert heavy_ball_step(f, 0.5, kappa, z) == dt_step(f, AlgorithmParams(0.5, 1 / math.sqrt(kappa), 0.0), z)
    with pytest.raises(InvalidArgument):
        heavy_ball_params(1.0, 0.5)


def test_dt_step_affine_on_quadratics():
    f = parse_selector("quadratic:kappa=10,n=3,seed=2")
    p = AlgorithmParams(0.4, 0.3, 0.2)
    rng = np.random.default_rng(5)
    zero = dt_step(f, p, State(np.zeros(3), np.zeros(3)))
    for _ in range(50):
        a = State(rng.normal(size=3), rng.normal(size=3))
        b = State(rng.normal(size=3), rng.normal(size=3))
        lhs = dt_step(f, p, State(a.q + b.q, a.p + b.p)).z
        rhs = dt_step(f, p, a).z + dt_step(f, p, b).z - zero.z
        assert np.max(np.abs(lhs - rhs)) < 1e-12


def test_energy_decreases_on_double_well():
    f = make_builtin("double_well")
    tr = ct_flow(f, AlgorithmParams(d=0.3, beta=0.2), State([0.6], [0.2]), 30.0, dt=0.01)
    assert np.max(np.diff(tr.energies)) <= 1e-9


def test_forward_euler_vs_symplectic():
    h, T, n = 1.0, 0.1, 100_000
    H_fe = oracles.forward_euler_conservative(h, T, 1.0, 0.0, 200)
    assert np.all(np.diff(H_fe) > 0)
    tr = dt_iterate(Q1, AlgorithmParams(T, 1e-300, 0.0), State([1.0], [0.0]), n)
    assert np.max(tr.energies) < 0.5 * (1 + T) ** 2 and np.min(tr.energies) > 0.5 * (1 - T) ** 2


def test_divergence_reports_index():
    with pytest.raises(DivergenceError) as exc:
        dt_iterate(Q1, AlgorithmParams(3.0, 0.01, 0.0), State([1.0], [0.0]), 10_000)
    assert exc.value.at is not None and exc.value.at > 0
    with pytest.raises(DivergenceError) as exc:
        ct_flow(make_builtin("quartic_well", {"eps": 1.0}), AlgorithmParams(d=0.1), State([50.0], [0.0]), 10, dt=0.5)
    assert exc.value.at > 0


def test_dt_iterate_schedule_and_csv(tmp_path):
    sched = [(0.5, 0.0), (0.25, 0.1), (0.1, 0.0)]
    tr = dt_iterate(Q1, AlgorithmParams(1.0), State([1.0], [0.0]), 3, schedule=sched)
    manual = State([1.0], [0.0])
    for d, b in sched:
        manual = dt_step(Q1, AlgorithmParams(1.0, d, b), manual)
    assert tr.final == manual
    path = tmp_path / "traj.csv"
    tr.write_csv(path)
    lines = path.read_text().splitlines()
    assert lines[0] == "t,q0,p0,H" and len(lines) == 5
    assert float(lines[2].split(",")[1]) == tr.q[1, 0]


@given(st.floats(0.01, 1.5), st.floats(0.01, 2), st.floats(0, 1), st.floats(-3, 3), st.floats(-3, 3))
def test_split_equals_step_property(T, d, beta, q, p):
    f = make_builtin("double_well")
    z = State([q], [p])
    params = AlgorithmParams(T, d, beta)
    assert split_step(f, params, z)[1] == dt_step(f, params, z)
