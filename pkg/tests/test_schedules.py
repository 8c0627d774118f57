import math

import numpy as np
import pytest
from scipy import integrate

from mbo import (
    DomainError,
    ScheduleCT,
    ScheduleInfeasible,
    ct_damping,
    ct_envelope,
    ct_fundamental,
    dt_fundamental,
    dt_roots,
    dt_schedule,
)
from mbo.schedules import dt_log_envelope
import oracles

FIG5 = ScheduleCT(1.0, 1.0 / math.sqrt(10.0))


def test_constant_schedule():
    s = ScheduleCT(0.3, 0.3)
    assert np.all(ct_damping(s, np.linspace(0, 100, 11)) == 0.3)
    assert math.isinf(s.C_d)


def test_initial_and_limit():
    assert abs(ct_damping(FIG5, 0.0) - 1.0) < 1e-12
    assert abs(ct_damping(FIG5, 60.0) - 1 / math.sqrt(10)) < 1e-12
    assert np.all(np.diff(ct_damping(FIG5, np.linspace(0, 30, 301))) < 0)


def test_rejections():
    with pytest.raises(DomainError):
        ScheduleCT(0.1, 0.3)
    with pytest.raises(DomainError):
        ct_damping(ScheduleCT(1.0, 0.3, t0=2.0), 1.0)


def test_riccati_ode():
    t = np.linspace(0.01, 50, 2000)
    eps = 1e-5
    ddot = (ct_damping(FIG5, t + eps) - ct_damping(FIG5, t - eps)) / (2 * eps)
    d = ct_damping(FIG5, t)
    assert np.max(np.abs(ddot + d**2 - FIG5.d_inf**2)) < 1e-8


def test_envelope_quadrature():
    for s in (FIG5, ScheduleCT(2.0, 0.05, t0=1.5)):
        for t in (s.t0, s.t0 + 0.5, s.t0 + 7.0, s.t0 + 40.0):
            ref = oracles.damping_integral_envelope(lambda x: ct_damping(s, x), s.t0, t)
            assert abs(ct_envelope(s, t) - ref) <= 1e-10 * max(ref, 1e-300) + 1e-15


def test_envelope_ratio_limit():
    assert ct_envelope(FIG5, 0.0) == 1.0
    lim = 2 * FIG5.d_inf / (FIG5.d_inf + FIG5.d0)
    assert abs(ct_envelope(FIG5, 80.0, with_exponential=False) - lim) < 1e-12


def test_small_d_inf_limit():
    s = ScheduleCT(1.0, 1e-4)
    t = np.linspace(0, 100, 1001)
    assert np.max(np.abs(ct_envelope(s, t) - 1 / (1 + t))) < 1e-4


def test_bounded_sublinear_envelope():
    t = np.linspace(0, 1e4, 200_001)
    for k in (1e2, 1e4, 1e6):
        s = ScheduleCT(1.0, 1 / math.sqrt(2 * k))
        assert np.max(ct_envelope(s, t) * (1 + t)) <= 2.5


def test_ct_fundamental_basic():
    assert ct_fundamental(FIG5, 0.5, 0.0) == (1.0, 1.0)
    slow, fast = ct_fundamental(FIG5, 0.5, 3.0)
    assert slow == fast
    slow, fast = ct_fundamental(FIG5, 0.01, 3.0)
    assert slow > fast
    with pytest.raises(DomainError):
        ct_fundamental(ScheduleCT(1.0, 0.5), 0.25, 1.0)


def test_ct_fundamental_fig6_oracle():
    kappa = 1e4
    d_inf = 1 / math.sqrt(2 * kappa)
    s = ScheduleCT(1.0, d_inf)
    for h in (1 / kappa, 1.0):
        ref = oracles.tv_oscillator_magnitude(lambda t: ct_damping(s, t), 1.0, d_inf, h, 10.0, dt=1e-3)
        assert abs(ct_fundamental(s, h, 10.0)[0] - ref) / ref < 1e-6


def test_ct_fundamental_real_regime_oracle():
    s = ScheduleCT(1.5, 0.6)
    h = 0.1  # d_inf^2 = 0.36 > h: two real exponents
    ref = oracles.tv_oscillator_magnitude(lambda t: ct_damping(s, t), 1.5, 0.6, h, 8.0, dt=1e-3)
    assert abs(ct_fundamental(s, h, 8.0)[0] - ref) / ref < 1e-8


def test_dt_schedule_examples():
    s = dt_schedule(0.5, 1.0, 1 / math.sqrt(200), 300)
    assert s.beta_seq[0] == 0.0
    assert np.all(np.abs(s.beta_seq - 0.5 * (1 - 2 * s.d_seq * 0.5)) < 1e-12)
    assert np.all(np.diff(s.d_seq) < 0) and abs(s.d_seq[200] - s.d_inf) < 1e-3
    c = dt_schedule(0.5, 0.3, 0.3, 20)
    assert np.allclose(c.beta_seq, 0.5 * (1 - 2 * 0.3 * 0.5), rtol=0, atol=1e-12)


def test_dt_schedule_errors():
    with pytest.raises(DomainError):
        dt_schedule(0.5, 2.0, 0.1, 10)
    with pytest.raises(DomainError):
        dt_schedule(0.5, 1.0, 0.1, 0) if False else dt_schedule(1.0, 1.0, 0.1, 10)
    assert issubclass(ScheduleInfeasible, ValueError)


def test_dt_converges_to_ct():
    errs = []
    for T in (0.1, 0.01, 0.001):
        s = dt_schedule(T, 1.0, 0.2, int(round(10 / T)) + 1)
        ts = np.linspace(0, 10, 41)
        dk = s.d_seq[np.floor(ts / T + 1e-9).astype(int)]
        errs.append(np.max(np.abs(dk - ct_damping(ScheduleCT(1.0, 0.2), ts))))
    assert errs[0] > errs[1] > errs[2]


def test_dt_fundamental_basic():
    s = dt_schedule(0.5, 1.0, 0.1, 50)
    assert dt_fundamental(s, 0.3, 5, k0=5) == (1.0, 1.0)
    with pytest.raises(DomainError):
        dt_fundamental(s, 4.0, 3)
    # double root: (1 - h T^2) = alpha
    h = (1 - s.alpha_rec) / s.T**2
    m1, m2 = dt_fundamental(s, h, 10)
    assert abs(m1 - m2) < 1e-12 * m1
    r1, r2 = dt_roots(s, 0.001)
    assert r1.imag == 0 and r1.real > r2.real


def test_dt_log_envelope_long_horizon():
    s = dt_schedule(0.5, 1.0, 0.5, 20_000)
    m = dt_fundamental(s, 1.0, np.array([0, 1, 19_000]))[0]
    assert m[0] == 1.0 and m[2] == 0.0 or m[2] < 1e-300
    assert np.isfinite(dt_log_envelope(s, [19_000])[0])


def test_dt_fundamental_real_roots_oracle():
    # real-root regime, slow mode; iterate the scheme from a matched state at k0 + 1
    T, kappa = 0.5, 1e4
    s = dt_schedule(T, 1.0, 0.3, 400)
    h = 1 / kappa
    a = 1 - h * T * T
    assert a * a - s.alpha_rec * a > 0
    r = a + math.sqrt(a * a - s.alpha_rec * a)
    q1, q2 = r, r * r * (1 - s.d_seq[1] * T)
    p2 = (q2 - q1) / T
    p1 = (p2 + T * h * q1) / (1 - 2 * s.d_seq[1] * T - s.beta_seq[1] * h * T)
    ref = np.abs(oracles.dt_scheduled_linear(T, h, s.d_seq, s.beta_seq, q1, p1, 1, 300))
    got = dt_fundamental(s, h, np.arange(1, 301))[0]
    assert np.max(np.abs(got - ref) / ref) < 1e-9
