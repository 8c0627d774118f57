import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from mbo import (
    BUILTINS,
    InvalidArgument,
    UnsupportedOperation,
    check_gradient,
    curvature_bounds,
    log_uniform_spectrum,
    make_builtin,
    make_quadratic,
    parse_selector,
)

BUILTIN_SELECTORS = ["quadratic:kappa=100,n=5,seed=3", "double_well", "quartic_well:eps=1", "quartic_well:eps=0",
                     "rosenbrock"]


def test_scalar_quadratic():
    f = make_quadratic([1.0])
    assert f.value(np.array([1.0])) == 0.5
    assert f.gradient(np.array([1.0]))[0] == 1.0


def test_two_point_spectrum_bounds():
    c = curvature_bounds(make_quadratic([0.01, 1.0]))
    assert (c.mu, c.L, c.kappa, c.C_f, c.C_f_bar) == (0.01, 1.0, 100.0, 0.0, 1.0)
    assert c.convex


def test_kappa_one():
    assert curvature_bounds(make_quadratic([1.0])).kappa == 1.0


@pytest.mark.parametrize("bad", [[], [1.0, 0.0], [-1.0], [np.nan]])
def test_make_quadratic_rejects(bad):
    with pytest.raises(InvalidArgument):
        make_quadratic(bad)


def test_log_uniform_endpoints_pinned():
    spectrum = log_uniform_spectrum(1e4, n=10, seed=7)
    assert spectrum.min() == 1e-4 and spectrum.max() == 1.0 and len(spectrum) == 10
    c = curvature_bounds(make_quadratic(spectrum))
    assert c.mu == 1e-4 and c.L == 1.0
    assert np.array_equal(spectrum, log_uniform_spectrum(1e4, n=10, seed=7))


def test_double_well_metadata():
    f = make_builtin("double_well")
    assert f.critical_value_hat == 0.25
    assert math.isclose(f.value(np.array([1.0])), 0.25)
    c = curvature_bounds(f)
    assert c.mu == 2.0 and c.C_f == 1.0
    # f'' = 3(x-1)^2 - 1 by finite differences of the gradient
    xs = np.linspace(-0.5, 2.5, 31)
    fd = (f.gradient(xs[:, None] + 1e-6) - f.gradient(xs[:, None] - 1e-6))[:, 0] / 2e-6
    assert np.allclose(fd, 3 * (xs - 1) ** 2 - 1, atol=1e-6)
    assert fd.min() >= -1.0 - 1e-6


def test_quartic_degenerate():
    f = make_builtin("quartic_well", {"eps": 0.0})
    assert f.gradient(np.zeros(1))[0] == 0.0
    with pytest.raises(UnsupportedOperation):
        curvature_bounds(f)


def test_unknown_builtin():
    with pytest.raises(InvalidArgument):
        make_builtin("himmelblau")


@pytest.mark.parametrize("sel", BUILTIN_SELECTORS)
def test_minimizer_normalized(sel):
    f = parse_selector(sel)
    x0 = f.minimizer
    assert f.value(x0) == 0.0
    assert np.linalg.norm(f.gradient(x0)) < 1e-12


@pytest.mark.parametrize("sel", BUILTIN_SELECTORS)
def test_gradients_in_unit_ball(sel):
    f = parse_selector(sel)
    rng = np.random.default_rng(0)
    for _ in range(100):
        x = rng.normal(size=f.dimension)
        x *= rng.uniform() / np.linalg.norm(x)
        assert check_gradient(f, x, 1e-5) < 1e-6


def test_quadratic_gradient_is_matvec():
    f = parse_selector("quadratic:kappa=50,n=6,seed=1")
    x = np.linspace(-1, 1, 6)
    assert np.allclose(f.gradient(x), f.hessian_quadratic @ x, atol=1e-12, rtol=0)
    assert check_gradient(f, x, 1e-5) < 1e-9


def test_rosenbrock_fd_convergence():
    f = make_builtin("rosenbrock")
    x = np.array([0.3, 0.3])
    e1 = check_gradient(f, x, 1e-3)
    e2 = check_gradient(f, x, 5e-4)
    assert 3.0 < e1 / e2 < 5.0
    assert np.linalg.norm(f.gradient(np.zeros(2))) < 1e-10


def test_rosenbrock_local_curvature():
    c = curvature_bounds(make_builtin("rosenbrock"))
    # Hessian at the standard minimizer is [[802, -400], [-400, 200]]
    ev = np.linalg.eigvalsh(np.array([[802.0, -400.0], [-400.0, 200.0]]))
    assert math.isclose(c.mu, ev[0], rel_tol=1e-9) and math.isclose(c.L, ev[1], rel_tol=1e-9)
    assert c.C_f > 0


def test_selector_errors():
    with pytest.raises(InvalidArgument):
        parse_selector("quadratic:kappa")
    with pytest.raises(InvalidArgument):
        parse_selector("quadratic:kappa=abc")
    with pytest.raises(InvalidArgument):
        parse_selector("double_well:eps=1")
    assert set(BUILTINS) == {"quadratic", "double_well", "quartic_well", "rosenbrock"}


def test_batch_evaluation():
    f = make_builtin("rosenbrock")
    pts = np.random.default_rng(2).normal(size=(4, 3, 2))
    assert f.value(pts).shape == (4, 3)
    assert f.gradient(pts).shape == (4, 3, 2)
    assert np.allclose(f.value(pts)[1, 2], f.value(pts[1, 2]))


@given(st.lists(st.floats(1e-6, 1e6), min_size=1, max_size=8))
def test_kappa_exact_ratio(spectrum):
    c = curvature_bounds(make_quadratic(spectrum))
    assert c.kappa == max(spectrum) / min(spectrum)
