"""Objective functions, curvature constants and the builtin catalogue.

Every objective is normalized so that the minimizer of interest sits at the
origin with value zero. ``value`` and ``gradient`` broadcast over leading
axes: a point has shape ``(n,)`` and a batch of points ``(..., n)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import InvalidArgument, UnsupportedOperation

BUILTINS = ("quadratic", "double_well", "quartic_well", "rosenbrock")


@dataclass(frozen=True)
class CurvatureBounds:
    """Local (mu, L) at the minimizer and global (C_f, C_f_bar) Hessian bounds.

    ``C_f`` is the magnitude of the most negative Hessian eigenvalue over the
    declared domain and ``C_f_bar`` the largest one; ``C_f == 0`` marks a
    convex objective.
    """

    mu: float
    L: float
    kappa: float
    C_f: float
    C_f_bar: float

    def __post_init__(self):
        if not self.mu > 0:
            raise InvalidArgument(f"mu must be positive, got {self.mu}")
        if self.L < self.mu:
            raise InvalidArgument(f"L={self.L} is smaller than mu={self.mu}")
        if self.C_f < 0 or self.C_f_bar < self.C_f:
            raise InvalidArgument("need 0 <= C_f <= C_f_bar")

    @property
    def convex(self) -> bool:
        return self.C_f == 0.0


@dataclass(frozen=True)
class ObjectiveSpec:
    name: str
    dimension: int
    value: Callable[[np.ndarray], np.ndarray]
    gradient: Callable[[np.ndarray], np.ndarray]
    hessian_quadratic: Optional[np.ndarray] = None
    minimizer: np.ndarray = field(default=None)  # type: ignore[assignment]
    critical_value_hat: Optional[float] = None
    curvature: Optional[CurvatureBounds] = None
    # Component of {f < critical_value_hat} that contains the origin, for 1-D objectives.
    attraction_interval: Optional[tuple[float, float]] = None
    params: tuple = ()

    def __post_init__(self):
        if self.dimension < 1:
            raise InvalidArgument("dimension must be a positive integer")
        if self.minimizer is None:
            object.__setattr__(self, "minimizer", np.zeros(self.dimension))

    @property
    def is_quadratic(self) -> bool:
        return self.hessian_quadratic is not None

    def __call__(self, x):
        return self.value(x)


def make_quadratic(spectrum) -> ObjectiveSpec:
    """Diagonal quadratic ``f(x) = 0.5 * sum(h_i x_i^2)``."""
    h = np.asarray(spectrum, dtype=float).ravel()
    if h.size == 0:
        raise InvalidArgument("spectrum must be non-empty")
    if not np.all(np.isfinite(h)) or np.any(h <= 0):
        raise InvalidArgument("spectrum entries must be finite and positive")
    h.setflags(write=False)

    def value(x):
        x = np.asarray(x, dtype=float)
        return 0.5 * np.sum(h * x * x, axis=-1)

    def gradient(x):
        return h * np.asarray(x, dtype=float)

    mu, L = float(h.min()), float(h.max())
    curv = CurvatureBounds(mu=mu, L=L, kappa=L / mu, C_f=0.0, C_f_bar=L)
    return ObjectiveSpec(
        name="quadratic",
        dimension=h.size,
        value=value,
        gradient=gradient,
        hessian_quadratic=np.diag(h),
        critical_value_hat=math.inf,
        curvature=curv,
        params=(("spectrum", tuple(h.tolist())),),
    )


def log_uniform_spectrum(kappa: float, n: int = 2, seed: int = 0) -> np.ndarray:
    """Seeded log-uniform spectrum on [1/kappa, 1] with both endpoints pinned."""
    if kappa < 1:
        raise InvalidArgument("kappa must be >= 1")
    if n < 1:
        raise InvalidArgument("n must be >= 1")
    if n == 1:
        return np.array([1.0])
    rng = np.random.default_rng(seed)
    inner = np.exp(rng.uniform(-math.log(kappa), 0.0, size=n - 2))
    return np.sort(np.concatenate([[1.0 / kappa], inner, [1.0]]))


def _double_well() -> ObjectiveSpec:
    # f(x) = (x^2 - 2x)^2 / 4; minima at 0 and 2, saddle (local max in 1-D) at 1.
    def value(x):
        x = np.asarray(x, dtype=float)
        u = x[..., 0]
        return 0.25 * (u * u - 2.0 * u) ** 2

    def gradient(x):
        x = np.asarray(x, dtype=float)
        return (x * x - 2.0 * x) * (x - 1.0)

    # f'' = 3(x-1)^2 - 1: minimum -1 at x=1; on the sublevel interval
    # [1 - sqrt2, 1 + sqrt2] of f <= 1/4 the maximum is 5 at the endpoints.
    curv = CurvatureBounds(mu=2.0, L=2.0, kappa=1.0, C_f=1.0, C_f_bar=5.0)
    return ObjectiveSpec(
        name="double_well",
        dimension=1,
        value=value,
        gradient=gradient,
        critical_value_hat=0.25,
        curvature=curv,
        attraction_interval=(1.0 - math.sqrt(2.0), 1.0),
    )


def _quartic_well(eps: float) -> ObjectiveSpec:
    eps = float(eps)
    if eps < 0:
        raise InvalidArgument("quartic_well needs eps >= 0")

    def value(x):
        x = np.asarray(x, dtype=float)
        return np.sum(0.25 * x**4 + 0.5 * eps * x * x, axis=-1)

    def gradient(x):
        x = np.asarray(x, dtype=float)
        return x**3 + eps * x

    # eps == 0 is a degenerate minimum: no (mu, L) exist.
    curv = None
    if eps > 0:
        # f'' = 3x^2 + eps; upper bound taken over the unit ball.
        curv = CurvatureBounds(mu=eps, L=eps, kappa=1.0, C_f=0.0, C_f_bar=3.0 + eps)
    return ObjectiveSpec(
        name="quartic_well",
        dimension=1,
        value=value,
        gradient=gradient,
        critical_value_hat=math.inf,
        curvature=curv,
        params=(("eps", eps),),
    )


def _rosenbrock_hessian_eigs(u0, u1):
    x, y = u0 + 1.0, u1 + 1.0
    a = 2.0 - 400.0 * y + 1200.0 * x * x
    b = -400.0 * x
    c = 200.0
    mid = 0.5 * (a + c)
    rad = np.sqrt(0.25 * (a - c) ** 2 + b * b)
    return mid - rad, mid + rad


def _rosenbrock() -> ObjectiveSpec:
    # Standard (1-x)^2 + 100(y-x^2)^2 shifted by (1, 1).
    def value(z):
        z = np.asarray(z, dtype=float)
        u, v = z[..., 0], z[..., 1]
        r = v - 2.0 * u - u * u
        return u * u + 100.0 * r * r

    def gradient(z):
        z = np.asarray(z, dtype=float)
        u, v = z[..., 0], z[..., 1]
        r = v - 2.0 * u - u * u
        return np.stack([2.0 * u - 400.0 * r * (1.0 + u), 200.0 * r], axis=-1)

    lo, hi = _rosenbrock_hessian_eigs(0.0, 0.0)
    # Global bounds over the closed unit disk around the minimizer (polar grid).
    rr, th = np.meshgrid(np.linspace(0.0, 1.0, 401), np.linspace(0.0, 2 * np.pi, 721))
    emin, emax = _rosenbrock_hessian_eigs(rr * np.cos(th), rr * np.sin(th))
    curv = CurvatureBounds(
        mu=float(lo),
        L=float(hi),
        kappa=float(hi / lo),
        C_f=float(max(0.0, -emin.min())),
        C_f_bar=float(emax.max()),
    )
    return ObjectiveSpec(
        name="rosenbrock",
        dimension=2,
        value=value,
        gradient=gradient,
        critical_value_hat=math.inf,
        curvature=curv,
    )


def make_builtin(name: str, params: Optional[dict] = None) -> ObjectiveSpec:
    params = dict(params or {})
    if name == "quadratic":
        if "spectrum" in params:
            return make_quadratic(params["spectrum"])
        kappa = float(params.get("kappa", 1.0))
        n = int(params.get("n", 2))
        seed = int(params.get("seed", 0))
        obj = make_quadratic(log_uniform_spectrum(kappa, n, seed))
        return obj
    if name == "double_well":
        return _double_well()
    if name == "quartic_well":
        return _quartic_well(params.get("eps", 0.0))
    if name == "rosenbrock":
        return _rosenbrock()
    raise InvalidArgument(f"unknown objective {name!r}; expected one of {BUILTINS}")


def parse_selector(selector: str) -> ObjectiveSpec:
    """Build an objective from a CLI selector such as ``quadratic:kappa=100,n=10``."""
    name, _, rest = selector.strip().partition(":")
    params = {}
    for item in filter(None, (s.strip() for s in rest.split(","))):
        key, eq, val = item.partition("=")
        if not eq:
            raise InvalidArgument(f"malformed selector parameter {item!r}")
        try:
            params[key.strip()] = float(val)
        except ValueError:
            raise InvalidArgument(f"non-numeric value in selector: {item!r}") from None
    allowed = {"quadratic": {"kappa", "n", "seed"}, "quartic_well": {"eps"}}
    extra = set(params) - allowed.get(name, set())
    if name in BUILTINS and extra:
        raise InvalidArgument(f"unexpected parameters for {name}: {sorted(extra)}")
    return make_builtin(name, params)


def check_gradient(obj: ObjectiveSpec, x, h_fd: float = 1e-5) -> float:
    """Max abs difference between central finite differences and ``obj.gradient``."""
    if not h_fd > 0:
        raise InvalidArgument("h_fd must be positive")
    x = np.asarray(x, dtype=float)
    eye = np.eye(obj.dimension) * h_fd
    fd = (obj.value(x + eye) - obj.value(x - eye)) / (2.0 * h_fd)
    return float(np.max(np.abs(fd - obj.gradient(x))))


def curvature_bounds(obj: ObjectiveSpec) -> CurvatureBounds:
    if obj.curvature is None:
        raise UnsupportedOperation(
            f"objective {obj.name!r} carries no curvature metadata "
            "(degenerate minimum or user-defined objective)"
        )
    return obj.curvature
