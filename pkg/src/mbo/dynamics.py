"""Continuous momentum flow, the discrete scheme and its dissipation/symplectic split.

The continuous dynamics are

    q' = p,    p' = -grad f(q) + f_np(q, p),
    f_np(q, p) = -2 d p - (grad f(q + beta p) - grad f(q)),

and the discrete algorithm applies one momentum contraction followed by a
symplectic Euler step:

    p_bar = p + T f_np(q, p)
    p_new = p_bar - T grad f(q)
    q_new = q + T p_new
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import DivergenceError, InvalidArgument
from .objective import ObjectiveSpec


@dataclass(frozen=True)
class State:
    q: np.ndarray
    p: np.ndarray

    def __post_init__(self):
        q = np.atleast_1d(np.asarray(self.q, dtype=float))
        p = np.atleast_1d(np.asarray(self.p, dtype=float))
        if q.shape != p.shape or q.ndim != 1:
            raise InvalidArgument(f"q and p must be vectors of equal length, got {q.shape} and {p.shape}")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "p", p)

    @classmethod
    def of(cls, q, p) -> "State":
        return cls(q, p)

    @property
    def z(self) -> np.ndarray:
        return np.concatenate([self.q, self.p])

    def norm(self) -> float:
        return float(np.sqrt(np.dot(self.q, self.q) + np.dot(self.p, self.p)))

    def __eq__(self, other):
        if not isinstance(other, State):
            return NotImplemented
        return np.array_equal(self.q, other.q) and np.array_equal(self.p, other.p)

    __hash__ = None  # type: ignore[assignment]


@dataclass(frozen=True)
class AlgorithmParams:
    T: float = 1.0
    d: float = 1.0
    beta: float = 0.0

    def __post_init__(self):
        if not (self.T > 0 and self.d > 0 and self.beta >= 0):
            raise InvalidArgument(f"need T > 0, d > 0, beta >= 0; got {self}")


@dataclass
class Trajectory:
    """Sampled phase-space path. ``q`` and ``p`` have shape (N, n)."""

    times: np.ndarray
    q: np.ndarray
    p: np.ndarray
    energies: np.ndarray

    def __len__(self):
        return len(self.times)

    @property
    def states(self) -> list[State]:
        return [State(qi, pi) for qi, pi in zip(self.q, self.p)]

    @property
    def final(self) -> State:
        return State(self.q[-1], self.p[-1])

    def norms(self) -> np.ndarray:
        return np.sqrt(np.sum(self.q**2, axis=1) + np.sum(self.p**2, axis=1))

    def write_csv(self, path) -> None:
        n = self.q.shape[1]
        header = ["t"] + [f"q{i}" for i in range(n)] + [f"p{i}" for i in range(n)] + ["H"]
        if hasattr(path, "write"):
            self._write(path, header)
        else:
            with open(path, "w", newline="") as fh:
                self._write(fh, header)

    def _write(self, fh, header):
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for t, qi, pi, e in zip(self.times, self.q, self.p, self.energies):
            w.writerow([_fmt(t)] + [_fmt(v) for v in qi] + [_fmt(v) for v in pi] + [_fmt(e)])


def _fmt(v) -> str:
    return format(float(v), ".17g")


def _energy(obj: ObjectiveSpec, q, p):
    return 0.5 * np.sum(p * p, axis=-1) + obj.value(q)


def _fnp(grad, q, p, d, beta):
    out = -2.0 * d * p
    if beta != 0.0:
        out = out - (grad(q + beta * p) - grad(q))
    return out


def non_potential_force(obj: ObjectiveSpec, s: State, params: AlgorithmParams) -> np.ndarray:
    return _fnp(obj.gradient, s.q, s.p, params.d, params.beta)


# -- continuous time ---------------------------------------------------------


def rk4_integrate(
    rhs: Callable[[float, np.ndarray], np.ndarray],
    y0,
    t0: float,
    t_end: float,
    dt: float,
) -> tuple[np.ndarray, np.ndarray]:
    """Classical fixed-step RK4. The last step is shortened to land on ``t_end``.

    Raises DivergenceError at the first non-finite state.
    """
    if not dt > 0:
        raise InvalidArgument("dt must be positive")
    if t_end < t0:
        raise InvalidArgument("t_end must be >= t0")
    span = t_end - t0
    n_full = int(math.floor(span / dt + 1e-9))
    steps = [dt] * n_full
    rem = span - n_full * dt
    if rem > 1e-12 * max(1.0, span):
        steps.append(rem)
    ys = np.empty((len(steps) + 1,) + np.shape(y0))
    ts = np.empty(len(steps) + 1)
    y = np.array(y0, dtype=float)
    t = t0
    ys[0], ts[0] = y, t
    with np.errstate(over="ignore", invalid="ignore"):
        for i, h in enumerate(steps, start=1):
            k1 = rhs(t, y)
            k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1)
            k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2)
            k4 = rhs(t + h, y + h * k3)
            y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            t = t0 + i * dt if i <= n_full else t_end
            if not np.all(np.isfinite(y)):
                raise DivergenceError(f"non-finite state at t={t:.6g}", at=t)
            ys[i], ts[i] = y, t
    return ts, ys


def ct_flow(
    obj: ObjectiveSpec,
    params: AlgorithmParams,
    z0: State,
    t_end: float,
    dt: float = 1e-3,
    d_of_t: Optional[Callable[[float], float]] = None,
) -> Trajectory:
    """Integrate the continuous dynamics from ``z0`` over [0, t_end] with RK4.

    ``d_of_t`` replaces the constant damping by a time-varying one.
    """
    n = obj.dimension
    if z0.q.size != n:
        raise InvalidArgument(f"state dimension {z0.q.size} does not match objective dimension {n}")
    grad = obj.gradient
    beta = params.beta

    def rhs(t, y):
        q, p = y[:n], y[n:]
        d = params.d if d_of_t is None else d_of_t(t)
        return np.concatenate([p, -grad(q) + _fnp(grad, q, p, d, beta)])

    ts, ys = rk4_integrate(rhs, z0.z, 0.0, float(t_end), dt)
    q, p = ys[:, :n], ys[:, n:]
    return Trajectory(ts, q, p, _energy(obj, q, p))


def ct_flow_many(
    obj: ObjectiveSpec,
    params: AlgorithmParams,
    starts: Sequence[State],
    t_end: float,
    dt: float = 1e-3,
) -> list[Trajectory]:
    """Integrate several initial states at once; same scheme and grid as ``ct_flow``."""
    n = obj.dimension
    if any(z.q.size != n for z in starts):
        raise InvalidArgument("state dimension does not match objective dimension")
    grad = obj.gradient
    d, beta = params.d, params.beta

    def rhs(t, y):
        q, p = y[:, :n], y[:, n:]
        return np.concatenate([p, -grad(q) + _fnp(grad, q, p, d, beta)], axis=1)

    ts, ys = rk4_integrate(rhs, np.stack([z.z for z in starts]), 0.0, float(t_end), dt)
    out = []
    for i in range(len(starts)):
        q, p = ys[:, i, :n], ys[:, i, n:]
        out.append(Trajectory(ts, q, p, _energy(obj, q, p)))
    return out


# -- discrete time -----------------------------------------------------------


def _split(grad, q, p, T, d, beta):
    p_bar = p + T * _fnp(grad, q, p, d, beta)
    p_new = p_bar - T * grad(q)
    return p_bar, q + T * p_new, p_new


def dt_step(obj: ObjectiveSpec, params: AlgorithmParams, z: State) -> State:
    _, q_new, p_new = _split(obj.gradient, z.q, z.p, params.T, params.d, params.beta)
    return State(q_new, p_new)


def split_step(obj: ObjectiveSpec, params: AlgorithmParams, z: State) -> tuple[State, State]:
    """Return (intermediate, next) of the dissipation map followed by symplectic Euler.

    The dissipation map adds ``+T f_np``; with that sign the composition is
    the discrete scheme exactly.
    """
    T = params.T
    bar = State(z.q, z.p + T * non_potential_force(obj, z, params))
    p_new = bar.p - T * obj.gradient(bar.q)
    return bar, State(bar.q + T * p_new, p_new)


def symplectic_euler_step(obj: ObjectiveSpec, T: float, z: State) -> State:
    p_new = z.p - T * obj.gradient(z.q)
    return State(z.q + T * p_new, p_new)


def heavy_ball_params(T: float, kappa: float) -> AlgorithmParams:
    if kappa < 1:
        raise InvalidArgument("kappa must be >= 1")
    return AlgorithmParams(T=T, d=1.0 / math.sqrt(kappa), beta=0.0)


def heavy_ball_step(obj: ObjectiveSpec, T: float, kappa: float, z: State) -> State:
    return dt_step(obj, heavy_ball_params(T, kappa), z)


def dt_iterate(
    obj: ObjectiveSpec,
    params: AlgorithmParams,
    z0: State,
    n_steps: int,
    schedule: Optional[Sequence[tuple[float, float]]] = None,
) -> Trajectory:
    """Run ``n_steps`` of the discrete scheme; ``times`` holds iteration indices.

    ``schedule`` optionally supplies per-step ``(d_k, beta_k)`` pairs.
    """
    grad = obj.gradient
    q = np.empty((n_steps + 1, obj.dimension))
    p = np.empty_like(q)
    q[0], p[0] = z0.q, z0.p
    T, d, beta = params.T, params.d, params.beta
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(n_steps):
            if schedule is not None:
                d, beta = schedule[k]
            _, q[k + 1], p[k + 1] = _split(grad, q[k], p[k], T, d, beta)
            if not (np.all(np.isfinite(q[k + 1])) and np.all(np.isfinite(p[k + 1]))):
                raise DivergenceError(f"non-finite state at step {k + 1}", at=k + 1)
    return Trajectory(np.arange(n_steps + 1, dtype=float), q, p, _energy(obj, q, p))
