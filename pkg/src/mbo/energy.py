"""Energy, shadow energy and Lyapunov machinery for the momentum dynamics."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import ndimage

from .dynamics import AlgorithmParams, State, non_potential_force
from .errors import DivergenceError, DomainError, InvalidArgument, UnsupportedOperation
from .objective import CurvatureBounds, ObjectiveSpec

PSD_TOL = 1e-12


@dataclass(frozen=True)
class TheoryConstants:
    L_H: float
    T0: float
    C_delta_H: float
    C_F: float
    T: Optional[float] = None
    # T * C_delta_H * exp(-T0 / T): drift bound per unit |grad H(z0)|^2
    drift_bound: Optional[float] = None


@dataclass
class EnergyAudit:
    per_step_drift: np.ndarray
    max_drift: float
    order_estimate: float
    hamiltonian: np.ndarray
    shadow: np.ndarray


@dataclass(frozen=True)
class DampingBounds:
    d1: float
    d2: float
    feasible: bool


def hamiltonian(obj: ObjectiveSpec, z: State) -> float:
    return float(0.5 * np.dot(z.p, z.p) + obj.value(z.q))


def ct_energy_rate(obj: ObjectiveSpec, z: State, params: AlgorithmParams) -> float:
    """dH/dt along the continuous flow, ``f_np(q, p) . p``."""
    return float(np.dot(non_potential_force(obj, z, params), z.p))


def _shadow(obj, q, p, T):
    g = obj.gradient(q)
    return 0.5 * np.sum(p * p, axis=-1) + obj.value(q) - 0.5 * T * np.sum(g * p, axis=-1)


def shadow_energy(obj: ObjectiveSpec, z: State, T: float) -> float:
    """Order-2 modified energy ``H - (T/2) grad f(q) . p`` of symplectic Euler."""
    return float(_shadow(obj, z.q, z.p, T))


def _conservative_run(obj, T, z0, n_steps):
    grad = obj.gradient
    q = np.empty((n_steps + 1, obj.dimension))
    p = np.empty_like(q)
    q[0], p[0] = z0.q, z0.p
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(n_steps):
            p[k + 1] = p[k] - T * grad(q[k])
            q[k + 1] = q[k] + T * p[k + 1]
            if not (np.all(np.isfinite(q[k + 1])) and np.all(np.isfinite(p[k + 1]))):
                raise DivergenceError(f"symplectic Euler diverged at step {k + 1}", at=k + 1)
    return q, p


def _max_drift(obj, T, z0, n_steps):
    q, p = _conservative_run(obj, T, z0, n_steps)
    sh = _shadow(obj, q, p, T)
    drift = np.abs(np.diff(sh))
    return q, p, sh, drift


def energy_audit(obj: ObjectiveSpec, T: float, z0: State, n_steps: int, halve: bool = True) -> EnergyAudit:
    """Per-step shadow-energy drift of the conservative map over ``n_steps``.

    With ``halve`` the run is repeated at T/2 over the same time horizon and
    ``order_estimate = log2(max_drift(T) / max_drift(T/2))``.
    """
    if not T > 0:
        raise InvalidArgument("T must be positive")
    if n_steps < 0:
        raise InvalidArgument("n_steps must be >= 0")
    q, p, sh, drift = _max_drift(obj, T, z0, n_steps)
    max_drift = float(drift.max()) if drift.size else 0.0
    order = math.nan
    if halve and n_steps > 0:
        _, _, _, drift_half = _max_drift(obj, 0.5 * T, z0, 2 * n_steps)
        m_half = float(drift_half.max())
        if max_drift > 0 and m_half > 0:
            order = math.log2(max_drift / m_half)
    H = 0.5 * np.sum(p * p, axis=1) + obj.value(q)
    return EnergyAudit(drift, max_drift, order, H, sh)


def theory_constants(L_H: float, T: Optional[float] = None) -> TheoryConstants:
    if not L_H > 0:
        raise InvalidArgument("L_H must be positive")
    T0 = (2.0 * math.log(2.0) - 1.0) / (2.0 * math.e * L_H)
    C = math.e * (2.9 + 0.1 * T0) * (1.0 + math.e * T0 / 3.0)
    C_F = 356.0 * L_H**2
    bound = None
    if T is not None:
        if not 0 < T <= T0 / 3.0:
            raise DomainError(f"the drift bound holds only for 0 < T <= T0/3 = {T0 / 3.0:.6g}")
        bound = T * C * math.exp(-T0 / T)
    return TheoryConstants(L_H, T0, C, C_F, T, bound)


def lipschitz_H(obj: ObjectiveSpec) -> float:
    """Lipschitz constant of grad H = (grad f(q), p) used for builtins: max(1, sup |f''|)."""
    if obj.curvature is None:
        raise UnsupportedOperation(f"no curvature metadata for {obj.name!r}")
    return max(1.0, obj.curvature.C_f_bar, obj.curvature.C_f)


def d_bounds(d: float, beta: float, curv: CurvatureBounds) -> DampingBounds:
    """Bounds d1 |p|^2 <= -p . f_np <= d2 |p|^2 on the momentum contraction."""
    d2 = 2.0 * d + curv.C_f_bar * beta
    d1 = 2.0 * d - curv.C_f * beta
    return DampingBounds(d1, d2, d1 > 0)


def lyapunov_V(obj: ObjectiveSpec, z: State, T: float, d1: float) -> float:
    if not T > 0 or d1 < 0:
        raise InvalidArgument("need T > 0 and d1 >= 0")
    g = obj.gradient(z.q)
    return shadow_energy(obj, z, T) + 0.5 * T * d1 * float(np.dot(g, z.p))


def convex_stability_matrix(T: float, d: float, beta: float, L: float) -> tuple[np.ndarray, bool]:
    """Energy-decrease matrix of the discrete scheme on L-smooth convex objectives."""
    if not 0 < d * T < 1:
        raise DomainError("need 0 < d T < 1")
    if 1.0 - 2.0 * d * T == 0.0:
        raise DomainError("tau = beta / (1 - 2dT) is undefined at dT = 1/2")
    tau = beta / (1.0 - 2.0 * d * T)
    a = 2.0 * d * T - 2.0 * d * d * T * T
    b = -d * T * (T - tau)
    c = T * tau - 0.5 * T * T * (tau * tau * L + 1.0)
    M = np.array([[a, b], [b, c]])
    lam_min = 0.5 * (a + c) - math.sqrt(0.25 * (a - c) ** 2 + b * b)
    return M, lam_min >= -PSD_TOL


def transformed_energy(obj: ObjectiveSpec, z: State, params: AlgorithmParams) -> float:
    """H at the shifted position q + (beta / (1 - 2dT) - T) p."""
    T, d, beta = params.T, params.d, params.beta
    shift = beta / (1.0 - 2.0 * d * T) - T
    return hamiltonian(obj, State(z.q + shift * z.p, z.p))


def region_membership(obj: ObjectiveSpec, z: State, box: float = 3.0, grid: int = 512) -> bool:
    """Is ``z`` in the component of {H < f_hat} that contains the origin?

    The component is {(q, p): q in C, H(q, p) < f_hat} where C is the component
    of {f < f_hat} containing 0. C is an analytic interval in 1-D and a
    flood-filled grid over [-box, box]^2 in 2-D.
    """
    f_hat = obj.critical_value_hat
    if f_hat is None:
        raise UnsupportedOperation(f"objective {obj.name!r} has no critical-value metadata")
    if not hamiltonian(obj, z) < f_hat:
        return False
    if math.isinf(f_hat):
        return True
    if obj.dimension == 1:
        if obj.attraction_interval is None:
            raise UnsupportedOperation("1-D objective without an attraction interval")
        lo, hi = obj.attraction_interval
        return bool(lo < z.q[0] < hi)
    if obj.dimension == 2:
        axis = np.linspace(-box, box, grid)
        X, Y = np.meshgrid(axis, axis, indexing="ij")
        inside = obj.value(np.stack([X, Y], axis=-1)) < f_hat
        labels, _ = ndimage.label(inside)
        step = axis[1] - axis[0]
        i0, j0 = (int(round((0.0 + box) / step)),) * 2
        ix, iy = (int(round((c + box) / step)) for c in z.q)
        if not (0 <= ix < grid and 0 <= iy < grid):
            return False
        return bool(labels[i0, j0] != 0 and labels[ix, iy] == labels[i0, j0])
    raise UnsupportedOperation("region membership is implemented for 1-D and 2-D objectives")
