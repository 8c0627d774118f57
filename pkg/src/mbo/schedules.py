"""Time-varying damping schedules and the closed-form fundamental solutions they admit.

Continuous time uses the Riccati damping ``d' = d_inf^2 - d^2`` (beta = 0),
which makes the transformed oscillator time invariant. For ``d0 > d_inf`` its
solution is ``d(t) = d_inf * coth(d_inf (t + C_d))`` and

    exp(-int_{t0}^{t} d) = (d_inf + d(t)) / (d_inf + d0) * exp(-d_inf (t - t0)).

Discrete time pins ``beta_k = T (1 - 2 d_k T)`` and lets ``b_k = beta_k / T``
follow ``4 b_{k+1} = alpha (1 + b_{k+1})(1 + b_k)``, with the constant
``alpha`` fixed by the limit ``d_inf``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InvalidArgument, ScheduleInfeasible


@dataclass(frozen=True)
class ScheduleCT:
    d0: float
    d_inf: float
    t0: float = 0.0

    def __post_init__(self):
        if not (self.d0 > 0 and self.d_inf > 0):
            raise DomainError("damping values must be positive")
        if self.d0 < self.d_inf:
            raise DomainError(f"increasing damping (d0={self.d0} < d_inf={self.d_inf}) is not supported")

    @property
    def C_d(self) -> float:
        """Shift in ``d_inf * coth(d_inf (t + C_d))``; infinite for a constant schedule."""
        if self.d0 == self.d_inf:
            return math.inf
        return math.atanh(self.d_inf / self.d0) / self.d_inf - self.t0


@dataclass(frozen=True)
class ScheduleDT:
    T: float
    d_seq: np.ndarray
    beta_seq: np.ndarray
    alpha_rec: float
    d_inf: float

    def __len__(self):
        return len(self.d_seq)


def _check_t(sched: ScheduleCT, t):
    if np.any(np.asarray(t) < sched.t0):
        raise DomainError("t must be >= t0")


def ct_damping(sched: ScheduleCT, t):
    _check_t(sched, t)
    t = np.asarray(t, dtype=float)
    if sched.d0 == sched.d_inf:
        out = np.full_like(t, sched.d_inf)
    else:
        out = sched.d_inf / np.tanh(sched.d_inf * (t + sched.C_d))
    return out if out.ndim else float(out)


def ct_envelope(sched: ScheduleCT, t, with_exponential: bool = True):
    """``rho(t) / rho(t0)``, optionally times ``exp(-d_inf (t - t0))``."""
    d = ct_damping(sched, t)
    t = np.asarray(t, dtype=float)
    ratio = (sched.d_inf + d) / (sched.d_inf + sched.d0)
    if with_exponential:
        ratio = ratio * np.exp(-sched.d_inf * (t - sched.t0))
    return ratio if np.ndim(ratio) else float(ratio)


def ct_fundamental(sched: ScheduleCT, h: float, t):
    """Magnitudes (slow, fast) of the two fundamental solutions of the linearization."""
    if not h > 0:
        raise InvalidArgument("h must be positive")
    disc = sched.d_inf**2 - h
    if disc == 0.0:
        raise DomainError("h == d_inf^2 is the double-root case; evaluate it as a limit in h")
    env = np.asarray(ct_envelope(sched, t, with_exponential=False))
    tau = np.asarray(t, dtype=float) - sched.t0
    if disc > 0:
        r = math.sqrt(disc)
        slow = env * np.exp((-sched.d_inf + r) * tau)
        fast = env * np.exp((-sched.d_inf - r) * tau)
    else:
        slow = fast = env * np.exp(-sched.d_inf * tau)
    if slow.ndim == 0:
        return float(slow), float(fast)
    return slow, fast


def ct_fundamental_exponents(sched: ScheduleCT, h: float) -> tuple[complex, complex]:
    """Exponents ``-d_inf +/- sqrt(d_inf^2 - h)`` of the fundamental solutions."""
    disc = sched.d_inf**2 - h
    root = math.sqrt(disc) if disc >= 0 else 1j * math.sqrt(-disc)
    return complex(-sched.d_inf + root), complex(-sched.d_inf - root)


def dt_schedule(T: float, d0: float, d_inf: float, k_max: int) -> ScheduleDT:
    """Coefficients ``d_k, beta_k`` for k = 0..k_max."""
    if not T > 0:
        raise InvalidArgument("T must be positive")
    if not 0 < d_inf * T < 1 or not 0 < d0 * T < 1:
        raise DomainError("need 0 < d0 T < 1 and 0 < d_inf T < 1")
    if k_max < 1:
        raise InvalidArgument("k_max must be >= 1")
    b_inf = 1.0 - 2.0 * d_inf * T
    alpha = 4.0 * b_inf / (1.0 + b_inf) ** 2
    b = np.empty(k_max + 1)
    b[0] = 1.0 - 2.0 * d0 * T
    for k in range(k_max):
        num = alpha * (1.0 + b[k])
        den = 4.0 - num
        if den <= 0:
            raise ScheduleInfeasible(f"recurrence denominator {den:.3g} <= 0 at k={k}")
        b[k + 1] = num / den
    d = (1.0 - b) / (2.0 * T)
    bad = np.flatnonzero((d * T <= 0) | (d * T >= 1))
    if bad.size:
        raise DomainError(f"d_k T leaves (0, 1) at k={int(bad[0])}")
    return ScheduleDT(T=T, d_seq=d, beta_seq=T * b, alpha_rec=alpha, d_inf=d_inf)


def _dt_roots(sched: ScheduleDT, h: float) -> tuple[float, float]:
    a = 1.0 - h * sched.T**2
    if not a > 0:
        raise DomainError("need h T^2 < 1")
    disc = a * a - sched.alpha_rec * a
    if disc >= 0:
        r = math.sqrt(disc)
        return abs(a + r), abs(a - r)
    m = math.sqrt(sched.alpha_rec * a)
    return m, m


def dt_log_envelope(sched: ScheduleDT, ks, k0: int = 0) -> np.ndarray:
    """``sum_{j=k0+1}^{k-1} log(1 - d_j T)`` for each k in ``ks`` (zero for k <= k0 + 1)."""
    ks = np.asarray(ks, dtype=int)
    if np.any(ks < k0):
        raise DomainError("k must be >= k0")
    if ks.size and ks.max() - 1 > len(sched.d_seq) - 1:
        raise DomainError("k exceeds the schedule length")
    logs = np.log1p(-sched.d_seq * sched.T)
    # cum[m] = sum_{j=k0+1}^{m} logs[j], cum[k0] = 0
    cum = np.zeros(len(logs) + 1)
    cum[k0 + 1:len(logs)] = np.cumsum(logs[k0 + 1:])
    idx = np.maximum(ks - 1, k0)
    return cum[idx]


def dt_fundamental(sched: ScheduleDT, h: float, k, k0: int = 0):
    """Magnitudes (slow, fast) of the discrete fundamental solutions at step ``k``.

    Accumulated in log space; ``k`` may be an integer or an array of integers.
    """
    r1, r2 = _dt_roots(sched, h)
    ks = np.atleast_1d(np.asarray(k, dtype=int))
    base = dt_log_envelope(sched, ks, k0)
    n = (ks - k0).astype(float)
    with np.errstate(divide="ignore"):
        l1 = np.where(n == 0, 0.0, n * np.log(r1)) if r1 > 0 else np.where(n == 0, 0.0, -np.inf)
        l2 = np.where(n == 0, 0.0, n * np.log(r2)) if r2 > 0 else np.where(n == 0, 0.0, -np.inf)
    m1, m2 = np.exp(base + l1), np.exp(base + l2)
    if np.ndim(k) == 0:
        return float(m1[0]), float(m2[0])
    return m1, m2


def dt_roots(sched: ScheduleDT, h: float) -> tuple[complex, complex]:
    """The two characteristic roots ``a +/- sqrt(a^2 - alpha a)``, ``a = 1 - h T^2``."""
    a = 1.0 - h * sched.T**2
    disc = a * a - sched.alpha_rec * a
    root = math.sqrt(disc) if disc >= 0 else 1j * math.sqrt(-disc)
    return complex(a + root), complex(a - root)
