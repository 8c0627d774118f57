"""Closed-form eigenvalue and rate analysis of the linearized momentum dynamics.

For a curvature ``h`` (an eigenvalue of the Hessian at the minimum) the
continuous dynamics linearize to the 2x2 system

    [[0, 1], [-h, -(2d + beta h)]]

and the discrete scheme to

    [[1 - T^2 h, T c], [-T h, c]],   c = 1 - (2d + beta h) T.

Both have eigenvalues in closed form; everything here is built on those.
Worst cases are taken over h in [L/kappa, L]; with the default L = 1 this is
the usual normalization [1/kappa, 1].
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .dynamics import AlgorithmParams
from .errors import InvalidArgument, RegimeError

GRID_POINTS = 2048
ACCEL_TOL = 0.05
_TIE_RTOL = 1e-12


@dataclass(frozen=True)
class RateSample:
    h: float
    eigenvalues: tuple[complex, complex]
    metric: float  # max real part (continuous) or max modulus (discrete)
    regime: str  # "real", "complex" or "critical"


@dataclass
class RateReport:
    mode: str
    samples: list[RateSample]
    worst_rate: float
    worst_h: float
    worst_metric: float
    stable: bool

    def rows(self) -> list[tuple]:
        """Rows of ``h,re1,im1,re2,im2,metric,regime`` in ascending h."""
        return [
            (s.h, s.eigenvalues[0].real, s.eigenvalues[0].imag, s.eigenvalues[1].real,
             s.eigenvalues[1].imag, s.metric, s.regime)
            for s in self.samples
        ]


@dataclass
class AccelerationVerdict:
    slope: float
    classification: str  # "accelerated", "sub-accelerated" or "over-damped-limited"
    kappa_grid: list[float]
    rates: list[float]
    excluded: list[float] = field(default_factory=list)
    note: str = ""

    @property
    def warning(self) -> bool:
        return bool(self.excluded)


# -- eigenvalues ---------------------------------------------------------------


def _regime(disc: float, scale: float) -> str:
    if abs(disc) <= 1e-14 * max(scale, 1e-300):
        return "critical"
    return "real" if disc > 0 else "complex"


def _pair(center: float, disc: float, scale: float, factor: float = 1.0) -> tuple[complex, complex]:
    # center +/- factor * sqrt(disc), complex branch when disc < 0; a discriminant
    # within rounding of zero is treated as an exact double root
    if _regime(disc, scale) == "critical":
        return complex(center, 0.0), complex(center, 0.0)
    if disc >= 0:
        r = factor * math.sqrt(disc)
        return complex(center + r, 0.0), complex(center - r, 0.0)
    r = factor * math.sqrt(-disc)
    return complex(center, r), complex(center, -r)


def ct_eigenvalues(d: float, beta: float, h: float) -> tuple[complex, complex]:
    s = d + 0.5 * beta * h
    return _pair(-s, s * s - h, max(s * s, h))


def dt_eigenvalues(T: float, d: float, beta: float, h: float) -> tuple[complex, complex]:
    s = d + 0.5 * beta * h + 0.5 * T * h
    # lambda = 1 - T (s -/+ sqrt(s^2 - h)); list the larger real part first
    return _pair(1.0 - T * s, s * s - h, max(s * s, h), factor=T)


def dt_complex_magnitude(T: float, d: float, beta: float, h: float) -> float:
    """Modulus of the complex-conjugate discrete eigenvalues, sqrt(1 - 2dT - beta h T)."""
    s = d + 0.5 * beta * h + 0.5 * T * h
    if s * s - h >= 0:
        raise RegimeError(f"eigenvalues are real at T={T}, d={d}, beta={beta}, h={h}")
    return math.sqrt(1.0 - 2.0 * d * T - beta * h * T)


def _snap(disc, scale):
    return np.where(np.abs(disc) <= 1e-14 * np.maximum(scale, 1e-300), 0.0, disc)


def _ct_metric(d, beta, h):
    h = np.asarray(h, dtype=float)
    s = d + 0.5 * beta * h
    disc = _snap(s * s - h, np.maximum(s * s, h))
    return np.where(disc > 0, -s + np.sqrt(np.maximum(disc, 0.0)), -s)


def _dt_metric(T, d, beta, h):
    h = np.asarray(h, dtype=float)
    s = d + 0.5 * (beta + T) * h
    disc = _snap(s * s - h, np.maximum(s * s, h))
    root = np.sqrt(np.abs(disc))
    real_max = np.maximum(np.abs(1.0 - T * (s - root)), np.abs(1.0 - T * (s + root)))
    cplx = np.sqrt(np.maximum((1.0 - T * s) ** 2 + T * T * np.maximum(-disc, 0.0), 0.0))
    return np.where(disc >= 0, real_max, cplx)


def _branch_points(d: float, b: float, lo: float, hi: float) -> list[float]:
    """Roots in [lo, hi] of (d + b h / 2)^2 = h, where the regime changes."""
    a2, a1, a0 = 0.25 * b * b, d * b - 1.0, d * d
    if a2 == 0.0:
        roots = [-a0 / a1] if a1 != 0 else []
    else:
        disc = a1 * a1 - 4 * a2 * a0
        if disc < 0:
            roots = []
        else:
            sq = math.sqrt(disc)
            roots = [(-a1 - sq) / (2 * a2), (-a1 + sq) / (2 * a2)]
    return [r for r in roots if lo <= r <= hi]


def _h_candidates(lo: float, hi: float, d: float, b: float, grid: int) -> np.ndarray:
    if lo == hi:
        return np.array([lo])
    pts = np.concatenate([np.geomspace(lo, hi, grid), [lo, hi], _branch_points(d, b, lo, hi)])
    return np.unique(pts)


def _worst(metric: np.ndarray) -> int:
    # first (smallest-h) index within a relative tie band of the maximum
    m = metric.max()
    band = _TIE_RTOL * max(1.0, abs(m))
    return int(np.flatnonzero(metric >= m - band)[0])


def _check_kappa(kappa, L):
    if not kappa >= 1:
        raise InvalidArgument(f"kappa must be >= 1, got {kappa}")
    if not L > 0:
        raise InvalidArgument("L must be positive")


def ct_worst_rate(
    d: float, beta: float, kappa: float, L: float = 1.0, grid: int = GRID_POINTS, keep_samples: bool = True
) -> RateReport:
    """Worst-case continuous decay exponent ``-max Re(lambda)`` over the spectrum."""
    _check_kappa(kappa, L)
    hs = _h_candidates(L / kappa, L, d, beta, grid)
    metric = _ct_metric(d, beta, hs)
    i = _worst(metric)
    samples = []
    for h, m in zip(hs, metric) if keep_samples else ():
        s = d + 0.5 * beta * h
        samples.append(RateSample(float(h), ct_eigenvalues(d, beta, h), float(m), _regime(s * s - h, h)))
    worst = float(metric[i])
    return RateReport("continuous", samples, -worst, float(hs[i]), worst, worst < 0)


def dt_worst_rate(
    T: float, d: float, beta: float, kappa: float, L: float = 1.0, grid: int = GRID_POINTS, keep_samples: bool = True
) -> RateReport:
    """Worst-case per-step rate ``-ln max|lambda|`` over the spectrum."""
    _check_kappa(kappa, L)
    hs = _h_candidates(L / kappa, L, d, beta + T, grid)
    metric = _dt_metric(T, d, beta, hs)
    i = _worst(metric)
    samples = []
    for h, m in zip(hs, metric) if keep_samples else ():
        s = d + 0.5 * (beta + T) * h
        samples.append(RateSample(float(h), dt_eigenvalues(T, d, beta, h), float(m), _regime(s * s - h, h)))
    worst = float(metric[i])
    rate = math.inf if worst == 0.0 else -math.log(worst)
    return RateReport("discrete", samples, rate, float(hs[i]), worst, worst < 1.0)


def dt_stability_ok(T: float, d: float, beta: float, mu: float, L: float) -> bool:
    """Linear stability of the discrete scheme for every curvature in [mu, L].

    The condition 0 < T(2d + beta h) <= 2 - h T^2 is affine in h, so the two
    endpoints decide it.
    """
    if not 0 < mu <= L:
        raise InvalidArgument("need 0 < mu <= L")
    for h in (mu, L):
        lhs = T * (2.0 * d + beta * h)
        rhs = 2.0 - h * T * T
        if not (0.0 < lhs <= rhs + 1e-12 * max(1.0, abs(rhs))):
            return False
    return True


def nesterov_params(L: float, kappa: float) -> AlgorithmParams:
    """Constant-step accelerated gradient parameters written as (T, d, beta)."""
    if not L > 0 or not kappa >= 1:
        raise InvalidArgument("need L > 0 and kappa >= 1")
    sk, sL = math.sqrt(kappa), math.sqrt(L)
    return AlgorithmParams(T=1.0 / sL, d=sL / (sk + 1.0), beta=(sk - 1.0) / (sk + 1.0) / sL)


def classify_acceleration(
    rule: Callable[[float], tuple[float, float]],
    kappa_grid: Sequence[float],
    T: Optional[float] = None,
    tol: float = ACCEL_TOL,
    L: float = 1.0,
) -> AccelerationVerdict:
    """Fit the log-log slope of the worst-case rate against kappa.

    ``rule`` maps kappa to (d, beta). A slope within ``tol`` of -1/2 is
    accelerated; steeper is sub-accelerated; shallower means the rate is
    pinned by the kappa-independent high-curvature end (over-damped-limited).
    Unstable discrete configurations are excluded from the fit.
    """
    grid = sorted(float(k) for k in kappa_grid)
    if len(grid) < 4 or grid[0] <= 0 or math.log10(grid[-1] / grid[0]) < 3 - 1e-9:
        raise InvalidArgument("kappa_grid needs >= 4 points spanning >= 3 decades")
    used, rates, excluded = [], [], []
    last_report = None
    for kappa in grid:
        d, beta = rule(kappa)
        if T is None:
            rep = ct_worst_rate(d, beta, kappa, L)
        else:
            if not dt_stability_ok(T, d, beta, L / kappa, L):
                excluded.append(kappa)
                continue
            rep = dt_worst_rate(T, d, beta, kappa, L)
        if not (rep.stable and math.isfinite(rep.worst_rate) and rep.worst_rate > 0):
            excluded.append(kappa)
            continue
        used.append(kappa)
        rates.append(rep.worst_rate)
        last_report = rep
    if excluded:
        warnings.warn(f"excluded unstable or degenerate kappa values from the fit: {excluded}", stacklevel=2)
    if len(used) < 2:
        raise InvalidArgument("fewer than two usable kappa values")
    slope = float(np.polyfit(np.log(used), np.log(rates), 1)[0])
    if abs(slope + 0.5) <= tol:
        label = "accelerated"
    elif slope < -0.5:
        label = "sub-accelerated"
    else:
        label = "over-damped-limited"
    note = ""
    if last_report is not None:
        worst = next(s for s in last_report.samples if s.h == last_report.worst_h)
        note = f"{worst.regime} regime at worst h={worst.h:.6g}, rate={last_report.worst_rate:.6g}"
    return AccelerationVerdict(slope, label, used, rates, excluded, note)


def eigen_loci(
    mode: str,
    d_values: Iterable[float],
    betas: Iterable[float],
    h_values: Sequence[float],
    T: Optional[float] = None,
) -> list[tuple]:
    """Eigenvalue loci rows ``(beta, d, h, re1, im1, re2, im2, metric, regime)``."""
    rows = []
    for beta in betas:
        for d in d_values:
            for h in h_values:
                if mode == "continuous":
                    ev = ct_eigenvalues(d, beta, h)
                    metric = max(ev[0].real, ev[1].real)
                    s = d + 0.5 * beta * h
                else:
                    ev = dt_eigenvalues(T, d, beta, h)
                    metric = max(abs(ev[0]), abs(ev[1]))
                    s = d + 0.5 * (beta + T) * h
                rows.append((beta, d, h, ev[0].real, ev[0].imag, ev[1].real, ev[1].imag,
                             metric, _regime(s * s - h, h)))
    return rows
