"""Experiment runner: rate fitting, parameter sweeps, figure presets and manifests.

Every experiment writes sorted CSV files plus a ``manifest.txt`` of
``key=value`` lines. Nothing time- or host-dependent is recorded, so reruns
with the same configuration are byte-identical.
"""

from __future__ import annotations

import configparser
import csv
import dataclasses
import hashlib
import math
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from . import __version__
from .dynamics import AlgorithmParams, State, Trajectory, ct_flow, ct_flow_many, dt_iterate
from .energy import energy_audit, hamiltonian, region_membership
from .errors import ConfigError, DivergenceError, MboError
from .objective import log_uniform_spectrum, make_builtin, make_quadratic, parse_selector
from .schedules import (
    ScheduleCT,
    ct_damping,
    ct_envelope,
    ct_fundamental,
    ct_fundamental_exponents,
    dt_fundamental,
    dt_log_envelope,
    dt_roots,
    dt_schedule,
)
from .spectral import classify_acceleration, ct_worst_rate, dt_worst_rate, eigen_loci

EXPERIMENTS = (
    "eig_loci_ct",
    "eig_loci_dt",
    "rate_vs_kappa_ct",
    "rate_vs_kappa_dt",
    "schedule_envelope",
    "tv_rate_curves",
    "heavyball_accel",
    "energy_conservation",
    "region_demo",
)
FIGURES = ("fig2", "fig4", "fig5", "fig6", "fig7")
UNDERFLOW_FLOOR = 1e-280
MIN_FIT_SAMPLES = 10


# -- rate fitting --------------------------------------------------------------


@dataclass(frozen=True)
class RateFit:
    alpha_hat: float
    r_squared: float
    tail_fraction: float
    degenerate: bool
    n_used: int = 0


def fit_decay(times, norms, tail_fraction: float = 0.5) -> RateFit:
    """Least-squares decay exponent of ``norms`` over the trailing window."""
    if not 0 < tail_fraction <= 1:
        raise ValueError("tail_fraction must lie in (0, 1]")
    times = np.asarray(times, dtype=float)
    norms = np.asarray(norms, dtype=float)
    n = len(times)
    start = n - max(1, int(math.ceil(tail_fraction * n)))
    t, y = times[start:], norms[start:]
    ok = np.isfinite(y) & (y > UNDERFLOW_FLOOR)
    if ok.sum() < MIN_FIT_SAMPLES:
        return RateFit(math.nan, math.nan, tail_fraction, True, int(ok.sum()))
    t, logy = t[ok], np.log(y[ok])
    slope, icpt = np.polyfit(t, logy, 1)
    resid = logy - (slope * t + icpt)
    ss_tot = float(np.sum((logy - logy.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 1.0
    return RateFit(float(-slope), r2, tail_fraction, False, int(ok.sum()))


def fit_rate(traj: Trajectory, tail_fraction: float = 0.5) -> RateFit:
    """Fit ``|z(t)| ~ exp(-alpha t)`` on the tail of a trajectory.

    For discrete trajectories the times are iteration indices, so alpha is a
    per-step rate comparable to ``-ln max|lambda|``.
    """
    return fit_decay(traj.times, traj.norms(), tail_fraction)


def transition_time(times, mags, r_inf: float) -> Optional[float]:
    """Time from which the local decay rate stays within ``r_inf / 2`` of ``r_inf``.

    The local rate is ``-d ln(mag) / dt`` by finite differences; the early
    sublinear phase has a large excess over the asymptotic rate ``r_inf``.
    Returns None if the excess never settles below the threshold.
    """
    times = np.asarray(times, dtype=float)
    logm = np.log(np.asarray(mags, dtype=float))
    rates = -np.diff(logm) / np.diff(times)
    above = np.flatnonzero(rates - r_inf > 0.5 * r_inf)
    if above.size == 0:
        return float(times[0])
    i = above[-1] + 1
    return float(times[i]) if i < len(rates) else None


# -- configuration -------------------------------------------------------------


def _floats(v) -> tuple:
    if isinstance(v, str):
        v = [s for s in v.replace(";", ",").split(",") if s.strip()]
    return tuple(float(x) for x in v)


@dataclass(frozen=True)
class ExperimentConfig:
    name: str
    mode: str = "dt"
    objective: str = "quadratic:kappa=100"
    T: float = 0.5
    d: float = 0.1
    beta: float = 0.0
    d0: float = 1.0
    d_inf: Optional[float] = None  # None: d_inf = 1/sqrt(2 kappa)
    rule: str = "heavy_ball"  # heavy_ball: d = d_scale/sqrt(kappa); constant: d fixed
    d_scale: float = 1.0
    kappa_list: tuple = (10.0, 1e2, 1e3, 1e4, 1e5, 1e6)
    d_list: tuple = (0.1, 0.3, 0.5, 0.7, 0.9)
    betas: tuple = (0.0,)
    h_min: float = 1e-3
    h_max: float = 1.0
    h_points: int = 200
    steps: Optional[int] = None
    t_end: Optional[float] = None
    dt: float = 0.01
    t_points: int = 501
    dimension: int = 2
    q0: tuple = (1.0,)
    p0: tuple = (0.0,)
    starts: int = 20
    seed: int = 0
    output_dir: str = "out"

    def __post_init__(self):
        if self.name not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.name!r}; expected one of {EXPERIMENTS}")
        if self.mode not in ("ct", "dt"):
            raise ConfigError(f"mode must be 'ct' or 'dt', got {self.mode!r}")
        if self.rule not in ("heavy_ball", "constant"):
            raise ConfigError(f"rule must be 'heavy_ball' or 'constant', got {self.rule!r}")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be a 64-bit unsigned integer")

    @classmethod
    def from_mapping(cls, mapping: dict) -> "ExperimentConfig":
        fields = {f.name: f for f in dataclasses.fields(cls)}
        kwargs = {}
        for key, raw in mapping.items():
            key = key.strip()
            if key not in fields:
                raise ConfigError(f"unknown config key {key!r}")
            default = fields[key].default
            try:
                if isinstance(default, tuple):
                    val = _floats(raw)
                elif key in ("steps", "h_points", "t_points", "dimension", "starts", "seed"):
                    try:
                        val = int(str(raw).strip())
                    except ValueError:
                        val = int(float(raw))
                elif key in ("name", "mode", "objective", "rule", "output_dir"):
                    val = str(raw).strip()
                else:
                    val = None if str(raw).strip().lower() in ("", "none") else float(raw)
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"bad value for {key!r}: {raw!r}") from exc
            kwargs[key] = val
        if "name" not in kwargs:
            raise ConfigError("config needs a 'name' key")
        return cls(**kwargs)

    def canonical(self) -> str:
        """Stable text form used for the config hash; excludes the output directory."""
        lines = []
        for f in dataclasses.fields(self):
            if f.name == "output_dir":
                continue
            v = getattr(self, f.name)
            if isinstance(v, tuple):
                v = ",".join(format(x, ".17g") for x in v)
            elif isinstance(v, float):
                v = format(v, ".17g")
            lines.append(f"{f.name}={v}")
        return "\n".join(lines) + "\n"

    def config_hash(self) -> str:
        return hashlib.sha256(self.canonical().encode()).hexdigest()


def read_config_mapping(text: str) -> dict:
    """Parse flat ``key=value`` text with ``#`` comments and optional [sections].

    Sections only group keys; a key may appear once across the whole file.
    """
    parser = configparser.ConfigParser(
        delimiters=("=",), comment_prefixes=("#",), inline_comment_prefixes=("#",), interpolation=None
    )
    parser.optionxform = str
    try:
        parser.read_string("[__top__]\n" + text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from exc
    out: dict = {}
    for section in parser.sections():
        for key, val in parser.items(section):
            if key in out:
                raise ConfigError(f"duplicate config key {key!r}")
            out[key] = val
    return out


def load_config(path, **overrides) -> ExperimentConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    mapping = read_config_mapping(text)
    mapping.update({k: v for k, v in overrides.items() if v is not None})
    return ExperimentConfig.from_mapping(mapping)


# -- output --------------------------------------------------------------------


def _cell(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def write_csv(path, header: Sequence[str], rows: Iterable[Sequence]):
    """Write a CSV with a header row; ``path`` may also be an open text stream."""
    if hasattr(path, "write"):
        _write_rows(path, header, rows)
        return path
    path = Path(path)
    with open(path, "w", newline="") as fh:
        _write_rows(fh, header, rows)
    return path


def _write_rows(fh, header, rows):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_cell(v) for v in row])


@dataclass
class Manifest:
    experiment: str
    files: list[Path]
    metrics: dict = field(default_factory=dict)
    path: Optional[Path] = None


def _write_manifest(cfg: ExperimentConfig, out: Path, files: list[Path], metrics: dict) -> Manifest:
    lines = [
        f"experiment={cfg.name}",
        f"version={__version__}",
        f"config_hash={cfg.config_hash()}",
        f"seed={cfg.seed}",
    ]
    lines += [f"config.{ln}" for ln in cfg.canonical().splitlines()]
    lines += [f"file={p.name}" for p in files]
    lines += [f"metric.{k}={_cell(v)}" for k, v in sorted(metrics.items())]
    path = out / "manifest.txt"
    path.write_text("\n".join(lines) + "\n")
    return Manifest(cfg.name, files, metrics, path)


# -- experiments ---------------------------------------------------------------


def _h_grid(cfg):
    return np.linspace(cfg.h_min, cfg.h_max, cfg.h_points)


def _eig_loci(cfg, out, mode):
    T = cfg.T if mode == "discrete" else None
    rows = sorted(eigen_loci(mode, cfg.d_list, cfg.betas, _h_grid(cfg), T=T))
    name = "eig_loci_ct.csv" if T is None else "eig_loci_dt.csv"
    f = write_csv(out / name, ["beta", "d", "h", "re1", "im1", "re2", "im2", "metric", "regime"], rows)
    metrics = {"rows": len(rows)}
    if T is not None:
        # beta = 0: complex-regime moduli sit on circles of radius sqrt(1 - 2dT)
        spread = 0.0
        for d in cfg.d_list:
            mags = [r[7] for r in rows if r[0] == 0.0 and r[1] == d and r[8] == "complex"]
            if mags:
                spread = max(spread, max(mags) - min(mags))
        metrics["beta0_complex_modulus_spread"] = spread
    return [f], metrics


def _rule(cfg):
    if cfg.rule == "heavy_ball":
        return lambda kappa: (cfg.d_scale / math.sqrt(kappa), cfg.beta)
    return lambda kappa: (cfg.d, cfg.beta)


def _rate_vs_kappa(cfg, out, mode):
    rule = _rule(cfg)
    T = cfg.T if mode == "dt" else None
    rows = []
    for kappa in sorted(cfg.kappa_list):
        d, beta = rule(kappa)
        rep = ct_worst_rate(d, beta, kappa, keep_samples=False) if T is None else dt_worst_rate(
            T, d, beta, kappa, keep_samples=False)
        rows.append((kappa, d, beta, rep.worst_rate, rep.worst_h, rep.worst_metric, rep.stable))
    f = write_csv(out / f"rate_vs_kappa_{mode}.csv",
                  ["kappa", "d", "beta", "worst_rate", "worst_h", "worst_metric", "stable"], rows)
    metrics = {"unstable_points": sum(1 for r in rows if not r[6])}
    try:
        import warnings

        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            verdict = classify_acceleration(rule, cfg.kappa_list, T=T)
        metrics.update(slope=verdict.slope, classification=verdict.classification)
    except MboError as exc:
        metrics["classification"] = f"unavailable: {exc}"
    return [f], metrics


def schedule_rows(mode: str, d0: float, d_inf: float, T: float = 0.5, k_max: int = 100,
                  t_max: float = 50.0, t_points: int = 501) -> list[tuple]:
    """Rows ``(k_or_t, d, beta, envelope)`` of a damping schedule."""
    if mode == "ct":
        sched = ScheduleCT(d0, d_inf)
        ts = np.linspace(0.0, t_max, t_points)
        d = ct_damping(sched, ts)
        env = ct_envelope(sched, ts)
        return [(t, di, 0.0, e) for t, di, e in zip(ts, d, env)]
    sched = dt_schedule(T, d0, d_inf, k_max)
    ks = np.arange(k_max + 1)
    env = np.exp(dt_log_envelope(sched, ks))
    return [(int(k), sched.d_seq[k], sched.beta_seq[k], env[k]) for k in ks]


def _schedule_envelope(cfg, out):
    d_inf = cfg.d_inf if cfg.d_inf is not None else 1.0 / math.sqrt(10.0)
    t_max = cfg.t_end if cfg.t_end is not None else 50.0
    k_max = cfg.steps if cfg.steps is not None else 200
    rows = schedule_rows(cfg.mode, cfg.d0, d_inf, cfg.T, k_max, t_max, cfg.t_points)
    header = ["k_or_t", "d", "beta", "envelope"]
    metrics = {"d_inf": d_inf}
    if cfg.mode == "ct":
        sched = ScheduleCT(cfg.d0, d_inf)
        ratio = ct_envelope(sched, np.array([r[0] for r in rows]), with_exponential=False)
        rows = [r + (x,) for r, x in zip(rows, ratio)]
        header.append("rho_ratio")
        limit = 2.0 * d_inf / (d_inf + cfg.d0)
        metrics.update(rho_ratio_final=float(ratio[-1]), rho_ratio_limit=limit,
                       rho_ratio_limit_error=abs(float(ratio[-1]) - limit))
    f = write_csv(out / f"schedule_envelope_{cfg.mode}.csv", header, rows)
    return [f], metrics


def _tv_curves_ct(cfg, out):
    t_end = cfg.t_end
    rows, metrics = [], {}
    for kappa in sorted(cfg.kappa_list):
        d_inf = cfg.d_inf if cfg.d_inf is not None else 1.0 / math.sqrt(2.0 * kappa)
        sched = ScheduleCT(max(cfg.d0, d_inf), d_inf)
        horizon = t_end if t_end is not None else 10.0 / d_inf
        ts = np.unique(np.concatenate([np.linspace(0.0, 1.0, 101), np.linspace(0.0, horizon, cfg.t_points)]))
        d = ct_damping(sched, ts)
        lo = ct_fundamental(sched, 1.0 / kappa, ts)[0]
        hi = ct_fundamental(sched, 1.0, ts)[0]
        worst = np.maximum(lo, hi)
        rows += [(kappa, t, di, a, b, w) for t, di, a, b, w in zip(ts, d, lo, hi, worst)]
        r_inf = min(-ct_fundamental_exponents(sched, h)[0].real for h in (1.0 / kappa, 1.0))
        tt = transition_time(ts, worst, r_inf)
        tag = f"kappa_{kappa:g}"
        metrics[f"transition_time.{tag}"] = math.nan if tt is None else tt
        metrics[f"transition_ratio.{tag}"] = math.nan if tt is None else tt * d_inf
        early = ts <= 1.0
        metrics[f"early_dev_from_1_over_1pt.{tag}"] = float(np.max(np.abs(worst[early] * (1.0 + ts[early]) - 1.0)))
    f = write_csv(out / "tv_rate_curves_ct.csv", ["kappa", "t", "d", "mag_h_min", "mag_h_max", "worst"], rows)
    return [f], metrics


def _dt_asymptotic_rate(sched, h):
    r1, r2 = dt_roots(sched, h)
    return -math.log(max(abs(r1), abs(r2))) - math.log1p(-sched.d_inf * sched.T)


def _tv_curves_dt(cfg, out):
    T, rows, metrics = cfg.T, [], {}
    for kappa in sorted(cfg.kappa_list):
        d_inf = cfg.d_inf if cfg.d_inf is not None else 1.0 / math.sqrt(2.0 * kappa)
        k_max = cfg.steps if cfg.steps is not None else int(math.ceil(10.0 / (d_inf * T)))
        sched = dt_schedule(T, max(cfg.d0, d_inf), d_inf, k_max + 1)
        ks = np.arange(k_max + 1)
        lo = dt_fundamental(sched, 1.0 / kappa, ks)[0]
        hi = dt_fundamental(sched, 1.0, ks)[0]
        worst = np.maximum(lo, hi)
        rows += [(kappa, int(k), sched.d_seq[k], sched.beta_seq[k], a, b, w)
                 for k, a, b, w in zip(ks, lo, hi, worst)]
        r_inf = min(_dt_asymptotic_rate(sched, h) for h in (1.0 / kappa, 1.0))
        kt = transition_time(ks, worst, r_inf)
        tag = f"kappa_{kappa:g}"
        metrics[f"transition_index.{tag}"] = math.nan if kt is None else kt
        metrics[f"transition_ratio.{tag}"] = math.nan if kt is None else kt * T / math.sqrt(2.0 * kappa)
        early = ks <= math.sqrt(2.0 * kappa) / (2.0 * T)
        shifted = 1.0 + sched.d_seq[0] * T * np.maximum(ks[early] - 1, 0)
        metrics[f"early_dev_from_shifted_envelope.{tag}"] = float(np.max(np.abs(worst[early] * shifted - 1.0)))
    f = write_csv(out / "tv_rate_curves_dt.csv",
                  ["kappa", "k", "d", "beta", "mag_h_min", "mag_h_max", "worst"], rows)
    return [f], metrics


def _heavyball_accel(cfg, out):
    rows = []
    for kappa in sorted(cfg.kappa_list):
        obj = make_quadratic(log_uniform_spectrum(kappa, cfg.dimension, cfg.seed))
        d = cfg.d_scale / math.sqrt(kappa)
        params = AlgorithmParams(T=cfg.T, d=d, beta=cfg.beta)
        z0 = State(np.ones(obj.dimension), np.zeros(obj.dimension))
        if cfg.mode == "dt":
            pred = dt_worst_rate(cfg.T, d, cfg.beta, kappa, keep_samples=False)
        else:
            pred = ct_worst_rate(d, cfg.beta, kappa, keep_samples=False)
        if not pred.stable:
            rows.append((kappa, d, pred.worst_rate, math.nan, math.nan, math.nan, False))
            continue
        # long enough to decay by ~e^-250, well above the underflow floor
        try:
            if cfg.mode == "dt":
                n = cfg.steps if cfg.steps is not None else int(min(math.ceil(250.0 / pred.worst_rate), 400_000))
                traj = dt_iterate(obj, params, z0, n)
            else:
                t_end = cfg.t_end if cfg.t_end is not None else 250.0 / pred.worst_rate
                traj = ct_flow(obj, params, z0, t_end, dt=cfg.dt)
        except DivergenceError:
            rows.append((kappa, d, pred.worst_rate, math.nan, math.nan, math.nan, False))
            continue
        fit = fit_rate(traj)
        rel = abs(fit.alpha_hat - pred.worst_rate) / pred.worst_rate
        rows.append((kappa, d, pred.worst_rate, fit.alpha_hat, rel, fit.r_squared, True))
    f = write_csv(out / f"heavyball_accel_{cfg.mode}.csv",
                  ["kappa", "d", "predicted_rate", "fitted_rate", "rel_error", "r_squared", "stable"], rows)
    errs = [r[4] for r in rows if r[6]]
    return [f], {"max_rel_error": max(errs) if errs else math.nan, "points": len(rows)}


def _z0(cfg, n):
    q = np.resize(np.asarray(cfg.q0, dtype=float), n)
    p = np.resize(np.asarray(cfg.p0, dtype=float), n)
    return State(q, p)


def _energy_conservation(cfg, out):
    obj = parse_selector(cfg.objective)
    n = cfg.steps if cfg.steps is not None else 1000
    audit = energy_audit(obj, cfg.T, _z0(cfg, obj.dimension), n)
    drift = np.concatenate([[0.0], audit.per_step_drift])
    rows = [(k, h, s, dr) for k, (h, s, dr) in enumerate(zip(audit.hamiltonian, audit.shadow, drift))]
    f = write_csv(out / "energy_conservation.csv", ["k", "H", "shadow", "drift"], rows)
    return [f], {"max_drift": audit.max_drift, "order_estimate": audit.order_estimate}


def _region_demo(cfg, out):
    obj = make_builtin("double_well")
    qs = np.linspace(-1.0, 3.0, 81)
    ps = np.linspace(-1.5, 1.5, 61)
    grid = [(q, p, region_membership(obj, State([q], [p]))) for q in qs for p in ps]
    f_grid = write_csv(out / "region_grid.csv", ["q", "p", "member"], grid)

    rng = np.random.default_rng(cfg.seed)
    lo, hi = obj.attraction_interval
    pmax = math.sqrt(2.0 * obj.critical_value_hat)
    params = AlgorithmParams(T=cfg.T, d=cfg.d, beta=cfg.beta)
    t_end = cfg.t_end if cfg.t_end is not None else 200.0
    starts = []
    while len(starts) < cfg.starts:
        z = State([rng.uniform(lo, hi)], [rng.uniform(-pmax, pmax)])
        if region_membership(obj, z):
            starts.append(z)
    rows = []
    for i, (z, traj) in enumerate(zip(starts, ct_flow_many(obj, params, starts, t_end, dt=cfg.dt))):
        H = traj.energies
        monotone = bool(np.all(np.diff(H) <= 1e-12 * max(1.0, H[0])))
        final = float(traj.norms()[-1])
        rows.append((i, z.q[0], z.p[0], hamiltonian(obj, z), final, final < 1e-6, monotone))
    f_starts = write_csv(out / "region_starts.csv",
                         ["index", "q0", "p0", "H0", "final_norm", "converged", "H_nonincreasing"], rows)
    frac = sum(r[5] for r in rows) / len(rows) if rows else math.nan
    return [f_grid, f_starts], {
        "converged_fraction": frac,
        "H_nonincreasing_fraction": sum(r[6] for r in rows) / len(rows) if rows else math.nan,
    }


def run_experiment(cfg: ExperimentConfig) -> Manifest:
    """Run one experiment and write its CSVs and ``manifest.txt`` into ``cfg.output_dir``."""
    out = Path(cfg.output_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        if not os.access(out, os.W_OK):
            raise PermissionError(f"{out} is not writable")
    except OSError as exc:
        raise ConfigError(f"cannot write to {out}: {exc}") from exc
    name = cfg.name
    if name == "eig_loci_ct":
        files, metrics = _eig_loci(cfg, out, "continuous")
    elif name == "eig_loci_dt":
        files, metrics = _eig_loci(cfg, out, "discrete")
    elif name == "rate_vs_kappa_ct":
        files, metrics = _rate_vs_kappa(cfg, out, "ct")
    elif name == "rate_vs_kappa_dt":
        files, metrics = _rate_vs_kappa(cfg, out, "dt")
    elif name == "schedule_envelope":
        files, metrics = _schedule_envelope(cfg, out)
    elif name == "tv_rate_curves":
        files, metrics = (_tv_curves_ct if cfg.mode == "ct" else _tv_curves_dt)(cfg, out)
    elif name == "heavyball_accel":
        files, metrics = _heavyball_accel(cfg, out)
    elif name == "energy_conservation":
        files, metrics = _energy_conservation(cfg, out)
    else:
        files, metrics = _region_demo(cfg, out)
    return _write_manifest(cfg, out, files, metrics)


# -- figure presets ------------------------------------------------------------

_KAPPAS_FIG = (1.0, 10.0, 100.0, 1000.0, 10000.0)


def figure_config(figure: str, out) -> ExperimentConfig:
    out = str(out)
    if figure == "fig2":
        return ExperimentConfig("eig_loci_ct", mode="ct", betas=(0.0, 0.2, 0.4), h_min=1e-3, output_dir=out)
    if figure == "fig4":
        return ExperimentConfig("eig_loci_dt", mode="dt", T=0.8, betas=(0.0, 0.2, 0.4),
                                d_list=(0.1, 0.2, 0.3, 0.4, 0.5), h_min=1e-3, output_dir=out)
    if figure == "fig5":
        return ExperimentConfig("schedule_envelope", mode="ct", d0=1.0, d_inf=1.0 / math.sqrt(10.0),
                                t_end=50.0, t_points=1001, output_dir=out)
    if figure == "fig6":
        return ExperimentConfig("tv_rate_curves", mode="ct", d0=1.0, kappa_list=_KAPPAS_FIG,
                                t_points=2001, output_dir=out)
    if figure == "fig7":
        return ExperimentConfig("tv_rate_curves", mode="dt", T=0.5, d0=1.0, kappa_list=_KAPPAS_FIG, output_dir=out)
    raise ConfigError(f"unknown figure {figure!r}; expected one of {FIGURES}")


def emit_figure_data(figure: str, out) -> list[Path]:
    """Write the CSVs behind one of the preset figures; returns the files written."""
    manifest = run_experiment(figure_config(figure, out))
    return list(manifest.files) + [manifest.path]
