"""Command-line entry point ``mbo``.

Exit codes: 0 success, 2 configuration or argument error, 3 divergence.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .dynamics import AlgorithmParams, State, ct_flow, dt_iterate
from .energy import energy_audit, lipschitz_H, theory_constants
from .errors import ConfigError, DivergenceError, MboError
from .harness import (
    EXPERIMENTS,
    FIGURES,
    ExperimentConfig,
    emit_figure_data,
    fit_rate,
    read_config_mapping,
    run_experiment,
    schedule_rows,
    write_csv,
)
from .objective import parse_selector
from .spectral import ct_worst_rate, dt_worst_rate

EXIT_OK, EXIT_CONFIG, EXIT_DIVERGENCE = 0, 2, 3


def parse_state(text: str, n: int) -> State:
    """``"q0,..;p0,.."`` or a flat list of 2n numbers (n numbers means p = 0)."""
    try:
        if ";" in text:
            q, p = text.split(";")
            qv = [float(x) for x in q.split(",") if x.strip()]
            pv = [float(x) for x in p.split(",") if x.strip()]
        else:
            vals = [float(x) for x in text.split(",") if x.strip()]
            qv, pv = (vals[:n], vals[n:]) if len(vals) == 2 * n else (vals, [0.0] * len(vals))
    except ValueError as exc:
        raise ConfigError(f"cannot parse state {text!r}") from exc
    if len(qv) != n or len(pv) != n:
        raise ConfigError(f"state {text!r} does not have dimension {n}")
    return State(qv, pv)


def _emit(path: Optional[str], default_name: str, header, rows) -> Optional[Path]:
    if path is None:
        write_csv(sys.stdout, header, rows)
        return None
    p = Path(path)
    if p.is_dir() or not p.suffix:
        p.mkdir(parents=True, exist_ok=True)
        p = p / default_name
    return write_csv(p, header, rows)


def cmd_analyze(args) -> int:
    if args.mode == "ct":
        rep = ct_worst_rate(args.d, args.beta, args.kappa, args.L, grid=args.grid)
    else:
        rep = dt_worst_rate(args.T, args.d, args.beta, args.kappa, args.L, grid=args.grid)
    _emit(args.out, f"analyze_{args.mode}.csv", ["h", "re1", "im1", "re2", "im2", "metric", "regime"], rep.rows())
    print(f"worst_rate={rep.worst_rate:.17g} worst_h={rep.worst_h:.17g} stable={int(rep.stable)}", file=sys.stderr)
    return EXIT_OK


def cmd_simulate(args) -> int:
    obj = parse_selector(args.objective)
    params = AlgorithmParams(T=args.T, d=args.d, beta=args.beta)
    z0 = parse_state(args.z0, obj.dimension)
    if args.mode == "ct":
        traj = ct_flow(obj, params, z0, args.tmax, dt=args.dt)
    else:
        traj = dt_iterate(obj, params, z0, args.steps)
    if args.out is None:
        traj.write_csv(sys.stdout)
    else:
        p = Path(args.out)
        if p.is_dir() or not p.suffix:
            p.mkdir(parents=True, exist_ok=True)
            p = p / f"trajectory_{args.mode}.csv"
        traj.write_csv(p)
    fit = fit_rate(traj)
    print(f"alpha_hat={fit.alpha_hat:.17g} r_squared={fit.r_squared:.17g} degenerate={int(fit.degenerate)}",
          file=sys.stderr)
    return EXIT_OK


def cmd_schedule(args) -> int:
    rows = schedule_rows(args.mode, args.d0, args.dinf, T=args.T, k_max=args.kmax, t_max=args.tmax,
                         t_points=args.points)
    _emit(args.out, f"schedule_{args.mode}.csv", ["k_or_t", "d", "beta", "envelope"], rows)
    return EXIT_OK


def cmd_energy_audit(args) -> int:
    obj = parse_selector(args.objective)
    z0 = parse_state(args.z0, obj.dimension)
    audit = energy_audit(obj, args.T, z0, args.steps, halve=args.halve)
    drift = np.concatenate([[0.0], audit.per_step_drift])
    rows = [(k, h, s, d) for k, (h, s, d) in enumerate(zip(audit.hamiltonian, audit.shadow, drift))]
    _emit(args.out, "energy_audit.csv", ["k", "H", "shadow", "drift"], rows)
    print(f"max_drift={audit.max_drift:.17g} order={audit.order_estimate:.17g}", file=sys.stderr)
    if args.r is not None:
        _print_bound(obj, z0, args.T, args.r)
    return EXIT_OK


def _print_bound(obj, z0, T, r):
    L_H = lipschitz_H(obj)
    tc = theory_constants(L_H)
    if T > tc.T0 / 3.0:
        print(f"bound=unavailable reason=T>T0/3 T0={tc.T0:.17g}", file=sys.stderr)
        return
    radius = 0.5 * r / (1.0 + 3.63 * L_H * T * (1.0 + math.e * tc.T0 / 3.0))
    if z0.norm() > radius:
        print(f"bound=unavailable reason=|z0|>{radius:.17g}", file=sys.stderr)
        return
    g = np.concatenate([obj.gradient(z0.q), z0.p])
    bound = theory_constants(L_H, T).drift_bound * float(np.dot(g, g))
    print(f"bound={bound:.17g} L_H={L_H:.17g}", file=sys.stderr)


def _render(files, enabled):
    if not enabled:
        return
    from .plotting import render_all

    for p in render_all(files):
        print(f"plot={p}", file=sys.stderr)


def cmd_experiment(args) -> int:
    mapping = read_config_mapping(Path(args.config).read_text()) if args.config else {}
    if args.name:
        mapping["name"] = args.name
    for item in args.set or []:
        key, eq, val = item.partition("=")
        if not eq:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        mapping[key.strip()] = val
    if args.out:
        mapping["output_dir"] = args.out
    cfg = ExperimentConfig.from_mapping(mapping)
    manifest = run_experiment(cfg)
    for f in manifest.files:
        print(f"file={f}", file=sys.stderr)
    print(f"manifest={manifest.path}", file=sys.stderr)
    _render(manifest.files, args.plot)
    return EXIT_OK


def cmd_figure(args) -> int:
    files = emit_figure_data(args.figure, args.out)
    for f in files:
        print(f"file={f}", file=sys.stderr)
    _render(files, args.plot)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    return _build()[0]


def _build():
    ap = argparse.ArgumentParser(prog="mbo", description="Momentum-based optimization dynamics toolkit.")
    ap.add_argument("--version", action="version", version=f"mbo {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="key=value file supplying defaults for the flags")
        p.add_argument("--out", help="output directory or CSV path (stdout if omitted)")

    p = sub.add_parser("analyze", help="eigenvalues and worst-case rate over the spectrum")
    common(p)
    p.add_argument("--mode", choices=("ct", "dt"), default="dt")
    p.add_argument("--d", type=float, default=0.1)
    p.add_argument("--beta", type=float, default=0.0)
    p.add_argument("--T", type=float, default=0.5)
    p.add_argument("--kappa", type=float, default=100.0)
    p.add_argument("--L", type=float, default=1.0)
    p.add_argument("--grid", type=int, default=2048)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("simulate", help="integrate the continuous flow or iterate the discrete scheme")
    common(p)
    p.add_argument("--objective", default="quadratic:kappa=100")
    p.add_argument("--mode", choices=("ct", "dt"), default="dt")
    p.add_argument("--T", type=float, default=0.5)
    p.add_argument("--d", type=float, default=0.1)
    p.add_argument("--beta", type=float, default=0.0)
    p.add_argument("--z0", default="1")
    p.add_argument("--steps", type=int, default=1000)
    p.add_argument("--tmax", type=float, default=100.0)
    p.add_argument("--dt", type=float, default=1e-2)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("schedule", help="time-varying damping schedule and envelope")
    common(p)
    p.add_argument("--mode", choices=("ct", "dt"), default="ct")
    p.add_argument("--d0", type=float, default=1.0)
    p.add_argument("--dinf", type=float, default=1.0 / math.sqrt(10.0))
    p.add_argument("--T", type=float, default=0.5)
    p.add_argument("--kmax", type=int, default=100)
    p.add_argument("--tmax", type=float, default=50.0)
    p.add_argument("--points", type=int, default=501)
    p.set_defaults(func=cmd_schedule)

    p = sub.add_parser("energy-audit", help="shadow-energy drift of the conservative symplectic map")
    common(p)
    p.add_argument("--objective", default="quartic_well:eps=1")
    p.add_argument("--T", type=float, default=0.01)
    p.add_argument("--steps", type=int, default=1000)
    p.add_argument("--z0", default="1")
    p.add_argument("--halve", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--r", type=float, default=None, help="analyticity radius; enables the theoretical bound")
    p.set_defaults(func=cmd_energy_audit)

    p = sub.add_parser("experiment", help="run a configured experiment")
    p.add_argument("--config")
    p.add_argument("--out")
    p.add_argument("--name", choices=EXPERIMENTS)
    p.add_argument("--set", action="append", metavar="KEY=VALUE", help="override a config key")
    p.add_argument("--plot", action="store_true", help="also render PNGs next to the CSVs")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("figure", help="emit the data behind a preset figure")
    p.add_argument("figure", choices=FIGURES)
    p.add_argument("--out", required=True)
    p.add_argument("--plot", action="store_true", help="also render PNGs next to the CSVs")
    p.set_defaults(func=cmd_figure)
    return ap, sub.choices


def _convert(action, raw):
    if isinstance(action.default, bool):
        text = str(raw).strip().lower()
        if text not in ("1", "0", "true", "false", "yes", "no"):
            raise ConfigError(f"bad boolean for {action.dest!r}: {raw!r}")
        return text in ("1", "true", "yes")
    if action.type is None:
        return raw
    try:
        return action.type(raw)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad value for {action.dest!r}: {raw!r}") from exc


def _apply_config(ap, subparsers, args, argv):
    """Re-parse with defaults taken from ``--config`` for the flag-driven subcommands."""
    if args.command in ("experiment", "figure") or not getattr(args, "config", None):
        return args
    try:
        mapping = read_config_mapping(Path(args.config).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
    sp = subparsers[args.command]
    actions = {a.dest: a for a in sp._actions if a.dest not in ("help", "func", "config")}
    defaults = {}
    for key, val in mapping.items():
        dest = key.replace("-", "_")
        if dest not in actions:
            raise ConfigError(f"unknown key {key!r} for {args.command}")
        defaults[dest] = _convert(actions[dest], val)
    sp.set_defaults(**defaults)
    return ap.parse_args(argv)


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    ap, subparsers = _build()
    try:
        args = _apply_config(ap, subparsers, ap.parse_args(argv), argv)
        return args.func(args)
    except DivergenceError as exc:
        print(f"error: divergence: {exc}", file=sys.stderr)
        return EXIT_DIVERGENCE
    except (MboError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
