"""Optional PNG rendering of experiment CSVs (needs the ``plot`` extra).

Only used by ``mbo experiment --plot`` and ``mbo figure --plot``; the CSVs
remain the primary output.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np


def _pyplot():
    try:
        import matplotlib
    except ImportError as exc:  # pragma: no cover - depends on the environment
        raise RuntimeError("plotting needs matplotlib; install the 'plot' extra") from exc
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def _read(path: Path) -> dict:
    data = np.genfromtxt(path, delimiter=",", names=True, dtype=None, encoding="utf-8")
    return {name: data[name] for name in data.dtype.names}


def _loci(ax_grid, cols):
    betas = np.unique(cols["beta"])
    for ax, beta in zip(ax_grid, betas):
        sel = cols["beta"] == beta
        for d in np.unique(cols["d"][sel]):
            m = sel & (cols["d"] == d)
            line, = ax.plot(cols["re1"][m], cols["im1"][m], ".", ms=2, label=f"d={d:g}")
            ax.plot(cols["re2"][m], cols["im2"][m], ".", ms=2, color=line.get_color())
        ax.set_title(f"beta={beta:g}")
        ax.set_xlabel("Re")
        ax.set_ylabel("Im")
    ax_grid[0].legend(fontsize=7)


def _curves(ax, cols, x, y, group="kappa", logy=True):
    for g in np.unique(cols[group]):
        m = cols[group] == g
        ax.plot(cols[x][m], cols[y][m], label=f"{group}={g:g}")
    if logy:
        ax.set_yscale("log")
    ax.set_xlabel(x)
    ax.set_ylabel(y)
    ax.legend(fontsize=7)


def render(csv_path, out_path=None) -> Path:
    """Render one experiment CSV to a PNG next to it; returns the PNG path."""
    plt = _pyplot()
    csv_path = Path(csv_path)
    out_path = Path(out_path) if out_path else csv_path.with_suffix(".png")
    cols = _read(csv_path)
    stem = csv_path.stem
    if stem.startswith("eig_loci"):
        n = len(np.unique(cols["beta"]))
        fig, axes = plt.subplots(1, n, figsize=(4 * n, 3.5), squeeze=False)
        _loci(axes[0], cols)
    else:
        fig, ax = plt.subplots(figsize=(6, 4))
        if stem.startswith("tv_rate_curves"):
            _curves(ax, cols, "t" if "t" in cols else "k", "worst")
        elif stem.startswith("rate_vs_kappa") or stem.startswith("heavyball_accel"):
            y = "worst_rate" if "worst_rate" in cols else "fitted_rate"
            ax.loglog(cols["kappa"], cols[y], "o-")
            ax.set_xlabel("kappa")
            ax.set_ylabel(y)
        elif stem.startswith("schedule_envelope"):
            ax.plot(cols["k_or_t"], cols["d"], label="d")
            ax.plot(cols["k_or_t"], cols["envelope"], label="envelope")
            ax.set_xlabel("k_or_t")
            ax.legend()
        elif stem == "energy_conservation":
            ax.semilogy(cols["k"][1:], np.maximum(cols["drift"][1:], 1e-300))
            ax.set_xlabel("k")
            ax.set_ylabel("shadow drift")
        elif stem == "region_grid":
            m = cols["member"].astype(bool)
            ax.plot(cols["q"][m], cols["p"][m], ".", ms=2)
            ax.set_xlabel("q")
            ax.set_ylabel("p")
        else:
            plt.close(fig)
            raise ValueError(f"no plot recipe for {csv_path.name}")
    fig.tight_layout()
    fig.savefig(out_path, dpi=120)
    plt.close(fig)
    return out_path


def render_all(paths) -> list[Path]:
    """Render every CSV in ``paths`` that has a recipe; other files are skipped."""
    out = []
    for p in map(Path, paths):
        if p.suffix != ".csv":
            continue
        try:
            out.append(render(p))
        except ValueError:
            continue
    return out
