"""Figures for the report path of the CLI.

Uses the object-oriented matplotlib API (no pyplot state), so figures can be
rendered from worker threads and never pop up windows.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure

from .congruence import CongruenceCode, density


def _new(width: float = 4.5, height: float = 3.2) -> tuple[Figure, object]:
    fig = Figure(figsize=(width, height), dpi=120)
    FigureCanvasAgg(fig)
    ax = fig.add_subplot(1, 1, 1)
    return fig, ax


def _save(fig: Figure, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(path, metadata={"Software": None} if path.suffix == ".png" else None)
    return path


def plot_out_region(region, path: str | Path) -> Path:
    """Lattice picture of Out(x) for block length 2."""
    if region.params.n != 2:
        raise ValueError("region plots need n = 2")
    x0, y0 = region.base
    p = region.params
    span = p.a if p.a is not None else 1
    lo_x, hi_x = x0 - 1, x0 + span + 1
    lo_y, hi_y = y0 - 1, y0 + span + 1
    if p.q is not None:
        lo_x, lo_y = max(lo_x, 0), max(lo_y, 0)
        hi_x, hi_y = min(hi_x, p.q - 1), min(hi_y, p.q - 1)
    fig, ax = _new(3.4, 3.4)
    grid = [(i, j) for i in range(lo_x, hi_x + 1) for j in range(lo_y, hi_y + 1)]
    ax.scatter([g[0] for g in grid], [g[1] for g in grid], s=10, c="0.8", zorder=1)
    members = [m for m in region.members if m != region.base]
    if members:
        ax.scatter([m[0] for m in members], [m[1] for m in members], s=40,
                   facecolors="white", edgecolors="k", zorder=2, label="reachable")
    ax.scatter([x0], [y0], s=40, c="k", zorder=3, label="input")
    ax.set_aspect("equal")
    ax.set_xlabel("$y_1$")
    ax.set_ylabel("$y_2$")
    ax.set_title(f"Out({x0},{y0}) for (a,h,t)=({p.a},{p.h},{p.t})")
    ax.legend(loc="upper right", frameon=False)
    return _save(fig, path)


def plot_density(code: CongruenceCode, windows: Sequence[int], path: str | Path) -> Path:
    """Windowed density against window radius, with the limit as a reference line."""
    reports = [density(code, k) for k in windows]
    fig, ax = _new()
    ax.plot(list(windows), [float(r.empirical) for r in reports], "o-", ms=3, lw=1, label="window count")
    ax.axhline(float(reports[0].exact), color="k", ls="--", lw=0.8, label=f"1/{code.modulus}")
    ax.set_xscale("log")
    ax.set_xlabel("window radius k")
    ax.set_ylabel("density")
    ax.set_title(str(code))
    ax.legend(frameon=False)
    return _save(fig, path)


def plot_sweep(rows, path: str | Path) -> Path:
    """Exact optimum (or search interval) against the congruence code size."""
    fig, ax = _new(5.0, 3.6)
    colors = {"tight": "tab:green", "gap": "tab:blue", "counterexample": "tab:red", "truncated": "tab:gray"}
    seen = set()
    for r in rows:
        flag = r.flag
        c = r.congruence_size
        label = flag if flag not in seen else None
        seen.add(flag)
        if r.result.exact:
            ax.scatter([c], [r.result.lower], s=16, color=colors[flag], label=label, zorder=2)
        else:
            ax.plot([c, c], [r.result.lower, r.result.upper], color=colors[flag], lw=1.5, label=label)
    top = max([r.result.upper for r in rows] + [r.congruence_size for r in rows] + [1])
    ax.plot([0, top], [0, top], color="k", lw=0.6, ls=":")
    ax.set_xlabel("congruence code size")
    ax.set_ylabel("optimal code size")
    ax.set_title(f"{len(rows)} instances")
    ax.legend(frameon=False)
    return _save(fig, path)
