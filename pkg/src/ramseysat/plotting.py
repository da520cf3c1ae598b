"""Figures for certificates and bound searches (written to files)."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np
from matplotlib.colors import ListedColormap

from .encoders import Coloring
from .result import Status

PALETTE = ["#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"]
STATUS_COLORS = {Status.SAT: "#2ca02c", Status.UNSAT: "#d62728", Status.UNKNOWN: "#7f7f7f"}


def _cmap(c: int) -> ListedColormap:
    return ListedColormap([PALETTE[k % len(PALETTE)] for k in range(c)])


def plot_coloring(coloring: Coloring, path) -> Path:
    """Grid certificates as an n x n mosaic, sequences as a strip."""
    spec = coloring.spec
    data = np.array(coloring.rows) - 1
    if spec.is_grid:
        size = min(10.0, max(3.0, spec.n * 0.35))
        fig, ax = plt.subplots(figsize=(size, size))
    else:
        width = min(16.0, max(4.0, spec.n * 0.25))
        fig, ax = plt.subplots(figsize=(width, 1.6))
    ax.imshow(data, cmap=_cmap(spec.c), vmin=0, vmax=spec.c - 1,
              interpolation="nearest", aspect="equal")
    ax.set_xticks(np.arange(-0.5, data.shape[1], 1), minor=True)
    ax.set_yticks(np.arange(-0.5, data.shape[0], 1), minor=True)
    ax.grid(which="minor", color="white", linewidth=0.5)
    ax.tick_params(which="both", length=0)
    if spec.is_grid:
        ax.set_xticks(range(spec.n))
        ax.set_xticklabels(range(1, spec.n + 1), fontsize=6)
        ax.set_yticks(range(spec.n))
        ax.set_yticklabels(range(1, spec.n + 1), fontsize=6)
        ax.set_title(f"{spec.c}-coloring of {spec.n}x{spec.n} grid, no monochromatic L", fontsize=9)
    else:
        step = max(1, spec.n // 20)
        ax.set_xticks(range(0, spec.n, step))
        ax.set_xticklabels(range(1, spec.n + 1, step), fontsize=7)
        ax.set_yticks([])
        dist = "square" if spec.kind == "VDS" else "cube"
        ax.set_title(f"{spec.c}-coloring of [{spec.n}] with no monochromatic pair a {dist} apart",
                     fontsize=9)
    fig.tight_layout()
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_search(report, path) -> Path:
    """Per-instance solve time across n, colored by outcome."""
    fig, ax = plt.subplots(figsize=(7, 3.5))
    ns = [r.n for r in report.records]
    times = [max(r.elapsed, 1e-4) for r in report.records]
    colors = [STATUS_COLORS[r.status] for r in report.records]
    ax.bar(ns, times, color=colors, width=0.8)
    ax.set_yscale("log")
    ax.set_xlabel("n")
    ax.set_ylabel("solve time (s)")
    ax.set_title(f"{report.conclusion}  ({report.solver})")
    handles = [plt.Rectangle((0, 0), 1, 1, color=col) for col in STATUS_COLORS.values()]
    ax.legend(handles, [str(s) for s in STATUS_COLORS], loc="upper left", fontsize=8, frameon=False)
    fig.tight_layout()
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
