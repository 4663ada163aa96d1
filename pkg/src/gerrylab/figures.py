"""Matplotlib renderings: plan maps, the tradeoff frontier, anneal traces.

The plan map mirrors the usual presentation of these electorates: voters as
blue (A) and red (B) dots over cells tinted by district, with district
boundaries drawn heavy.  All functions write PNG files; they use the Agg
backend so they work headless.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
from matplotlib.collections import LineCollection

from .electorate import MATERIALIZE_LIMIT, Electorate
from .grid import CellPartition

__all__ = ["plot_plan", "plot_pareto", "plot_trace"]

# Muted fills so the voter dots stay legible on top.
_DISTRICT_COLORS = [
    "#c6dbef", "#fdd0a2", "#c7e9c0", "#dadaeb", "#fee0d2",
    "#d9d9d9", "#fff7bc", "#e5f5f9", "#fde0ef", "#e0ecf4",
]


def _district_fills(p: CellPartition, ax) -> None:
    g = p.g
    for idx, d in enumerate(p.assignment):
        r, c = divmod(idx, g)
        ax.add_patch(
            plt.Rectangle(
                (c / g, r / g),
                1 / g,
                1 / g,
                facecolor=_DISTRICT_COLORS[(d - 1) % len(_DISTRICT_COLORS)],
                edgecolor="none",
            )
        )


def _district_boundaries(p: CellPartition, ax) -> None:
    g = p.g
    segments = []
    for idx, d in enumerate(p.assignment):
        r, c = divmod(idx, g)
        if c + 1 < g and p.assignment[idx + 1] != d:
            segments.append([((c + 1) / g, r / g), ((c + 1) / g, (r + 1) / g)])
        if r + 1 < g and p.assignment[idx + g] != d:
            segments.append([(c / g, (r + 1) / g), ((c + 1) / g, (r + 1) / g)])
    segments.append([(0, 0), (1, 0)])
    segments.append([(1, 0), (1, 1)])
    segments.append([(1, 1), (0, 1)])
    segments.append([(0, 1), (0, 0)])
    ax.add_collection(LineCollection(segments, colors="black", linewidths=1.4))


def plot_plan(
    e: Electorate | None,
    p: CellPartition,
    path,
    title: str | None = None,
    dot_size: float | None = None,
) -> None:
    """Render a district map, with voter dots when the electorate is small.

    Electorates too large to materialize (beyond MATERIALIZE_LIMIT points)
    are drawn as districts only.
    """
    fig, ax = plt.subplots(figsize=(6, 6))
    _district_fills(p, ax)
    if e is not None and e.total <= MATERIALIZE_LIMIT:
        if dot_size is None:
            dot_size = max(0.3, 1800.0 / max(e.total, 1))
        ax.scatter(
            [float(x) for x, _ in e.a_points],
            [float(y) for _, y in e.a_points],
            s=dot_size,
            color="#1f4da0",
            linewidths=0,
            zorder=3,
        )
        ax.scatter(
            [float(x) for x, _ in e.b_points],
            [float(y) for _, y in e.b_points],
            s=dot_size,
            color="#c23b22",
            linewidths=0,
            zorder=3,
        )
    _district_boundaries(p, ax)
    ax.set_xlim(-0.01, 1.01)
    ax.set_ylim(-0.01, 1.01)
    ax.set_aspect("equal")
    ax.set_xticks([])
    ax.set_yticks([])
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_pareto(points, path, title: str | None = None) -> None:
    """Tradeoff frontier: |EG| against the achieved minimum compactness."""
    fig, ax = plt.subplots(figsize=(6, 4.5))
    xs = [pt.min_pp if pt.min_pp is not None else 0.0 for pt in points]
    ys = [float(pt.abs_eg) for pt in points]
    ax.plot(xs, ys, "o-", color="#1f4da0")
    for pt, x, y in zip(points, xs, ys):
        ax.annotate(
            f"floor {pt.pp_floor:g}",
            (x, y),
            textcoords="offset points",
            xytext=(6, 4),
            fontsize=8,
        )
    ax.set_xlabel("min Polsby-Popper score")
    ax.set_ylabel("|efficiency gap|")
    ax.grid(True, alpha=0.3)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_trace(trace, path, title: str | None = None) -> None:
    """Objective and best-seen objective along the annealing chain."""
    fig, ax = plt.subplots(figsize=(6, 4.5))
    steps = [t.step for t in trace]
    ax.plot(steps, [t.objective for t in trace], color="#999999", label="objective")
    ax.plot(
        steps,
        [t.best_objective for t in trace],
        color="#1f4da0",
        label="best seen",
    )
    ax2 = ax.twinx()
    ax2.plot(steps, [t.temperature for t in trace], color="#c23b22", alpha=0.4)
    ax2.set_ylabel("temperature", color="#c23b22")
    ax2.set_yscale("log")
    ax.set_xlabel("step")
    ax.set_ylabel("objective")
    ax.legend(loc="upper right")
    ax.grid(True, alpha=0.3)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
