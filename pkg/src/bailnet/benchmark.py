"""Binary-tree stress network and the defaults-versus-budget sweep.

The tree is a worst case for contagion: every node except the leaves
owes each child an amount that doubles toward the root, nobody holds
cash, so with no help every borrower (non-leaf) defaults.  Cash injected
near the root cascades down and can repair whole subtrees at once, and
the best achievable default count has a closed form driven by the binary
digits of the budget.  That makes the tree a sharp end-to-end check: the
heuristic optimizer's curve can be compared point by point against the
exact one.
"""

from __future__ import annotations

import csv
import math
import time
from dataclasses import dataclass
from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

from .lp import LpError
from .network import ClearingError, LiabilityNetwork, relative_liabilities
from .optimize import ReweightParams, minimize_defaults

__all__ = [
    "TreeSpec",
    "binary_tree_network",
    "generalized_tree_defaults",
    "optimal_tree_defaults",
    "default_budget_grid",
    "FigureRow",
    "reproduce_figure",
    "write_figure_csv",
    "write_figure_svg",
    "run_figure",
]


@dataclass(frozen=True)
class TreeSpec:
    """Complete binary tree with ``levels`` levels, root at level 0."""

    levels: int = 10

    def __post_init__(self) -> None:
        if self.levels < 2:
            raise ValueError("a tree needs at least 2 levels")

    @property
    def node_count(self) -> int:
        return 2 ** self.levels - 1

    @property
    def borrower_count(self) -> int:
        """Non-leaf nodes; exactly these default when nothing is injected."""
        return 2 ** (self.levels - 1) - 1

    @property
    def zero_default_budget(self) -> int:
        """Smallest injection that repairs every node."""
        return 2 ** (self.levels + 1)


def binary_tree_network(spec: TreeSpec) -> LiabilityNetwork:
    """Breadth-first indexed tree; node ``i`` has children ``2i+1, 2i+2``.

    A node at level ``s`` owes ``2 ** (levels - s)`` to each child, so
    obligations double from ``4`` per edge at the deepest borrowers to
    ``2 ** levels`` at the root.  All cash positions are zero.
    """
    n = spec.node_count
    liabilities = np.zeros((n, n))
    for i in range(spec.borrower_count):
        level = (i + 1).bit_length() - 1
        amount = float(2 ** (spec.levels - level))
        liabilities[i, 2 * i + 1] = amount
        liabilities[i, 2 * i + 2] = amount
    labels = tuple(str(i) for i in range(n))
    return LiabilityNetwork(liabilities, np.zeros(n), node_labels=labels)


def generalized_tree_defaults(budget: float, levels: int) -> int:
    """Fewest defaults achievable on the tree for a given budget.

    The optimum is driven by the binary digits of the budget: the digit
    at position ``u >= 3`` buys a repaired subtree containing
    ``2 ** (u - 2) - 1`` borrowers, and at ``2 ** (levels + 1)`` the whole
    tree is repaired.  Verified by exhaustive search on small trees and
    by running the clearing engine on explicit placements.
    """
    if levels < 2:
        raise ValueError("a tree needs at least 2 levels")
    if not math.isfinite(budget) or budget < 0:
        raise ValueError("budget must be finite and nonnegative")
    whole = int(math.floor(budget))
    if whole >= 2 ** (levels + 1):
        return 0
    saved = 0
    for digit in range(3, whole.bit_length()):
        if whole >> digit & 1:
            saved += 2 ** (digit - 2) - 1
    return max(0, 2 ** (levels - 1) - 1 - saved)


def optimal_tree_defaults(budget: float) -> int:
    """Closed-form optimum for the standard 10-level tree."""
    return generalized_tree_defaults(budget, levels=10)


def default_budget_grid(spec: TreeSpec) -> list[float]:
    """Evenly spaced budgets from zero through full repair, 32 steps."""
    top = spec.zero_default_budget
    step = max(1, top // 32)
    return [float(b) for b in range(0, top + 1, step)]


@dataclass(frozen=True)
class FigureRow:
    budget: float
    optimal_defaults: int
    algorithm_defaults: int | None = None
    algorithm_unpaid: float | None = None
    wall_time_ms: float | None = None
    error: str | None = None


def reproduce_figure(spec: TreeSpec, budgets: list[float] | None = None,
                     params: ReweightParams | None = None) -> list[FigureRow]:
    """Sweep the optimizer over a budget grid on the tree.

    Each row pairs the closed-form optimum with what the reweighted
    heuristic actually achieved.  A budget where the optimizer fails is
    recorded with its error instead of aborting the sweep.
    """
    if budgets is None:
        budgets = default_budget_grid(spec)
    budgets = sorted(float(b) for b in budgets)
    if budgets and budgets[0] < 0:
        raise ValueError("budgets must be nonnegative")
    net = binary_tree_network(spec)
    rel = relative_liabilities(net)
    rows: list[FigureRow] = []
    for budget in budgets:
        optimal = generalized_tree_defaults(budget, spec.levels)
        started = time.perf_counter()
        try:
            result = minimize_defaults(net, budget, params=params, rel=rel)
        except (LpError, ClearingError) as exc:
            rows.append(FigureRow(budget=budget, optimal_defaults=optimal,
                                  error=str(exc)))
            continue
        elapsed_ms = (time.perf_counter() - started) * 1000.0
        rows.append(FigureRow(budget=budget, optimal_defaults=optimal,
                              algorithm_defaults=result.outcome.n_defaults,
                              algorithm_unpaid=result.outcome.unpaid_total,
                              wall_time_ms=elapsed_ms))
    return rows


def _cell(value: float | int | None, digits: int = 6) -> str:
    if value is None:
        return ""
    rounded = round(float(value), digits)
    if rounded == int(rounded):
        return str(int(rounded))
    return repr(rounded)


def write_figure_csv(rows: list[FigureRow], path: Path | str) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["budget", "optimal_defaults", "algorithm_defaults",
                         "algorithm_unpaid", "wall_time_ms", "error"])
        for row in rows:
            writer.writerow([
                _cell(row.budget),
                _cell(row.optimal_defaults),
                _cell(row.algorithm_defaults),
                _cell(row.algorithm_unpaid),
                _cell(row.wall_time_ms, digits=3),
                row.error or "",
            ])


def write_figure_svg(rows: list[FigureRow], path: Path | str,
                     title: str = "Defaults vs cash injected") -> None:
    """Self-contained line chart: closed-form optimum vs heuristic."""
    width, height = 760, 480
    left, right, top, bottom = 64, 16, 44, 56
    plot_w = width - left - right
    plot_h = height - top - bottom

    budgets = [r.budget for r in rows]
    x_lo = min(budgets, default=0.0)
    x_hi = max(budgets, default=1.0)
    if x_hi <= x_lo:
        x_hi = x_lo + 1.0
    y_hi = 1.0
    for row in rows:
        y_hi = max(y_hi, float(row.optimal_defaults))
        if row.algorithm_defaults is not None:
            y_hi = max(y_hi, float(row.algorithm_defaults))

    def sx(x: float) -> float:
        return left + (x - x_lo) / (x_hi - x_lo) * plot_w

    def sy(y: float) -> float:
        return top + plot_h - y / y_hi * plot_h

    def polyline(points: list[tuple[float, float]], color: str,
                 dash: str = "") -> str:
        if not points:
            return ""
        coords = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in points)
        extra = f' stroke-dasharray="{dash}"' if dash else ""
        return (f'<polyline fill="none" stroke="{color}" stroke-width="2"'
                f'{extra} points="{coords}"/>')

    optimal_pts = [(r.budget, float(r.optimal_defaults)) for r in rows]
    algorithm_pts = [(r.budget, float(r.algorithm_defaults)) for r in rows
                     if r.algorithm_defaults is not None]

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.0f}" y="24" text-anchor="middle" '
        f'font-size="15">{escape(title)}</text>',
    ]
    for i in range(5):
        frac = i / 4
        gx = left + frac * plot_w
        gy = top + plot_h - frac * plot_h
        x_val = x_lo + frac * (x_hi - x_lo)
        y_val = frac * y_hi
        parts.append(f'<line x1="{gx:.1f}" y1="{top}" x2="{gx:.1f}" '
                     f'y2="{top + plot_h}" stroke="#dddddd"/>')
        parts.append(f'<line x1="{left}" y1="{gy:.1f}" x2="{left + plot_w}" '
                     f'y2="{gy:.1f}" stroke="#dddddd"/>')
        parts.append(f'<text x="{gx:.1f}" y="{top + plot_h + 18}" '
                     f'text-anchor="middle">{_cell(x_val)}</text>')
        parts.append(f'<text x="{left - 8}" y="{gy + 4:.1f}" '
                     f'text-anchor="end">{_cell(y_val)}</text>')
    parts.append(f'<line x1="{left}" y1="{top + plot_h}" x2="{left + plot_w}" '
                 f'y2="{top + plot_h}" stroke="#333333"/>')
    parts.append(f'<line x1="{left}" y1="{top}" x2="{left}" '
                 f'y2="{top + plot_h}" stroke="#333333"/>')
    parts.append(polyline(optimal_pts, "#4477aa"))
    parts.append(polyline(algorithm_pts, "#ee6677", dash="6 3"))
    lx = left + plot_w - 230
    parts.append(f'<line x1="{lx}" y1="{top + 12}" x2="{lx + 28}" '
                 f'y2="{top + 12}" stroke="#4477aa" stroke-width="2"/>')
    parts.append(f'<text x="{lx + 34}" y="{top + 16}">closed-form optimum</text>')
    parts.append(f'<line x1="{lx}" y1="{top + 30}" x2="{lx + 28}" y2="{top + 30}" '
                 f'stroke="#ee6677" stroke-width="2" stroke-dasharray="6 3"/>')
    parts.append(f'<text x="{lx + 34}" y="{top + 34}">reweighted heuristic</text>')
    parts.append(f'<text x="{left + plot_w / 2:.0f}" y="{height - 14}" '
                 f'text-anchor="middle">cash injected</text>')
    parts.append(f'<text x="18" y="{top + plot_h / 2:.0f}" text-anchor="middle" '
                 f'transform="rotate(-90 18 {top + plot_h / 2:.0f})">'
                 f'defaulting nodes</text>')
    parts.append('</svg>')
    Path(path).write_text("\n".join(p for p in parts if p) + "\n")


def run_figure(spec: TreeSpec, budgets: list[float] | None = None,
               params: ReweightParams | None = None,
               out_dir: Path | str = ".") -> dict:
    """Produce the sweep plus its CSV and SVG files; returns a manifest."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows = reproduce_figure(spec, budgets=budgets, params=params)
    csv_path = out / f"tree{spec.levels}_defaults.csv"
    svg_path = out / f"tree{spec.levels}_defaults.svg"
    write_figure_csv(rows, csv_path)
    write_figure_svg(rows, svg_path)
    failed = sum(1 for r in rows if r.error is not None)
    return {
        "levels": spec.levels,
        "rows": len(rows),
        "failed": failed,
        "csv": str(csv_path),
        "svg": str(svg_path),
    }
