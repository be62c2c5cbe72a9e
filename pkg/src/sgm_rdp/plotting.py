"""Figures rendered from sweep rows.

Left panel: the largest order admitted by each closed-form condition, as a
function of q, one set of curves per sigma. Right panel: exact RDP against
the closed-form bound, per (q, sigma).
"""

from __future__ import annotations

from collections import defaultdict
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .sweep import SweepRow  # noqa: E402

MAX_LEGEND_CURVES = 8


def max_orders_by_q(rows: Sequence[SweepRow]):
    """Per sigma: q -> largest alpha passing cond1, cond2, both, and exact <= 2q^2a/s^2."""
    table = defaultdict(lambda: defaultdict(lambda: [None, None, None, None]))
    for r in rows:
        slot = table[r.sigma][r.q]
        tests = (
            r.cond_alpha1,
            r.cond_alpha2,
            r.eps_bound is not None,
            r.eps_exact <= 2.0 * r.q * r.q * r.alpha / (r.sigma * r.sigma),
        )
        for i, ok in enumerate(tests):
            if ok and (slot[i] is None or r.alpha > slot[i]):
                slot[i] = r.alpha
    return table


def plot_sweep(rows: Sequence[SweepRow], path: str | Path, dpi: int = 150) -> Path:
    path = Path(path)
    fig, (left, right) = plt.subplots(1, 2, figsize=(11, 4.5))

    labels = ("condition 1", "condition 2", "both", "exact")
    styles = (":", "--", "-", "-.")
    for sigma, by_q in sorted(max_orders_by_q(rows).items()):
        qs = sorted(by_q)
        for i, (label, ls) in enumerate(zip(labels, styles)):
            pts = [(q, by_q[q][i]) for q in qs if by_q[q][i] is not None]
            if pts:
                x, y = zip(*pts)
                left.plot(x, y, ls, label=f"sigma={sigma:g}, {label}")
    left.set_xscale("log")
    left.set_yscale("log")
    left.set_xlabel("q")
    left.set_ylabel("max alpha")
    left.legend(fontsize=7)

    curves = defaultdict(list)
    for r in rows:
        curves[(r.q, r.sigma)].append(r)
    for (q, sigma), pts in sorted(curves.items()):
        pts.sort(key=lambda r: r.alpha)
        line, = right.plot([r.alpha for r in pts], [r.eps_exact for r in pts],
                           label=f"q={q:g}, sigma={sigma:g} exact")
        bounded = [r for r in pts if r.eps_bound is not None]
        if bounded:
            right.plot([r.alpha for r in bounded], [r.eps_bound for r in bounded], "--",
                       color=line.get_color(), label=f"q={q:g}, sigma={sigma:g} bound")
    right.set_xscale("log")
    right.set_yscale("log")
    right.set_xlabel("alpha")
    right.set_ylabel("RDP epsilon")
    if len(curves) <= MAX_LEGEND_CURVES:
        right.legend(fontsize=7)
    else:
        right.set_title("solid: exact, dashed: bound", fontsize=9)

    fig.tight_layout()
    fig.savefig(path, dpi=dpi)
    plt.close(fig)
    return path
