"""Single-draw study: bound quantile curves above a quantile box plot.

The boxes are rebuilt from the CSV's pre-computed quantiles (the
renderer never recomputes statistics): the 0.25-level value is the
upper box edge, the 0.75-level value the lower edge, the 0.5-level the
center dash, and the whiskers span the recorded support of the gaps.
"""

from __future__ import annotations

import numpy as np
from matplotlib.patches import Rectangle

from ._common import DELTA_COLORS, new_figure

N_PANELS = 2


def build(data, title=""):
    fig, (ax_bound, ax_box) = new_figure(2)
    ns = data.numeric("N")
    deltas = data.numeric("delta")
    bound = data.numeric("thm5_bound_quantile")
    gap_q = data.numeric("empirical_quantile_gap")
    gmin = data.numeric("gap_min")
    gmax = data.numeric("gap_max")

    by_delta: dict[float, list[tuple[float, float]]] = {}
    per_n: dict[float, dict[float, float]] = {}
    support: dict[float, tuple[float, float]] = {}
    for i, (n, d) in enumerate(zip(ns, deltas)):
        by_delta.setdefault(d, []).append((n, bound[i]))
        per_n.setdefault(n, {})[d] = gap_q[i]
        support[n] = (gmin[i], gmax[i])

    for d, points in sorted(by_delta.items()):
        points.sort()
        ax_bound.plot([p[0] for p in points], [p[1] for p in points], marker="o",
                      color=DELTA_COLORS.get(d), label=f"confidence {d}")
    ax_bound.set_ylabel("single-draw bound")
    ax_bound.set_title(title or "Single-draw bound quantiles (top)")
    ax_bound.legend(fontsize=7)

    n_sorted = sorted(per_n)
    width = 0.35 * (float(np.min(np.diff(n_sorted))) if len(n_sorted) > 1 else 1.0)
    for n in n_sorted:
        q = per_n[n]
        top, mid, bot = q[0.25], q[0.5], q[0.75]
        lo, hi = support[n]
        ax_box.add_patch(Rectangle((n - width / 2, bot), width, top - bot,
                                   fill=False, edgecolor="black", linewidth=1.0))
        ax_box.hlines(mid, n - width / 2, n + width / 2, color="tab:red")
        ax_box.vlines(n, hi, top, color="black", linewidth=0.8)
        ax_box.vlines(n, lo, bot, color="black", linewidth=0.8)
        ax_box.hlines([lo, hi], n - width / 4, n + width / 4, color="black",
                      linewidth=0.8)
    ax_box.set_xlabel("number of tasks N")
    ax_box.set_ylabel("gap distribution")
    ax_box.set_title("Empirical gap quantile boxes (bottom)")
    ax_box.set_xlim(min(n_sorted) - 1, max(n_sorted) + 1)
    ax_box.autoscale_view()
    return fig
