"""Figures for ``bench`` output."""

from __future__ import annotations

from collections import defaultdict
from typing import Iterable, Mapping

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

STYLE = {
    "figure.figsize": (8, 3.2),
    "font.size": 10,
    "axes.labelsize": 10,
    "legend.fontsize": 9,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "savefig.dpi": 150,
}

MARKERS = {"mmm": "o", "generic": "s"}


def plot_bench(rows: Iterable[Mapping], path: str) -> None:
    """Matrix-vector products and wall time against D, one series per strategy."""
    series: dict[str, list[tuple[int, int, float]]] = defaultdict(list)
    for row in rows:
        series[row["strategy"]].append((int(row["D"]), int(row["matvec_total"]), float(row["wall_ms"])))

    with plt.rc_context(STYLE):
        fig, (ax_cost, ax_time) = plt.subplots(1, 2)
        for strategy, pts in sorted(series.items()):
            pts.sort()
            D = [p[0] for p in pts]
            marker = MARKERS.get(strategy, "^")
            ax_cost.scatter(D, [p[1] for p in pts], marker=marker, s=18, alpha=0.7, label=strategy)
            ax_time.scatter(D, [p[2] for p in pts], marker=marker, s=18, alpha=0.7, label=strategy)
        ax_cost.set_xlabel("D")
        ax_cost.set_ylabel("matrix-vector products")
        ax_time.set_xlabel("D")
        ax_time.set_ylabel("wall time [ms]")
        ax_time.set_yscale("log")
        ax_cost.legend(frameon=False)
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)
