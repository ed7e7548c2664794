"""Figure rendering for the report path.

Sweeps are drawn value-vs-eps on log-log axes; box-count series are drawn
N-vs-1/eps with the fitted slope annotated.  Figures are written to files
(Agg backend); no interactive windows.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .measure import ScaleSweep


def plot_sweeps(sweeps: list[tuple[str, ScaleSweep]], fig_path: str, title: str = ""):
    """Render one or more labeled sweeps as a log-log figure."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    drew = False
    for label, sweep in sweeps:
        eps = [e for e, _ in sweep.entries]
        vals = [m.value for _, m in sweep.entries]
        pos = [(e, v) for e, v in zip(eps, vals) if v > 0]
        if not pos:
            ax.plot(eps, vals, marker="o", label=f"{label} (all zero)")
            continue
        ax.loglog(*zip(*pos), marker="o", label=f"{label} [{sweep.trend}]")
        drew = True
    ax.set_xlabel(r"scale $\varepsilon$")
    ax.set_ylabel("pre-measure value")
    if drew:
        ax.invert_xaxis()  # refinement runs left to right
    if title:
        ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(fig_path, dpi=150)
    plt.close(fig)


def plot_box_counts(scales: list[float], counts: list[int], slope: float,
                    intercept: float, fig_path: str, title: str = ""):
    """Render a box-count regression: points plus the fitted line."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    x = np.log(1.0 / np.asarray(scales, dtype=float))
    y = np.log(np.asarray(counts, dtype=float))
    ax.plot(x, y, "o", label="observed")
    xs = np.linspace(x.min(), x.max(), 50)
    ax.plot(xs, slope * xs + intercept, "-",
            label=f"fit: slope {slope:.4f}")
    ax.set_xlabel(r"$\log(1/\varepsilon)$")
    ax.set_ylabel(r"$\log N(\varepsilon)$")
    if title:
        ax.set_title(title)
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(fig_path, dpi=150)
    plt.close(fig)
