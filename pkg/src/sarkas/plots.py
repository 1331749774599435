"""Matplotlib rendering for reports.

Figures are written to files next to the delimited report output; the
Agg backend keeps this headless-safe.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

_BAR_COLORS = ("#4878d0", "#ee854a", "#6acc64", "#d65f5f", "#956cb4")


def experiment_bars(report, path):
    """Grouped accuracy bars, one group per algorithm."""
    conditions = [c for c in report.conditions
                  if any((a, c) in report.cells for a in report.algorithms)]
    algorithms = list(report.algorithms)
    width = 0.8 / max(len(conditions), 1)
    x = np.arange(len(algorithms))

    fig, ax = plt.subplots(figsize=(1.8 + 1.9 * len(algorithms), 4.0))
    for j, cond in enumerate(conditions):
        heights = [report.cells[(a, cond)].accuracy
                   if (a, cond) in report.cells else 0.0
                   for a in algorithms]
        offset = (j - (len(conditions) - 1) / 2) * width
        bars = ax.bar(x + offset, heights, width * 0.92, label=cond,
                      color=_BAR_COLORS[j % len(_BAR_COLORS)])
        ax.bar_label(bars, fmt="%.2f", fontsize=7, padding=1)
    ax.set_xticks(x)
    ax.set_xticklabels(algorithms)
    ax.set_ylim(0.0, 1.05)
    ax.set_ylabel("accuracy")
    ax.set_title(f"{report.name} (seed {report.seed})")
    ax.legend(fontsize=8, loc="lower right")
    ax.grid(axis="y", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def confusion_heatmap(metrics, path, title="confusion"):
    """Gold-by-predicted count heatmap for one Metrics object."""
    matrix = np.asarray(metrics.confusion)
    k = len(metrics.classes)
    fig, ax = plt.subplots(figsize=(1.6 + 0.9 * k, 1.4 + 0.9 * k))
    im = ax.imshow(matrix, cmap="Blues")
    ax.set_xticks(range(k), metrics.classes)
    ax.set_yticks(range(k), metrics.classes)
    ax.set_xlabel("predicted")
    ax.set_ylabel("gold")
    ax.set_title(f"{title} (accuracy {metrics.accuracy:.3f})")
    threshold = matrix.max() / 2 if matrix.max() else 0.5
    for i in range(k):
        for j in range(k):
            ax.text(j, i, str(matrix[i][j]), ha="center", va="center",
                    color="white" if matrix[i][j] > threshold else "black",
                    fontsize=9)
    fig.colorbar(im, ax=ax, shrink=0.8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
