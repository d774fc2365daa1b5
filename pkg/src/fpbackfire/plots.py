"""Figure rendering for curve and report outputs.

Kept separate from the CSV emitters so library consumers that never plot
don't pay for matplotlib. Figures render headlessly (Agg) straight to files.
"""

from __future__ import annotations

from pathlib import Path
from typing import Mapping, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .dataio import CurvePoint
from .metrics import ImprovementRow


def plot_curve(curves: Mapping[str, Sequence[CurvePoint]], path: str | Path) -> None:
    """Render conversion-ratio-versus-language-level curves to an image file.

    `curves` maps a legend label to its points; passing both the default and
    a calibrated curve overlays them for comparison.
    """
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for label, points in curves.items():
        ax.plot(
            [p.language_level for p in points],
            [p.ratio for p in points],
            marker="o", markersize=3.5, linewidth=1.2, label=label,
        )
    ax.set_xlabel("programming language level")
    ax.set_ylabel("conversion ratio (SLOC/FP)")
    ax.grid(True, alpha=0.3)
    if len(curves) > 1:
        ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_improvements(rows: Sequence[ImprovementRow], path: str | Path) -> None:
    """Render an experiment report as a grouped bar chart of improvements."""
    metrics = [
        ("MMRE", [r.mmre_improvement for r in rows]),
        ("MMER", [r.mmer_improvement for r in rows]),
        ("PRED(25%)", [r.pred25_improvement for r in rows]),
        ("PRED(50%)", [r.pred50_improvement for r in rows]),
    ]
    x = list(range(len(rows)))
    width = 0.2
    fig, ax = plt.subplots(figsize=(8, 4.5))
    for k, (label, values) in enumerate(metrics):
        ax.bar([xi + (k - 1.5) * width for xi in x], values, width=width, label=label)
    ax.axhline(0.0, color="black", linewidth=0.8)
    ax.set_xticks(x, [str(r.experiment_id) for r in rows])
    ax.set_xlabel("experiment")
    ax.set_ylabel("improvement (percentage points)")
    ax.grid(True, axis="y", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
