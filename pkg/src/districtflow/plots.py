"""Static report figures for the analyze command.

Rendered with the Agg backend so runs work headless; one PNG per figure,
written next to the delimited analysis tables.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .analysis import Ensemble, SeatBand  # noqa: E402


def ir_boxplot(ensembles: list[Ensemble], path: Path) -> None:
    fig, ax = plt.subplots(figsize=(1.6 + 1.2 * len(ensembles), 4.0))
    data = [e.values("ir") for e in ensembles]
    ax.boxplot(data, tick_labels=[e.label for e in ensembles])
    ax.set_ylabel("interaction ratio")
    ax.set_title("IR distribution per ensemble")
    ax.grid(True, axis="y", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def seat_band_bars(bands_by_label: dict[str, list[SeatBand]], path: Path) -> None:
    n = len(bands_by_label)
    fig, axes = plt.subplots(1, n, figsize=(4.5 * n, 3.6), squeeze=False)
    for ax, (label, bands) in zip(axes[0], sorted(bands_by_label.items())):
        xs = range(len(bands))
        counts = [b.count for b in bands]
        ax.bar(xs, counts, color="#4878a8")
        ax.set_xticks(list(xs))
        ax.set_xticklabels([f"({b.seats_dem},{b.seats_rep})" for b in bands])
        for x, band in zip(xs, bands):
            ax.annotate(f"{band.mean_efficiency_gap:+.3f}",
                        (x, band.count), ha="center", va="bottom", fontsize=8)
        ax.set_xlabel("(dem, rep) seats")
        ax.set_ylabel("plans")
        ax.set_title(label)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def metric_cube(point_rows: list[list], path: Path) -> None:
    """3D scatter of compactness, efficiency gap, and IR, one color per
    ensemble; the static twin of the explorer's interactive cube."""
    header, rows = point_rows[0], point_rows[1:]
    idx = {name: i for i, name in enumerate(header)}
    labels = sorted({row[idx["ensemble"]] for row in rows})
    cmap = plt.get_cmap("tab10")

    fig = plt.figure(figsize=(6.5, 5.5))
    ax = fig.add_subplot(projection="3d")
    for j, label in enumerate(labels):
        pts = [row for row in rows if row[idx["ensemble"]] == label]
        ax.scatter(
            [p[idx["compactness"]] for p in pts],
            [p[idx["efficiency_gap"]] for p in pts],
            [p[idx["ir"]] for p in pts],
            s=8, alpha=0.55, color=cmap(j % 10), label=label,
        )
    ax.set_xlabel("compactness")
    ax.set_ylabel("efficiency gap")
    ax.set_zlabel("interaction ratio")
    ax.legend(loc="upper left", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
