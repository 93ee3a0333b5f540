"""Two-panel final-value figure from experiment CSV files.

Input is the simulation harness CSV (header
``rep,dataset,K,k0,k1,bk,mean_bk,batch,lb,ub``); this package never imports
the simulation library, only its file format.

Right panel: five boxplots (BK, mean BK, batch, LB, UB) over random
datasets, with the median line, notches, mean marker, IQR box, and whiskers
pinned to the 5%/95% quantiles.  Left panel: the same five processes for one
fixed dataset - BK as a distribution over its randomization (or a single
draw, by flag), the other four as single markers.  Vertical axis is log10
unless linear is requested.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from statistics import median

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

PROCESS_LABELS = ("BK", "mean BK", "batch", "LB", "UB")
PROCESS_COLUMNS = ("bk", "mean_bk", "batch", "lb", "ub")


def _box_stats(values: list[float], label: str) -> dict:
    """Boxplot statistics with whiskers pinned *at* the 5%/95% quantiles.

    matplotlib's whis=(5, 95) snaps whiskers to the most extreme datum inside
    the quantile range; the figure convention wants the quantiles themselves.
    """
    arr = np.asarray(values, dtype=float)
    q1, med, q3 = (float(np.percentile(arr, q)) for q in (25, 50, 75))
    notch = 1.57 * (q3 - q1) / math.sqrt(arr.size)
    return {
        "label": label,
        "mean": float(arr.mean()),
        "med": med,
        "q1": q1,
        "q3": q3,
        "whislo": float(np.percentile(arr, 5)),
        "whishi": float(np.percentile(arr, 95)),
        "cilo": med - notch,
        "cihi": med + notch,
        "fliers": [],
    }


@dataclass(frozen=True)
class FigureSpec:
    left_csv: str
    right_csv: str
    out: str
    log_scale: bool = True
    left_bk: str = "box"  # "box" = distribution over tau draws, "point" = one draw

    def __post_init__(self):
        if self.left_bk not in ("box", "point"):
            raise ValueError(f"left_bk must be 'box' or 'point', got {self.left_bk!r}")


def read_process_columns(path: str) -> dict[str, list[float]]:
    """Parse the harness CSV into per-process value lists."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise ValueError(f"{path}: empty CSV")
        missing = [c for c in PROCESS_COLUMNS if c not in reader.fieldnames]
        if missing:
            raise ValueError(f"{path}: missing column {missing[0]!r}")
        columns: dict[str, list[float]] = {c: [] for c in PROCESS_COLUMNS}
        for row in reader:
            for c in PROCESS_COLUMNS:
                columns[c].append(float(row[c]))
    if not columns["bk"]:
        raise ValueError(f"{path}: no data rows")
    return columns


def build_figure(spec: FigureSpec):
    """Assemble the two-panel figure; the caller saves or inspects it."""
    left = read_process_columns(spec.left_csv)
    right = read_process_columns(spec.right_csv)

    fig, (ax_left, ax_right) = plt.subplots(1, 2, figsize=(11, 4.5))

    # left panel: fixed dataset
    positions = list(range(1, 6))
    if spec.left_bk == "box":
        ax_left.bxp(
            [_box_stats(left["bk"], "BK")],
            positions=[1],
            shownotches=True,
            showmeans=True,
        )
    else:
        ax_left.plot([1], [left["bk"][0]], marker="o", linestyle="none", color="C0")
    for pos, col in zip(positions[1:], PROCESS_COLUMNS[1:]):
        ax_left.plot(
            [pos], [median(left[col])], marker="D", linestyle="none", color="C1"
        )
    ax_left.set_xticks(positions)
    ax_left.set_xticklabels(PROCESS_LABELS)
    ax_left.set_title("fixed dataset")

    # right panel: random datasets
    ax_right.bxp(
        [
            _box_stats(right[col], label)
            for col, label in zip(PROCESS_COLUMNS, PROCESS_LABELS)
        ],
        positions=positions,
        shownotches=True,
        showmeans=True,
    )
    ax_right.set_xticks(positions)
    ax_right.set_xticklabels(PROCESS_LABELS)
    ax_right.set_title("random datasets")

    for ax in (ax_left, ax_right):
        if spec.log_scale:
            ax.set_yscale("log")
        ax.set_ylabel("final value")

    fig.tight_layout()
    return fig


def render_figure(spec: FigureSpec) -> str:
    """Render and write the image; returns the output path."""
    fig = build_figure(spec)
    metadata = {"Date": None} if spec.out.endswith(".svg") else None
    fig.savefig(spec.out, dpi=150, metadata=metadata)
    plt.close(fig)
    return spec.out
