"""Overlay and residual figures from a comparison grid and its report.

Panels:
  y          numeric vs asymptotic solution overlay
  h          numeric vs asymptotic Hamiltonian overlay
  residuals  log-log |numeric - asymptotic| with envelope maxima and the
             fitted slope guide line from the report JSON

Masked regions (pole neighborhoods of singular solutions) are shaded;
spiky singular-case y values are clipped for readability (clip = 50 by
default).  The renderer only draws: re-exporting its table reproduces the
input CSV byte for byte.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .io import GridTable, read_grid, read_report  # noqa: E402

PANELS = ("y", "h", "residuals")
DEFAULT_CLIP = 50.0


@dataclass(frozen=True)
class FigureSpec:
    grid_csv: str
    report_json: str
    out_path: str
    panel: str = "y"
    clip: Optional[float] = DEFAULT_CLIP

    def __post_init__(self):
        if self.panel not in PANELS:
            raise ValueError(f"panel must be one of {PANELS}, got {self.panel!r}")


def _masked_runs(x: np.ndarray, masked: np.ndarray):
    """Contiguous masked index runs as (x_start, x_end) spans."""
    runs = []
    start = None
    for i, flag in enumerate(masked):
        if flag and start is None:
            start = i
        elif not flag and start is not None:
            runs.append((x[start], x[i - 1]))
            start = None
    if start is not None:
        runs.append((x[start], x[-1]))
    return runs


def _shade_mask(ax, table: GridTable):
    for lo, hi in _masked_runs(table.x, table.masked):
        ax.axvspan(lo, hi, color="0.85", zorder=0, linewidth=0)


def _overlay_panel(ax, table: GridTable, which: str, clip: Optional[float]):
    num = table.y_num if which == "y" else table.h_num
    asym = table.y_asym if which == "y" else table.h_asym
    ax.plot(table.x, num, color="tab:blue", lw=1.0, label="numerical")
    ax.plot(table.x, asym, color="tab:red", lw=1.0, ls="--", label="asymptotic")
    _shade_mask(ax, table)
    if clip is not None and which == "y" and np.nanmax(np.abs(num)) > clip:
        ax.set_ylim(-clip, clip)
    ax.set_xlabel("x")
    ax.set_ylabel("y(x)" if which == "y" else "H(x)")
    ax.legend(loc="best", fontsize=8)


def _residual_panel(ax, table: GridTable, report: dict):
    keep = ~table.masked
    x = -table.x[keep]
    r = np.abs(table.y_num - table.y_asym)[keep]
    pos = r > 0.0
    x, r = x[pos], r[pos]
    ax.plot(x, r, color="0.6", lw=0.5, label="|residual|")
    peaks = [i for i in range(1, len(r) - 1) if r[i] >= r[i - 1] and r[i] >= r[i + 1]]
    ax.plot(x[peaks], r[peaks], ".", color="tab:blue", ms=4, label="envelope maxima")
    slope = report["exp_y"]["value"]
    if peaks:
        # anchor the guide line at the median envelope point
        xm = x[peaks[len(peaks) // 2]]
        rm = r[peaks[len(peaks) // 2]]
        xs = np.array([x.min(), x.max()])
        ax.plot(xs, rm * (xs / xm) ** slope, color="tab:red", lw=1.0,
                label=f"slope {slope:.2f}")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("-x")
    ax.set_ylabel("|y_num - y_asym|")
    ax.legend(loc="best", fontsize=8)


def render(spec: FigureSpec) -> Path:
    """Render one panel to spec.out_path (format from the suffix: png/svg)."""
    table = read_grid(spec.grid_csv)
    report = read_report(spec.report_json)
    fig, ax = plt.subplots(figsize=(6.4, 4.0), dpi=150)
    if spec.panel in ("y", "h"):
        _overlay_panel(ax, table, spec.panel, spec.clip)
        ax.set_title(f"{report['preset']}: {spec.panel} overlay to x = {report['x_min']}")
    else:
        _residual_panel(ax, table, report)
        ax.set_title(f"{report['preset']}: residual decay")
    fig.tight_layout()
    out = Path(spec.out_path)
    fig.savefig(out)
    plt.close(fig)
    return out
