"""Figure-panel rendering from simulator CSV output.

The renderer performs no physics: every plotted value is read verbatim from
the CSV columns.  Styling is fixed so repeated renders of the same inputs
are byte-identical.
"""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

PANELS = ("a", "b", "c", "d")

PANEL_TITLES = {
    "a": "(a) concurrence, no deformation",
    "b": "(b) concurrence, systematic deformation",
    "c": "(c) concurrence, stochastic deformation",
    "d": "(d) populations, stochastic deformation",
}

#: files render_report expects inside a reproduce output directory
REPORT_FILES = {panel: f"panel_{panel}.csv" for panel in PANELS}
TIMESCALE_FILE = "timescales.csv"

_LINE_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b")


@dataclass(frozen=True)
class PanelSpec:
    """One panel: source CSV, panel kind, columns to draw, output path."""

    csv_path: str
    panel: str
    series_columns: tuple = ()
    output_image: str = "panel.png"

    def __post_init__(self):
        if self.panel not in PANELS:
            raise ValueError(f"panel must be one of {PANELS}, "
                             f"got {self.panel!r}")
        object.__setattr__(self, "series_columns",
                           tuple(self.series_columns))


def read_columns(path: str) -> dict[str, np.ndarray]:
    """CSV -> {column: float array}; header row is mandatory."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: missing header row") from None
        rows = [[float(cell) for cell in row] for row in reader if row]
    data = np.array(rows, dtype=float).reshape(len(rows), len(header))
    return {name: data[:, i] for i, name in enumerate(header)}


def default_columns(panel: str, available) -> tuple:
    if panel == "d":
        return ("rho11", "rho44")
    if panel == "b":
        swept = tuple(c for c in available if c.startswith("concurrence"))
        if swept:
            return swept
    return ("concurrence",)


def _resolve_spec(spec: PanelSpec) -> tuple[dict, tuple]:
    data = read_columns(spec.csv_path)
    columns = spec.series_columns or default_columns(spec.panel, data)
    missing = [c for c in ("t",) + tuple(columns) if c not in data]
    if missing:
        raise ValueError(f"{spec.csv_path}: missing column(s) "
                         + ", ".join(missing))
    if spec.panel == "d":
        pops = {"rho11", "rho44"}
        if not pops.issubset(columns):
            raise ValueError("panel d requires the population columns "
                             "rho11 and rho44")
    return data, tuple(columns)


def _draw_panel(ax, spec: PanelSpec, data: dict, columns: tuple):
    for i, column in enumerate(columns):
        ax.plot(data["t"], data[column], lw=1.2,
                color=_LINE_COLORS[i % len(_LINE_COLORS)], label=column)
    if spec.panel == "d":
        ax.axhline(0.5, color="0.4", lw=0.8, ls="--")
    ax.set_xlabel("t")
    ax.set_ylabel("population" if spec.panel == "d" else "concurrence")
    ax.set_title(PANEL_TITLES[spec.panel], fontsize=10)
    if len(columns) > 1:
        ax.legend(fontsize=7, frameon=False)


def build_panel_figure(spec: PanelSpec):
    """Figure for one panel; exposed so tests can diff the plotted arrays."""
    data, columns = _resolve_spec(spec)
    fig, ax = plt.subplots(figsize=(4.8, 3.2), dpi=120)
    _draw_panel(ax, spec, data, columns)
    fig.tight_layout()
    return fig


def render_panel(spec: PanelSpec) -> str:
    """Render one panel to spec.output_image and return the path."""
    fig = build_panel_figure(spec)
    try:
        fig.savefig(spec.output_image)
    finally:
        plt.close(fig)
    return spec.output_image


def _read_timescales(path: str) -> list[tuple[str, str]]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != ["quantity", "seconds"]:
            raise ValueError(f"{path}: unexpected header {header}")
        return [(row[0], f"{float(row[1]):.3e} s") for row in reader if row]


def build_report_figure(directory: str):
    """Composite 2x2 panel grid plus the timescale table."""
    missing = [name for name in list(REPORT_FILES.values()) + [TIMESCALE_FILE]
               if not os.path.exists(os.path.join(directory, name))]
    if missing:
        raise ValueError("missing report inputs: " + ", ".join(sorted(missing)))
    fig = plt.figure(figsize=(9.6, 9.0), dpi=120)
    grid = fig.add_gridspec(3, 2, height_ratios=(1.0, 1.0, 0.6))
    for i, panel in enumerate(PANELS):
        spec = PanelSpec(csv_path=os.path.join(directory, REPORT_FILES[panel]),
                         panel=panel)
        data, columns = _resolve_spec(spec)
        ax = fig.add_subplot(grid[divmod(i, 2)])
        _draw_panel(ax, spec, data, columns)
    ax_table = fig.add_subplot(grid[2, :])
    ax_table.axis("off")
    rows = _read_timescales(os.path.join(directory, TIMESCALE_FILE))
    table = ax_table.table(cellText=rows, colLabels=("quantity", "seconds"),
                           loc="center", cellLoc="left")
    table.auto_set_font_size(False)
    table.set_fontsize(8)
    fig.tight_layout()
    return fig


def render_report(directory: str, output_image: str) -> str:
    """Render the composite report and return the image path."""
    fig = build_report_figure(directory)
    try:
        fig.savefig(output_image)
    finally:
        plt.close(fig)
    return output_image
