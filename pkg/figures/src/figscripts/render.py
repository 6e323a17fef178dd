"""Panel definitions and rendering.

Defaults: viridis
colormap with a log color scale for correlation heatmaps, log-log axes for
correlation curves, 150 dpi PNG output.  Rendering is read-only over its CSV
input and overwrites its output idempotently.
"""

import csv
import math
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.colors import LogNorm  # noqa: E402


class SchemaError(ValueError):
    """The CSV does not carry the columns a panel needs."""


@dataclass(frozen=True)
class FigureSpec:
    """How to turn one preset's table into one image panel."""

    preset: str
    panel: str                  # output stem, e.g. "fig2a" or "fig2cd_conditional"
    kind: str                   # "heatmap" or "lines"
    x: str                      # x-axis column
    y: str | None = None        # second axis column (heatmaps only)
    values: tuple = ("g2",)     # value column(s); several -> several curves
    x_scale: str = "log"
    y_scale: str = "log"
    log_values: bool = True     # log10 transform of correlation magnitudes
    where: tuple = ()           # ((column, value), ...) row filter


@dataclass
class RenderResult:
    """What was drawn, for tests and callers."""

    path: str
    panel: str
    series: int
    rows_used: int
    annotations: list = field(default_factory=list)


_TAU_CURVE = dict(kind="lines", x="tau", x_scale="log", y_scale="log")

PANELS: dict[str, tuple[FigureSpec, ...]] = {
    "fig2a": (FigureSpec("fig2a", "fig2a", "heatmap", "kappa", "omega_r"),),
    "fig2b": (FigureSpec("fig2b", "fig2b", "heatmap", "omega", "omega_r"),),
    "fig2cd": (
        FigureSpec("fig2cd", "fig2c", values=("g2_sigma",), **_TAU_CURVE),
        FigureSpec("fig2cd", "fig2d", values=("rho_ee_c",), **_TAU_CURVE),
    ),
    "fig3": (
        FigureSpec("fig3", "fig3b", "lines", "kappa", values=("g2",),
                   where=(("omega", 10.0),)),
        FigureSpec("fig3", "fig3d", "lines", "kappa", values=("g2",),
                   where=(("omega", 0.1),)),
    ),
    "fig3a": (FigureSpec("fig3a", "fig3a", values=("g2_sigma",), **_TAU_CURVE),),
    "fig3c": (FigureSpec("fig3c", "fig3c", values=("g2_sigma",), **_TAU_CURVE),),
    "fig4": (FigureSpec("fig4", "fig4", "lines", "kappa", values=("g2", "g3", "g4")),),
    "fig5b": (FigureSpec("fig5b", "fig5b", "heatmap", "kappa", "omega_b_field"),),
    "fig5c": (FigureSpec("fig5c", "fig5c", "lines", "kappa", values=("g2", "g3", "g4")),),
    "fig5e": (FigureSpec("fig5e", "fig5e", "heatmap", "kappa", "g_c"),),
    "fig5f": (FigureSpec("fig5f", "fig5f", "lines", "kappa", values=("g2", "g3", "g4")),),
    "fig6a": (FigureSpec("fig6a", "fig6a", "heatmap", "kappa", "omega_r", values=("Q",)),),
    "fig6b": (FigureSpec("fig6b", "fig6b", "heatmap", "omega", "omega_r", values=("Q",)),),
    "fig6c": (FigureSpec("fig6c", "fig6c", "heatmap", "kappa", "omega", values=("Q",)),),
    "fig7": (
        FigureSpec("fig7", "fig7", "lines", "delta_b", values=("g2",), x_scale="linear"),
    ),
}


def preset_panels() -> dict:
    """Preset name -> panel stems, for discovery."""
    return {name: tuple(s.panel for s in specs) for name, specs in PANELS.items()}


def panel_specs(preset: str) -> tuple:
    try:
        return PANELS[preset]
    except KeyError:
        raise SchemaError(
            f"unknown preset {preset!r}; known: {', '.join(sorted(PANELS))}"
        ) from None


def _read_table(csv_path) -> tuple[list, dict]:
    with open(csv_path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{csv_path} is empty (no header row)") from None
        rows = list(reader)
    table = {}
    for j, col in enumerate(header):
        table[col] = [row[j] for row in rows]
    return header, table


def _column(table, name, csv_path) -> np.ndarray:
    if name not in table:
        raise SchemaError(f"{csv_path} lacks required column {name!r}")
    return np.array([float(v) for v in table[name]])


def _select(spec: FigureSpec, table, csv_path):
    n = len(next(iter(table.values()))) if table else 0
    mask = np.ones(n, dtype=bool)
    for col, target in spec.where:
        vals = _column(table, col, csv_path)
        mask &= np.isclose(vals, target, rtol=1e-9)
    if "converged" in table and n:
        mask &= _column(table, "converged", csv_path) == 1
    return mask


def _blank_panel(ax, message: str):
    ax.text(0.5, 0.5, message, ha="center", va="center", transform=ax.transAxes)
    ax.set_xticks([])
    ax.set_yticks([])


def _required_columns(spec: FigureSpec):
    cols = [spec.x]
    if spec.y is not None:
        cols.append(spec.y)
    cols.extend(spec.values)
    cols.extend(col for col, _ in spec.where)
    return cols


def render_figure(csv_path, spec: FigureSpec, out_path) -> RenderResult:
    """Render one panel from a sweep table; returns what was drawn."""
    header, table = _read_table(csv_path)
    for col in _required_columns(spec):
        if col not in header:
            raise SchemaError(f"{csv_path} lacks required column {col!r}")
    result = RenderResult(path=str(out_path), panel=spec.panel, series=0, rows_used=0)

    fig, ax = plt.subplots(figsize=(5.0, 3.8), constrained_layout=True)
    try:
        n_rows = len(next(iter(table.values()))) if table else 0
        if n_rows == 0:
            _blank_panel(ax, "no data")
            result.annotations.append("no data")
        elif spec.kind == "heatmap":
            result = _render_heatmap(spec, table, csv_path, fig, ax, result)
        else:
            result = _render_lines(spec, table, csv_path, ax, result)
        ax.set_title(spec.panel)
        fig.savefig(out_path, dpi=150)
    finally:
        plt.close(fig)
    return result


def _render_heatmap(spec, table, csv_path, fig, ax, result):
    x = _column(table, spec.x, csv_path)
    y = _column(table, spec.y, csv_path)
    v = _column(table, spec.values[0], csv_path)
    mask = _select(spec, table, csv_path) & np.isfinite(v)
    if spec.log_values:
        mask &= v > 0
    xs = np.unique(x)
    ys = np.unique(y)
    grid = np.full((len(ys), len(xs)), np.nan)
    xi = np.searchsorted(xs, x)
    yi = np.searchsorted(ys, y)
    grid[yi[mask], xi[mask]] = v[mask]
    if not np.any(np.isfinite(grid)):
        _blank_panel(ax, "no data")
        result.annotations.append("no data")
        return result
    norm = LogNorm(vmin=np.nanmin(grid[grid > 0]), vmax=np.nanmax(grid)) if spec.log_values else None
    mesh = ax.pcolormesh(xs, ys, grid, norm=norm, cmap="viridis", shading="nearest")
    fig.colorbar(mesh, ax=ax, label=spec.values[0])
    ax.set_xscale(spec.x_scale)
    ax.set_yscale(spec.y_scale)
    ax.set_xlabel(spec.x)
    ax.set_ylabel(spec.y)
    result.series = 1
    result.rows_used = int(mask.sum())
    return result


def _render_lines(spec, table, csv_path, ax, result):
    x = _column(table, spec.x, csv_path)
    base_mask = _select(spec, table, csv_path)
    drew = 0
    used = 0
    for name in spec.values:
        v = _column(table, name, csv_path)
        mask = base_mask & np.isfinite(v)
        if spec.y_scale == "log":
            mask &= v > 0
        if not np.any(mask):
            continue
        order = np.argsort(x[mask])
        ax.plot(x[mask][order], v[mask][order], label=name)
        drew += 1
        used = max(used, int(mask.sum()))
    if drew == 0:
        _blank_panel(ax, "no data")
        result.annotations.append("no data")
        return result
    ax.set_xscale(spec.x_scale)
    ax.set_yscale(spec.y_scale)
    ax.set_xlabel(spec.x)
    ax.set_ylabel("value")
    if drew > 1:
        ax.legend()
    result.series = drew
    result.rows_used = used
    return result


def render_preset(preset: str, csv_path, out_dir) -> list:
    """Render every panel of a preset into ``out_dir``; returns the results."""
    import os

    os.makedirs(out_dir, exist_ok=True)
    out = []
    for spec in panel_specs(preset):
        path = os.path.join(out_dir, f"{spec.panel}.png")
        out.append(render_figure(csv_path, spec, path))
    return out
