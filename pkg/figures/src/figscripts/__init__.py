"""Figure rendering for shelvesim sweep tables.

Consumes the CSV files written by ``shelvesim run`` and turns each figure
reference figure panel into an image: heatmaps for two-axis sweeps,
log-log curve plots for one-axis sweeps and delay curves.
"""

__version__ = "0.1.0"

from .render import (
    FigureSpec,
    RenderResult,
    SchemaError,
    panel_specs,
    preset_panels,
    render_figure,
    render_preset,
)

__all__ = [
    "__version__",
    "FigureSpec",
    "RenderResult",
    "SchemaError",
    "panel_specs",
    "preset_panels",
    "render_figure",
    "render_preset",
]
