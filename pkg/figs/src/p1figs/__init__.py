"""Figure rendering for painleve1 comparison artifacts."""

from .io import GridTable, SchemaError, read_grid, read_report, write_grid
from .render import DEFAULT_CLIP, PANELS, FigureSpec, render

__version__ = "0.1.0"

__all__ = ["DEFAULT_CLIP", "FigureSpec", "GridTable", "PANELS", "SchemaError",
           "read_grid", "read_report", "render", "write_grid"]
