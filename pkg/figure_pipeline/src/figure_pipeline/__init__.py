"""Figure rendering for changepoint-experiment CSV output."""

from .render import FigureSpec, build_figure, read_process_columns, render_figure

__all__ = ["FigureSpec", "build_figure", "read_process_columns", "render_figure"]
