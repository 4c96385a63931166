"""Figure rendering for qst-disorder-lab CSV tables."""

from .render import FigureRecipe, SchemaError, build_figure, read_table, render

__version__ = "0.1.0"

__all__ = ["FigureRecipe", "SchemaError", "build_figure", "read_table", "render"]
