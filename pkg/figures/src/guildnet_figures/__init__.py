"""Figure rendering for guildnet run directories."""

__version__ = "0.1.0"

from .render import KINDS, FigureSpec, SchemaError, fmt_num, render

__all__ = ["KINDS", "FigureSpec", "SchemaError", "fmt_num", "render"]
