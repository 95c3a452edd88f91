"""Render the lmg-tunnel CSV datasets into publication-style figures."""

__version__ = "0.1.0"

from .io import FIGURE_SCHEMAS, LoadedDataset, SchemaError, load_dataset
from .render import FigureSpec, build_figure, default_spec, render

__all__ = [
    "FIGURE_SCHEMAS",
    "LoadedDataset",
    "SchemaError",
    "load_dataset",
    "FigureSpec",
    "build_figure",
    "default_spec",
    "render",
    "__version__",
]
