"""Batch figure renderer for the transfer meta-learning simulator's CSVs."""

__version__ = "0.1.0"

from .reader import FigureData, load_csv  # noqa: F401
from .render import render  # noqa: F401
from .spec import EXPECTED_COLUMNS, FIGURE_KINDS, FigureSpec, SchemaError  # noqa: F401
