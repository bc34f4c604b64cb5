"""Dispatcher: load a CSV, validate its schema, build and save a figure."""

from __future__ import annotations

from pathlib import Path

from .figures import BUILDERS
from .figures._common import add_footnote, save
from .reader import load_csv
from .spec import FigureSpec

__all__ = ["render"]


def render(spec: FigureSpec) -> Path:
    """Render one figure; returns the written path.

    Reads the CSV (strictly read-only), validates its columns against the
    kind's schema, draws the kind's panel layout and embeds the CSV's
    resolved-config comment as a footnote. Nothing is written unless the
    input validates.
    """
    data = load_csv(spec.csv_path, spec.figure_kind)
    fig = BUILDERS[spec.figure_kind].build(data, title=spec.title)
    add_footnote(fig, data.config_line)
    spec.output_path.parent.mkdir(parents=True, exist_ok=True)
    save(fig, spec.output_path)
    return spec.output_path
