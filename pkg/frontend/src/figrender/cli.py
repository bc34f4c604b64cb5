"""Command-line batch renderer.

Exit codes: 0 on success, 2 for schema/kind/format errors (the output
file is never written in that case).
"""

from __future__ import annotations

import argparse
import sys

from .render import render
from .spec import FIGURE_KINDS, FigureSpec, SchemaError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="render",
        description="Render simulator CSV outputs as PNG or SVG figures",
    )
    parser.add_argument("--kind", required=True, choices=FIGURE_KINDS,
                        help="figure kind matching the CSV's subcommand")
    parser.add_argument("--in", dest="csv_path", required=True, help="input CSV path")
    parser.add_argument("--out", dest="output_path", required=True,
                        help="output image path (.png or .svg)")
    parser.add_argument("--title", default="", help="optional figure title")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = FigureSpec(csv_path=args.csv_path, figure_kind=args.kind,
                          output_path=args.output_path, title=args.title)
        render(spec)
    except (SchemaError, FileNotFoundError, ValueError) as exc:
        print(f"render error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
