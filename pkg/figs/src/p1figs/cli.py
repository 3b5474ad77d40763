"""Batch figure rendering: p1figs --grid grid.csv --report report.json
--panel y --out fig.png [--clip 50]."""

from __future__ import annotations

import argparse
import sys

from .io import SchemaError
from .render import DEFAULT_CLIP, PANELS, FigureSpec, render


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="p1figs")
    parser.add_argument("--grid", required=True, help="comparison grid CSV")
    parser.add_argument("--report", required=True, help="comparison report JSON")
    parser.add_argument("--panel", choices=PANELS, default="y")
    parser.add_argument("--out", required=True, help="output image (png or svg)")
    parser.add_argument("--clip", type=float, default=DEFAULT_CLIP,
                        help="y-axis clip for singular-case spikes (0 disables)")
    args = parser.parse_args(argv)
    clip = None if args.clip == 0 else args.clip
    try:
        render(FigureSpec(args.grid, args.report, args.out, args.panel, clip))
    except SchemaError as exc:
        print(f"SchemaError: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
