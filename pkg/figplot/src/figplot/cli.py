"""Command line front end: metrics CSVs in, backlog figure out."""

from __future__ import annotations

import argparse
import sys

from .plot import build_curves, read_many, render_backlog_figure


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plot-backlog",
        description="Plot average backlog against offered load from metrics CSVs.",
    )
    parser.add_argument(
        "--in",
        dest="inputs",
        required=True,
        help="metrics CSV path, or several separated by commas",
    )
    parser.add_argument("--out", required=True, help="output image path (PNG)")
    parser.add_argument("--lambda-min", type=float, default=None)
    parser.add_argument("--lambda-max", type=float, default=None)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    paths = [p for p in args.inputs.split(",") if p.strip()]
    try:
        if not paths:
            raise ValueError("no input files given")
        points = read_many(paths)
        curves = build_curves(points, args.lambda_min, args.lambda_max)
        render_backlog_figure(curves, args.out)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
