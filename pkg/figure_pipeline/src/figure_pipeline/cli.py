"""`render` command: two-panel figure from a pair of experiment CSVs."""

from __future__ import annotations

import argparse
import sys

from .render import FigureSpec, render_figure


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="render")
    parser.add_argument("--left", required=True, help="fixed-dataset mode CSV")
    parser.add_argument("--right", required=True, help="random-datasets mode CSV")
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument(
        "--linear", action="store_true", help="linear vertical axis (default log10)"
    )
    parser.add_argument(
        "--left-bk",
        choices=("box", "point"),
        default="box",
        help="left panel BK: distribution over tau draws, or a single draw",
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    spec = FigureSpec(
        left_csv=args.left,
        right_csv=args.right,
        out=args.out,
        log_scale=not args.linear,
        left_bk=args.left_bk,
    )
    try:
        path = render_figure(spec)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {path}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
