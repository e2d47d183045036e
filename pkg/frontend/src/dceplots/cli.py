"""Command line entry point: plots <preset-id> --in <dir> --out <dir>."""

from __future__ import annotations

import argparse
import sys

from .figures import FIGURES
from .render import RenderError, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plots",
        description="Render a preset figure from simulation CSV artifacts.",
    )
    parser.add_argument("preset", help="preset figure id, e.g. fig1, fig2, ...")
    parser.add_argument("--in", dest="in_dir", required=True,
                        help="directory holding the preset's CSV files")
    parser.add_argument("--out", dest="out_dir", required=True,
                        help="directory to write the PNG and SVG files into")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    spec = FIGURES.get(args.preset)
    if spec is None:
        known = ", ".join(sorted(FIGURES))
        print(f"plots: unknown preset {args.preset!r} (known: {known})",
              file=sys.stderr)
        return 1
    try:
        written = render(spec, args.in_dir, args.out_dir)
    except RenderError as exc:
        print(f"plots: {exc}", file=sys.stderr)
        return 1
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
