"""Command-line entry point: render --kind <kind> --in <csv>... --out <img>."""
from __future__ import annotations

import argparse
import sys

from .figures import KINDS, FigureSpec, render
from .io import ParseError


def build_parser():
    p = argparse.ArgumentParser(
        prog="render",
        description="Render a figure from buzzld CSV outputs (PNG, headless).")
    p.add_argument("--kind", required=True, choices=KINDS)
    p.add_argument("--in", dest="inputs", nargs="+", required=True,
                   metavar="CSV")
    p.add_argument("--out", required=True, metavar="IMG")
    p.add_argument("--dump", metavar="TXT",
                   help="also write a text listing of every plotted series")
    p.add_argument("--label", action="append", default=[],
                   help="legend label for the corresponding input, in order")
    p.add_argument("--title")
    return p


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    spec = FigureSpec(kind=ns.kind, inputs=ns.inputs, out=ns.out,
                      dump=ns.dump, title=ns.title, labels=ns.label)
    try:
        render(spec)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


def entry():
    raise SystemExit(main())
