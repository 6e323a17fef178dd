"""Command line: render figure panels from shelvesim sweep tables.

Usage:
    shelvesim-figures render <preset> --csv <table.csv> --out <directory>
    shelvesim-figures panels
"""

import argparse
import sys

from . import __version__
from .render import SchemaError, preset_panels, render_preset


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="shelvesim-figures")
    parser.add_argument("--version", action="version",
                        version=f"shelvesim-figures {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    render = sub.add_parser("render", help="render every panel of a preset")
    render.add_argument("preset")
    render.add_argument("--csv", required=True, help="table written by 'shelvesim run'")
    render.add_argument("--out", required=True, help="output directory for PNG panels")

    sub.add_parser("panels", help="list presets and their panels")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "panels":
        for preset, panels in sorted(preset_panels().items()):
            print(f"{preset:8s} -> {', '.join(panels)}")
        return 0
    try:
        results = render_preset(args.preset, args.csv, args.out)
    except (SchemaError, OSError) as exc:
        print(str(exc), file=sys.stderr)
        return 1
    for r in results:
        note = f" ({', '.join(r.annotations)})" if r.annotations else ""
        print(f"{r.panel}: {r.series} series, {r.rows_used} rows -> {r.path}{note}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
