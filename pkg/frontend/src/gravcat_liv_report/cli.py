"""Script entry points: render a single panel or a full report."""

from __future__ import annotations

import argparse
import sys

from .panels import PanelSpec, render_panel, render_report


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gravcat-liv-report",
        description="Render figure panels from simulator CSV output.")
    sub = parser.add_subparsers(dest="command", required=True)

    panel = sub.add_parser("panel", help="render one panel from a CSV")
    panel.add_argument("--csv", required=True, help="input CSV path")
    panel.add_argument("--panel", required=True, choices=("a", "b", "c", "d"))
    panel.add_argument("--columns",
                       help="comma-separated series columns (default: "
                            "panel-appropriate columns)")
    panel.add_argument("--out", required=True, help="output image path")

    report = sub.add_parser("report",
                            help="render the 2x2 composite + timescale table")
    report.add_argument("--dir", required=True,
                        help="directory with the reproduce-mode CSVs")
    report.add_argument("--out", required=True, help="output image path")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "panel":
            columns = tuple(c.strip() for c in args.columns.split(",")) \
                if args.columns else ()
            render_panel(PanelSpec(csv_path=args.csv, panel=args.panel,
                                   series_columns=columns,
                                   output_image=args.out))
        else:
            render_report(args.dir, args.out)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
