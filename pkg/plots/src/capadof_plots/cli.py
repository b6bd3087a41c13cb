"""Command-line entry: ``plot --kind sv_decay --in a.csv b.csv --out fig.png``."""

from __future__ import annotations

import argparse
import sys

from .render import PLOT_KINDS, PlotInputError, PlotJob, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plot", description="Render capadof CSV outputs as figures."
    )
    parser.add_argument("--kind", required=True, choices=PLOT_KINDS, help="figure kind")
    parser.add_argument(
        "--in", dest="inputs", required=True, nargs="+", help="input CSV file(s)"
    )
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument(
        "--labels", nargs="+", help="series labels, one per input (default: file stems)"
    )
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        job = PlotJob(
            inputs=tuple(args.inputs),
            output=args.out,
            kind=args.kind,
            labels=tuple(args.labels) if args.labels else None,
        )
        result = render(job)
    except PlotInputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 4
    print(f"wrote {result.output} ({len(result.series_labels)} series)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
