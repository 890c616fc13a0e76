"""Command line front end: one invocation renders one figure id."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

from . import render
from .io import EmptyDataError, SchemaError, load_rows

# figure id -> (builder, required columns, accepts multiple inputs)
FIGURES = {
    "tau_series": (render.tau_series, ("tick", "tau_a", "tau_p"), True),
    "arrest_ratio": (render.arrest_ratio, ("tick", "arrest_ratio"), True),
    "outcome_density": (render.outcome_density,
                        ("theta", "q0", "tau1_a", "tau1_p"), False),
    "outcome_means": (render.outcome_means,
                      ("theta", "q0", "tau1_a", "tau1_p"), False),
    "fair_proportions": (render.fair_proportions, ("theta", "q0"), False),
    "bandit_reward": (render.bandit_reward, ("pull", "mean_reward", "se"), False),
    "bandit_actions": (render.bandit_actions, ("run", "theta", "proportion"), False),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stigmafig",
        description="Render plots from stigmasim CSV outputs.")
    parser.add_argument("figure", choices=sorted(FIGURES),
                        help="which figure to render")
    parser.add_argument("--in", dest="inputs", action="append", required=True,
                        metavar="CSV", help="input CSV (repeatable where the "
                        "figure overlays several runs)")
    parser.add_argument("--out", required=True, metavar="FILE",
                        help="output image path (format from the extension)")
    parser.add_argument("--bandwidth", type=float, default=None,
                        help="KDE bandwidth factor for outcome_density "
                        "(default: scott's rule)")
    parser.add_argument("--dpi", type=int, default=150)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    builder, required, multi = FIGURES[args.figure]
    if not multi and len(args.inputs) > 1:
        print(f"stigmafig: {args.figure} takes exactly one --in file",
              file=sys.stderr)
        return 2
    try:
        if multi:
            frames = [(Path(p).stem, load_rows(p, required)) for p in args.inputs]
            fig = builder(frames)
        elif args.figure == "outcome_density":
            fig = builder(load_rows(args.inputs[0], required),
                          bandwidth=args.bandwidth)
        else:
            fig = builder(load_rows(args.inputs[0], required))
    except (SchemaError, EmptyDataError) as exc:
        print(f"stigmafig: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"stigmafig: {exc}", file=sys.stderr)
        return 3
    try:
        fig.savefig(args.out, dpi=args.dpi)
    except OSError as exc:
        print(f"stigmafig: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
