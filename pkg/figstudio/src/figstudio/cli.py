"""Command-line entry point: render figures from a sweep directory.

    figstudio render --figure <name> --input <dir> --out <file> [--style paper]

Exit codes: 0 success, 2 usage error, 1 missing/tampered artifacts or
rendering failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .manifest import ArtifactError, TamperError
from .render import FIGURES, FigureJob, render
from .style import PRESETS


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="figstudio",
        description="Render static figures from coevonet sweep artifacts")
    sub = parser.add_subparsers(dest="cmd", required=True)
    p = sub.add_parser("render", help="render one figure")
    p.add_argument("--figure", choices=FIGURES, required=True)
    p.add_argument("--input", required=True, help="sweep directory with manifest.json")
    p.add_argument("--out", required=True, help="output PNG path")
    p.add_argument("--style", choices=sorted(PRESETS), default="default")
    p.add_argument("--theta", type=float, default=None,
                   help="theta selection for degree-fits / similarity-grid")
    p.add_argument("--replicate", type=int, default=None,
                   help="replicate selection for degree-fits / similarity-grid")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    job = FigureJob(figure=args.figure, input_dir=Path(args.input),
                    output_path=Path(args.out), style=args.style,
                    theta=args.theta, replicate=args.replicate)
    try:
        summary = render(job)
    except (ArtifactError, TamperError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    summary.pop("tile_pixel_boxes", None)
    print(json.dumps(summary))
    return 0


if __name__ == "__main__":
    sys.exit(main())
