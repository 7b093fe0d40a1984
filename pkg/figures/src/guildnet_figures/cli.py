"""Command-line front end: one figure kind per invocation, or all of them."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .render import KINDS, FigureSpec, SchemaError, render


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="figures",
        description="Render figures from a guildnet run directory.",
    )
    parser.add_argument("kind", choices=(*KINDS, "all"))
    parser.add_argument("--run", required=True, help="guildnet output directory")
    parser.add_argument("--out", default=None, help="output directory (default: <run>/figures)")
    parser.add_argument("--format", choices=("svg", "pdf"), default="svg")
    args = parser.parse_args(argv)
    run_dir = Path(args.run)
    out_dir = Path(args.out) if args.out else run_dir / "figures"
    kinds = KINDS if args.kind == "all" else (args.kind,)
    try:
        for kind in kinds:
            path = render(FigureSpec(kind, run_dir, out_dir / f"{kind}.{args.format}"))
            print(path)
    except (SchemaError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
