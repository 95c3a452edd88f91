"""render-figures: batch-render fig1.csv ... fig6.csv into images."""

import argparse
import sys

from .io import FIGURE_SCHEMAS, SchemaError
from .render import default_spec, render

__all__ = ["main"]


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="render-figures",
        description="Render lmg-tunnel CSV datasets into figure images")
    parser.add_argument("--in", dest="in_dir", required=True, help="directory with figN.csv files")
    parser.add_argument("--out", dest="out_dir", required=True, help="directory for images")
    parser.add_argument("--only", type=int, choices=sorted(FIGURE_SCHEMAS),
                        help="render a single figure")
    parser.add_argument("--format", default="svg", choices=("svg", "pdf", "png"),
                        help="image format (default: svg, vector)")
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else 1
        return 0 if code == 0 else 1

    ids = [args.only] if args.only else sorted(FIGURE_SCHEMAS)
    status = 0
    for fid in ids:
        spec = default_spec(fid, args.in_dir, args.out_dir, args.format)
        if not spec.csv_path.exists():
            print(f"error: {spec.csv_path} not found", file=sys.stderr)
            status = 1
            continue
        try:
            path = render(spec)
        except SchemaError as exc:
            print(f"error: {exc}", file=sys.stderr)
            status = 1
            continue
        print(f"wrote {path}")
    return status


if __name__ == "__main__":
    sys.exit(main())
