"""Command line: plots <kind> --in <csv> --out <image>.

Exit codes: 0 success, 1 usage error, 2 data error (missing file or schema
mismatch).
"""

import argparse
import sys

from .data import SchemaError
from .figures import FIGURE_KINDS, FigureSpec, render

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}")


class _UsageError(Exception):
    pass


def _build_parser():
    parser = _Parser(prog="plots", description=__doc__.splitlines()[0])
    parser.add_argument("kind", choices=FIGURE_KINDS, help="figure to render")
    parser.add_argument("--in", dest="input_path", required=True, help="input CSV")
    parser.add_argument("--out", dest="output_path", required=True, help="output image path")
    return parser


def main(argv=None):
    try:
        args = _build_parser().parse_args(argv)
    except _UsageError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    spec = FigureSpec(input_path=args.input_path, kind=args.kind, output_path=args.output_path)
    try:
        out = render(spec)
    except FileNotFoundError:
        print(f"input not found: {spec.input_path}", file=sys.stderr)
        return EXIT_DATA
    except SchemaError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_DATA
    print(f"wrote {out}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
