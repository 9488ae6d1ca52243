"""Command-line entry point: `python -m stpr_bridge serve [--fixture-mode]`."""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from .server import serve


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = argparse.ArgumentParser(prog="stpr-bridge")
    sub = parser.add_subparsers(dest="command", required=True)
    serve_p = sub.add_parser("serve", help="speak the NDJSON protocol on stdio")
    serve_p.add_argument(
        "--fixture-mode",
        action="store_true",
        help="answer generate requests from canned completions (no model calls)",
    )
    args = parser.parse_args(argv)
    if args.command == "serve":
        return serve(fixture_mode=args.fixture_mode)
    parser.error(f"unknown command {args.command!r}")
    return 2


if __name__ == "__main__":
    sys.exit(main())
