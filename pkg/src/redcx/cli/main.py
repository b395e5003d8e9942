"""Command-line entry point."""

from __future__ import annotations

import argparse
import logging
import sys

from .parser import Config, ParseError, parse_session
from .runner import CommandError, render_table, run, to_json


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="redcx",
        description="Resolutions, Ext/Tor and reducible-complexity certificates "
                    "over graded quotient rings.",
    )
    ap.add_argument("session", help="session file, or - for standard input")
    ap.add_argument("--max-degree", type=int, default=16, metavar="D",
                    help="truncation degree for graded pieces (default 16)")
    ap.add_argument("--max-hdeg", type=int, default=10, metavar="H",
                    help="homological bound (default 10)")
    ap.add_argument("--seed", type=int, default=0, help="seed for randomized searches")
    ap.add_argument("--json", action="store_true", help="print the JSON document")
    ap.add_argument("--cache-dir", metavar="PATH", default=None,
                    help="directory for the on-disk result cache")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    text = sys.stdin.read() if args.session == "-" else open(args.session, encoding="utf-8").read()
    cfg = Config(args.max_degree, args.max_hdeg, args.seed, args.cache_dir)
    try:
        session = parse_session(text, cfg)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    try:
        records = run(session)
    except CommandError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    doc = to_json(records)
    sys.stdout.write(doc if args.json else render_table(doc))
    return 0


if __name__ == "__main__":
    sys.exit(main())
