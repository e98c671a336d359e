#!/usr/bin/env python3
"""Write the Hochschild 2-algebra presentation of a sample algebra as JSON and check the round trip."""
import argparse
import sys

from hochschild.algebra import sample_library
from hochschild.e2 import dumps, from_json, hochschild_presentation, validate_presentation


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("key")
    ap.add_argument("--window", type=int, default=2)
    ap.add_argument("--out", default="-")
    ap.add_argument("--validate", action="store_true")
    args = ap.parse_args()

    P = hochschild_presentation(sample_library(args.key), args.window)
    text = dumps(P)
    if dumps(from_json(text)) != text:
        sys.exit("round trip changed the document")
    if args.validate:
        rep = validate_presentation(P)
        for c in rep.checks:
            print(f"{'ok ' if c.ok else 'BAD'} {c.name} ({c.count})", file=sys.stderr)
        if not rep.ok:
            sys.exit(1)
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w") as fh:
            fh.write(text)


if __name__ == "__main__":
    main()
