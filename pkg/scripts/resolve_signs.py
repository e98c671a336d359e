#!/usr/bin/env python3
"""
Try every candidate exponent reading for the two interchange homotopies and
report how many random basis quadruples each one fails on.
"""
import argparse
import json

from hochschild.algebra import sample_library
from hochschild.gerst import resolve_exponent, sample_quadruples


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=300)
    ap.add_argument("--max-arity", type=int, default=2)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--algebras", nargs="+", default=["trunc_poly(2)", "triangular(2)", "group_cyclic(2)"])
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()

    algs = [sample_library(k) for k in args.algebras]
    quads = sample_quadruples(algs, args.max_arity, args.samples, args.seed)
    results = [resolve_exponent(w, quads) for w in ("h", "h_op")]
    if args.json:
        print(json.dumps([r.to_json() for r in results], indent=2, sort_keys=True))
        return
    for r in results:
        print(f"{r.which}: {r.samples} quadruples")
        for name, bad in sorted(r.failures.items(), key=lambda kv: kv[1]):
            mark = "*" if name == r.resolved else " "
            print(f"  {mark} {name:8} failures {bad}")
        print(f"  resolved: {r.resolved}")


if __name__ == "__main__":
    main()
