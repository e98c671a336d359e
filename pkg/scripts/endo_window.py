#!/usr/bin/env python3
"""Cohomology of truncated End(B(A)) windows next to Hochschild cohomology."""
import argparse
import time

from hochschild.algebra import sample_library
from hochschild.bar import BarComplex, endo_complex
from hochschild.cochain import cohomology


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("key", nargs="?", default="trunc_poly(2)")
    ap.add_argument("--N", type=int, nargs="+", default=[2, 3])
    args = ap.parse_args()
    A = sample_library(args.key)
    for N in args.N:
        t = time.perf_counter()
        E = endo_complex(BarComplex(A, N + 1, budget=10 ** 7), N)
        safe = list(E.safe_degrees())
        dims = [E.cohomology_dim(q) for q in safe]
        ranks = [E.comparison_rank(q) for q in safe]
        hh = list(cohomology(A, max(safe)).dims)
        print(f"N={N}: End window {dims}  comparison ranks {ranks}  HH {hh}  "
              f"[{time.perf_counter() - t:.1f}s]")


if __name__ == "__main__":
    main()
