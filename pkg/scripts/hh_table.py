#!/usr/bin/env python3
"""Print Hochschild cohomology dimensions for the sample algebras."""
import argparse
import time

from hochschild.algebra import center, sample_library
from hochschild.cochain import BudgetError, cohomology

DEFAULT = ["field", "trunc_poly(2)", "trunc_poly(3)", "matrix(2)", "group_cyclic(2)",
           "group_cyclic(3)", "product(2)", "triangular(2)"]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("keys", nargs="*", default=DEFAULT)
    ap.add_argument("--max-degree", type=int, default=3)
    ap.add_argument("--budget", type=int, default=200_000)
    args = ap.parse_args()
    print(f"{'algebra':16} {'Z(A)':>5}  HH^0..HH^{args.max_degree}")
    for key in args.keys:
        A = sample_library(key)
        t = time.perf_counter()
        try:
            dims = cohomology(A, args.max_degree, budget=args.budget, with_representatives=False).dims
        except BudgetError as e:
            print(f"{key:16} {center(A).dim:>5}  ({e})")
            continue
        print(f"{key:16} {center(A).dim:>5}  {' '.join(map(str, dims))}   [{time.perf_counter() - t:.2f}s]")


if __name__ == "__main__":
    main()
