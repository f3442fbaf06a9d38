#!/usr/bin/env python3
"""Exhaustively check every counting bound used by the second-moment analysis
against exact enumeration, and print a verdict per grid cell.

Usage:
    python scripts/validate_counting_bounds.py [--kmax 6]
"""
import argparse

from indtrees.counting import (
    cayley,
    count_forests,
    count_forests_enumerated,
    count_overlap_pairs,
    rooted_forest_count_closed_form,
    rooted_forest_count_enumerated,
    validate_overlap_bounds,
)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--kmax", type=int, default=6)
    args = ap.parse_args()

    failures = 0

    print("== tree-pair overlap bounds ==")
    for k in range(2, args.kmax + 1):
        for l in range(2, k + 1):
            table = count_overlap_pairs(k, l)
            partition_ok = table.total() == cayley(k) ** 2
            report = validate_overlap_bounds(k, l)
            ok = partition_ok and report.all_ok
            failures += 0 if ok else 1
            print(f"k={k} l={l}: partition {'ok' if partition_ok else 'BAD'}, "
                  f"bounds {'ok' if report.all_ok else 'VIOLATED'}")

    print("== forest counts: recurrence vs enumeration ==")
    for l in range(1, 8):
        row_ok = all(
            count_forests(l, r).value == count_forests_enumerated(l, r)
            for r in range(l)
        )
        failures += 0 if row_ok else 1
        print(f"l={l}: {'ok' if row_ok else 'MISMATCH'}")

    print("== rooted forests: closed form (exponent n-m-1) vs enumeration ==")
    for n in range(2, 7):
        row_ok = all(
            rooted_forest_count_closed_form(n, m)
            == rooted_forest_count_enumerated(n, m)
            for m in range(1, n + 1)
        )
        failures += 0 if row_ok else 1
        print(f"n={n}: {'ok' if row_ok else 'MISMATCH'}")

    print(f"\n{failures} failing cells")
    return 1 if failures else 0


if __name__ == "__main__":
    raise SystemExit(main())
