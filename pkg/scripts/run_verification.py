#!/usr/bin/env python3
"""Recompute every published value the engine can reach and print a report.

Exits nonzero if any check fails, so the script doubles as a CI gate:

    python scripts/run_verification.py [--only SECTION]
"""

import argparse
import sys
from fractions import Fraction

from fanocalc import classify, list_families


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--only", choices=classify.VERIFY_SECTIONS, default=None)
    args = parser.parse_args()

    report = classify.verify_paper()
    if args.only:
        report = report.section(args.only)
    print(report.render())

    passed = sum(1 for c in report.checks if c.passed)
    print(f"\n{passed}/{len(report.checks)} checks passed")

    if args.only is None:
        print("\nSeshadri constant census over the 105 families:")
        for eps in (Fraction(1), Fraction(4, 3), Fraction(3, 2), Fraction(2), Fraction(3), Fraction(4)):
            ids = [str(r.id) for r in list_families(epsilon=eps)]
            print(f"  epsilon={eps}: {len(ids)} families")
        open_ids = [str(r.id) for r in list_families() if r.eps_status == "open"]
        print(f"  open: {', '.join(open_ids)}")

    return 0 if report.ok else 1


if __name__ == "__main__":
    sys.exit(main())
