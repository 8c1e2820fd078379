#!/usr/bin/env python3
"""Reproduce the subalgebra glossary over the six degree-<=2 monomials.

Prints the grouped markdown table and the raw counts; exits nonzero if the
multiplicities disagree with the expected glossary.
"""

import argparse
import json
import sys

from skewweyl.enumerate import glossary_markdown, glossary_report


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--json", action="store_true",
                    help="dump the full report as JSON instead of markdown")
    args = ap.parse_args()

    report = glossary_report()
    if args.json:
        json.dump(report, sys.stdout, indent=2, sort_keys=True)
        print()
    else:
        print(glossary_markdown(report))
        print()
        print(f"total spans: {report['total_spans']}")
        print(f"dimension multiset: {report['dims']}")
    if report["mismatches"]:
        print(f"MISMATCHES: {report['mismatches']}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
