#!/usr/bin/env python3
"""Scan ontic-space sizes for the possibilistic interferometer argument."""

import argparse
import json

from omlab import hardy


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-size", type=int, default=8)
    ap.add_argument("--show-escape", action="store_true",
                    help="print the flag table of the no-invariance escape")
    args = ap.parse_args()

    for size in range(2, args.max_size + 1):
        strict = hardy.hardy_verdict(size)
        loose = hardy.hardy_verdict(size, drop_invar=True)
        print(f"size {size}: overlap with invariance: {strict.overlap_possible}; "
              f"without: {loose.overlap_possible}")
    if args.show_escape:
        escape = hardy.hardy_verdict(args.max_size, drop_invar=True)
        print(json.dumps(escape.assignment.to_json(), indent=2))


if __name__ == "__main__":
    main()
