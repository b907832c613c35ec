#!/usr/bin/env python3
"""Bucket-query latency scaling harness.

Times mean scb_query latency at two dataset sizes; a prefix walk of fixed
key length should keep the ratio near 1 even for a 10x record increase.
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from geohpi.bench import scaling_ratio


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--small", type=int, default=10_000)
    parser.add_argument("--large", type=int, default=100_000)
    parser.add_argument("--queries", type=int, default=10_000)
    parser.add_argument("--precision", type=int, default=7)
    args = parser.parse_args()

    lat_small, lat_large, ratio = scaling_ratio(
        args.small, args.large, queries=args.queries, precision=args.precision
    )
    print(f"{args.small} records: {lat_small * 1e6:.2f} us/query")
    print(f"{args.large} records: {lat_large * 1e6:.2f} us/query")
    print(f"ratio: {ratio:.2f}x for a {args.large / args.small:.0f}x size increase")
    return 0


if __name__ == "__main__":
    sys.exit(main())
