#!/usr/bin/env python3
"""Run the characteristic-5 construction pipeline and print the full report.

Usage: python scripts/run_brj.py [--p P] [--skip-simplicity] [--out report.json]
"""

import argparse
import json
import sys

from superlie.brj import PipelineAssertion, brj25


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--skip-simplicity", action="store_true")
    ap.add_argument("--out", help="write the report JSON here")
    args = ap.parse_args()

    try:
        rep = brj25(p=args.p, skip_simplicity=args.skip_simplicity,
                    seed=args.seed)
    except PipelineAssertion as e:
        print(f"halted at stage {e.stage}: expected {e.expected}, got {e.got}")
        if e.report is not None:
            for k, v in e.report.stage_dims.items():
                print(f"  {k}: dim {v}")
        return 1

    for k, v in rep.stage_dims.items():
        print(f"{k}: dim {v} ({rep.seconds.get(k, 0.0):.2f}s)")
    de, do = rep.algebra.dims
    print(f"total algebra: dims {de}|{do}")
    print(f"socle matches expected basis: {rep.socle_matches_expected}")
    print(f"equivariant map space: group {rep.hom_dim_group}, "
          f"algebra {rep.hom_dim_algebra}")
    print(f"normalized first constant: {rep.first_constant}")
    print(f"sas conditions: {rep.sas}")
    if rep.simplicity is not None:
        print(f"simplicity: {rep.simplicity}")
    if args.out:
        with open(args.out, "w") as f:
            json.dump({
                "p": rep.p,
                "stage_dims": rep.stage_dims,
                "dims": list(rep.algebra.dims),
                "socle_matches_expected": rep.socle_matches_expected,
                "hom_dim_group": rep.hom_dim_group,
                "hom_dim_algebra": rep.hom_dim_algebra,
                "first_constant": rep.first_constant,
                "sas": list(rep.sas),
                "simplicity": rep.simplicity,
                "seconds": {k: round(v, 3) for k, v in rep.seconds.items()},
            }, f, indent=1)
        print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
