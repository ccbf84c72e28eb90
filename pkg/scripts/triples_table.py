"""Verdicts for every pair and triple of a family, with the witness statistics.

    python3 scripts/triples_table.py --family t1 --members 1,2,3,4 --gaps 3,4,9,16,33
    python3 scripts/triples_table.py --family t2 --members 0,1,01,11 --gaps 1,2,3,4,5,6,7,8,9,10,11,12

Verdicts are finite-horizon evidence: x^2 and x^3 first differ in block 6, so
with five blocks that pair is still identical and reads as condition2-fails.
"""

import argparse
from itertools import combinations

from morsechaos import chaos
from morsechaos.constructions import parse_descriptor


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--family", choices=("t1", "t2"), default="t1")
    ap.add_argument("--members", default="1,2,3,4", help="i values (t1) or beta codes (t2)")
    ap.add_argument("--gaps", default="3,4,9,16,33")
    ap.add_argument("--burn-in", type=int, default=1, help="first checkpoint is s_J")
    args = ap.parse_args()

    key = "i" if args.family == "t1" else "beta"
    pts = [parse_descriptor(f"{args.family} {key}={m} gaps={args.gaps}") for m in args.members.split(",")]
    s = pts[0].gaps.s
    cps = list(s[args.burn_in:-1])
    for size in (2, 3):
        for tup in combinations(pts, size):
            v = chaos.classify_tuple(list(tup), cps)
            names = " ".join(p.descriptor.split()[1] for p in tup)
            print(f"{names:<24} {v.classification:<32} liminf-max<={float(v.liminf_max_estimate[-1]):.3g} "
                  f"limsup-min>={float(v.limsup_min_estimate[-1]):.3g}")


if __name__ == "__main__":
    main()
