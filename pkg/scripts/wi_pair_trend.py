"""Checkpointed distribution-function estimates for a pair of the W_i family.

Prints phi_star_hat at small delta and phi_hat near the diameter at every
block end, next to the closed-form block-combinatorics bounds.

    python3 scripts/wi_pair_trend.py --gaps 3,4,9,16,33 --out trend.csv
"""

import argparse
from fractions import Fraction

from morsechaos import chaos, oracle
from morsechaos.constructions import GapSequence, point_theorem1


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--gaps", default="3,4,9,16,33")
    ap.add_argument("--i", type=int, nargs=2, default=(1, 2))
    ap.add_argument("--precision", type=int, default=32)
    ap.add_argument("--out", help="also write the full CSV here")
    args = ap.parse_args()

    g = GapSequence.parse(args.gaps)
    pts = [point_theorem1(i, g) for i in args.i]
    cps = list(g.s[1:-1])
    ests = chaos.estimate_df_checkpoints(pts, checkpoints=cps, precision=args.precision)
    comp = set(oracle.BlockSchedule.from_descriptors([p.descriptor for p in pts]).complement_blocks())
    small, near = Fraction(1, 16), Fraction(15, 16)
    print(f"{'block':>5} {'m':>8} {'kind':>10} {'phi*(1/16)':>11} {'phi(15/16)':>11} bound")
    for j, est in enumerate(ests, 1):
        kind = "complement" if j in comp else "shared"
        if kind == "shared":
            bound = f">= {float(Fraction(2 ** g.a[j - 1] - 5, est.horizon - 1)):.4f} (phi*)"
        else:
            bound = f"<= {float(Fraction(g.s[j - 1] + 5, est.horizon - 1)):.4f} (phi)"
        print(f"{j:>5} {est.horizon:>8} {kind:>10} {float(est.phi_star(small)):>11.4f} "
              f"{float(est.phi(near)):>11.4f} {bound}")
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(chaos.estimates_to_csv(ests, {"points": [p.descriptor for p in pts],
                                                   "checkpoints": cps}))


if __name__ == "__main__":
    main()
