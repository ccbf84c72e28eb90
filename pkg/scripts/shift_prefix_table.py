"""Shift exponents r_n and the prefix check for consecutive gaps 1..N."""

import argparse

from morsechaos import oracle
from morsechaos.constructions import GapSequence, shift_exponent_rn


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=20)
    args = ap.parse_args()
    g = GapSequence(tuple(range(1, args.n + 1)))
    print(f"{'n':>3} {'r_n':>10} {'s_n':>10} result")
    for n in range(2, args.n + 1):
        c = oracle.verify_lemma1(g.a, n)
        print(f"{n:>3} {shift_exponent_rn(g, n):>10} {g.s[n]:>10} {'PASS' if c.passed else 'FAIL'}")


if __name__ == "__main__":
    main()
