"""The coding-family closure triple (two coded points plus the all-complement point).

Prints the JSON verdict record for parity-locked gaps 1..N.

    python3 scripts/closure_triple.py --n 20
"""

import argparse

from morsechaos import chaos
from morsechaos.constructions import GapSequence, alpha_code, point_remark3, point_theorem2


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=20, help="number of blocks")
    ap.add_argument("--beta1", default="1111111111")
    ap.add_argument("--beta2", default="1")
    args = ap.parse_args()

    g = GapSequence(tuple(range(1, args.n + 1)))
    pts = [point_theorem2(alpha_code(args.beta1), g), point_theorem2(alpha_code(args.beta2), g),
           point_remark3(g)]
    cps = [2] + [g.s[j] for j in range(4, args.n, 4)]
    print(chaos.classify_tuple(pts, cps).to_json())


if __name__ == "__main__":
    main()
