"""Command-line entry point: ``morsechaos {gen,df,classify,verify,plot}``.

Exit status: 0 on success/PASS, 1 when a verification fails, 2 on usage
errors. Outputs start with a ``#`` header line holding the run config as
JSON; the worker count and output path are execution details and are left
out so reruns are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import List, Optional

from . import chaos, oracle
from .constructions import BlockPoint, GapSequence, parse_descriptor, point_lemma1
from .errors import CapacityError, DescriptorError, DiagonalError, HorizonExceeded
from .symseq import DEFAULT_PRECISION, ShiftedPoint, prefix


class UsageError(Exception):
    pass


def _grid(text: Optional[str]) -> List[Fraction]:
    if not text or text == "default":
        return chaos.default_delta_grid()
    try:
        return [Fraction(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"bad delta grid {text!r}") from None


def _gaps_of(points) -> Optional[GapSequence]:
    for p in points:
        base = p.base if isinstance(p, ShiftedPoint) else p
        if isinstance(base, BlockPoint):
            return base.gaps
    return None


def _checkpoints(text: Optional[str], points) -> List[int]:
    if not text:
        raise UsageError("--checkpoints is required and must be nonempty")
    gaps = _gaps_of(points)
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if tok.startswith("s"):
            if gaps is None:
                raise UsageError(f"{tok!r} needs a block-built point to resolve s_j")
            j = int(tok[1:])
            if not 1 <= j <= len(gaps):
                raise UsageError(f"{tok!r} outside 1..{len(gaps)}")
            out.append(gaps.s[j])
        elif tok:
            out.append(int(float(tok)) if "e" in tok else int(tok))
    if not out:
        raise UsageError("empty checkpoint list")
    return out


def _points(descs: List[str]):
    return [parse_descriptor(d) for d in descs]


def _emit(text: str, out: Optional[str]):
    if out:
        with open(out, "w", encoding="ascii", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _header(args, **extra) -> dict:
    cfg = {"command": args.command}
    cfg.update(extra)
    return cfg


def cmd_gen(args) -> int:
    p = parse_descriptor(args.descriptor)
    word = str(prefix(p, args.length))
    cfg = _header(args, descriptor=p.descriptor, length=args.length)
    if args.format == "json":
        _emit(json.dumps({"config": cfg, "prefix": word}, sort_keys=True) + "\n", args.out)
    else:
        _emit(f"# {json.dumps(cfg, sort_keys=True)}\n{word}\n", args.out)
    return 0


def cmd_df(args) -> int:
    pts = _points(args.points)
    grid = _grid(args.delta_grid)
    cps = _checkpoints(args.checkpoints, pts)
    ests = chaos.estimate_df_checkpoints(pts, grid, cps, args.precision, args.lookahead,
                                         workers=args.threads)
    cfg = _header(args, points=[p.descriptor for p in pts], delta_grid=[str(d) for d in grid],
                  checkpoints=cps, precision=args.precision, lookahead=args.lookahead)
    if args.format == "json":
        rows = []
        for e in ests:
            for d, lc, uc, ph, ps in zip(e.delta_grid, e.lower_counts, e.upper_counts,
                                         e.phi_hat, e.phi_star_hat):
                rows.append({"delta": str(d), "m": e.horizon, "lower_counts": list(lc),
                             "upper_counts": list(uc), "phi_hat": str(ph), "phi_star_hat": str(ps)})
        _emit(json.dumps({"config": cfg, "rows": rows}, indent=1, sort_keys=True) + "\n", args.out)
    else:
        _emit(chaos.estimates_to_csv(ests, cfg), args.out)
    return 0


def cmd_classify(args) -> int:
    pts = _points(args.points)
    cps = _checkpoints(args.checkpoints, pts)
    threshold = Fraction(args.threshold) if args.threshold else None
    v = chaos.classify_tuple(pts, cps, _grid(args.delta_grid), args.precision, threshold,
                             args.lookahead, workers=args.threads)
    cfg = _header(args, points=v.descriptors, checkpoints=cps, precision=args.precision,
                  threshold=str(v.threshold), lookahead=args.lookahead)
    if args.format == "text":
        lines = [f"# {json.dumps(cfg, sort_keys=True)}", f"classification: {v.classification}"]
        for m, a, b in zip(cps[1:], v.liminf_max_estimate, v.limsup_min_estimate):
            lines.append(f"m={m} liminf_max<={float(a):.6g} limsup_min>={float(b):.6g}")
        for m, table in v.extremal_evidence.items():
            cells = " ".join(f"phi({d})={float(x):.4f}" for d, x in table.items())
            lines.append(f"extremal m={m} {cells}")
        _emit("\n".join(lines) + "\n", args.out)
    else:
        _emit(json.dumps({"config": cfg, "verdict": v.to_dict()}, indent=2, sort_keys=True) + "\n",
              args.out)
    return 0


# provenance tags printed with each check
_PROVENANCE = {
    "property-P": "morse-overlap-free",
    "property-P-control": "scanner-live-control",
    "lemma1": "morse-shift-prefix",
    "step2-window": "shifted-pair-14r-window",
    "lemma2": "coding-difference-density",
    "oracle-match": "df-counts-vs-block-oracle",
    "W-partition": "odd-part-decomposition",
}


def _verify_checks(args) -> List[oracle.Check]:
    suite = args.suite
    if suite == "p":
        checks = [oracle.verify_property_p(n) for n in (args.prefix or [1 << 14])]
        ctl = oracle.verify_property_p(len(args.control), word=args.control)
        checks.append(oracle.Check("property-P-control", not ctl.passed, ctl.detail))
        return checks
    if suite == "lemma1":
        gaps = GapSequence.parse(args.gaps or "1,2,3,4")
        ns = [args.n] if args.n else range(2, len(gaps) + 1)
        return [oracle.verify_lemma1(gaps.a, n) for n in ns]
    if suite == "step2":
        gaps = GapSequence.parse(args.gaps or "3,4,9")
        pts = _points(args.points) if args.points else [point_lemma1(gaps)] * 2
        if len(pts) != 2:
            raise UsageError("step2 takes two points")
        u, v = pts
        W = args.window or 14 * args.r
        horizon = args.horizon
        limits = [p.horizon - off - W + 1 for p, off in ((u, 1), (v, 1 + args.r))
                  if p.horizon is not None]
        if limits and min(limits) < horizon:
            horizon = min(limits)  # reported, never silently wrapped
        if horizon < 1:
            raise UsageError("points too short for a single window")
        chk = oracle.verify_step2_window(u, v, args.r, horizon, W)
        chk.detail["requested_horizon"] = args.horizon
        dist = chaos.shifted_pair_distality(u, v, args.r, horizon, precision=W)
        chk.detail["min_distance"] = str(dist.min_distance)
        return [chk]
    if suite == "lemma2":
        b1, b2 = args.beta1, args.beta2
        width = max(len(b1), len(b2))
        diffs = [i + 1 for i, (x, y) in enumerate(zip(b1.ljust(width, "0"), b2.ljust(width, "0")))
                 if x != y]
        if not diffs:
            raise UsageError("betas must differ")
        k = diffs[0]
        count = oracle.alpha_difference_count(b1, b2, args.N)
        floor_ = args.N // 2 ** k
        ok = count >= floor_
        detail = {"k": k, "N": args.N, "count": count, "floor": floor_}
        if len(diffs) == 1:
            exact = (args.N + 2 ** (k - 1)) // 2 ** k
            ok = ok and count == exact
            detail["expected"] = exact
        return [oracle.Check("lemma2", ok, detail)]
    if suite == "oracle-match":
        pts = _points(args.points)
        if len(pts) != 2:
            raise UsageError("oracle-match takes a pair")
        grid = _grid(args.delta_grid)
        cps = _checkpoints(args.checkpoints, pts)
        ests = chaos.estimate_df_checkpoints(pts, grid, cps, args.precision, args.lookahead,
                                             workers=args.threads)
        checks = []
        for e in ests:
            for d in grid:
                got = e.counts(d)
                want = oracle.exact_pair_counts([p.descriptor for p in pts], d, e.horizon,
                                                args.precision, args.lookahead)
                checks.append(oracle.Check("oracle-match", got == want,
                                           {"m": e.horizon, "delta": d, "estimate": got, "oracle": want}))
        return checks
    if suite == "w":
        return [oracle.w_partition_check(args.limit)]
    raise UsageError(f"unknown suite {suite!r}")


def cmd_verify(args) -> int:
    checks = _verify_checks(args)
    cfg = _header(args, suite=args.suite)
    if args.format == "json":
        body = json.dumps({"config": cfg, "checks": [
            {"name": c.name, "provenance": _PROVENANCE.get(c.name, ""), "passed": c.passed,
             "detail": {k: str(v) if isinstance(v, Fraction) else v for k, v in c.detail.items()}}
            for c in checks]}, indent=1, sort_keys=True, default=str) + "\n"
    else:
        body = f"# {json.dumps(cfg, sort_keys=True)}\n" + "".join(
            f"{c.line()} [{_PROVENANCE.get(c.name, '')}]\n" for c in checks)
    _emit(body, args.out)
    return 0 if all(c.passed for c in checks) else 1


def cmd_plot(args) -> int:
    import csv

    import matplotlib
    matplotlib.use("svg")
    import matplotlib.pyplot as plt

    with open(args.csv, encoding="ascii") as fh:
        rows = list(csv.DictReader(line for line in fh if not line.startswith("#")))
    series = {}
    for r in rows:
        series.setdefault(r["delta"], []).append((int(r["m"]), float(r["phi_hat"]), float(r["phi_star_hat"])))
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4), sharey=True)
    for d, pts in sorted(series.items(), key=lambda kv: float(kv[0])):
        ms = [p[0] for p in pts]
        ax1.plot(ms, [p[1] for p in pts], marker="o", label=d)
        ax2.plot(ms, [p[2] for p in pts], marker="o", label=d)
    for ax, title in ((ax1, "lower (min over pairs)"), (ax2, "upper (max over pairs)")):
        ax.set_xscale("log")
        ax.set_xlabel("horizon m")
        ax.set_title(title)
    ax1.set_ylabel("empirical distribution function")
    ax2.legend(title="delta", fontsize="small", ncol=2)
    fig.tight_layout()
    plt.rcParams["svg.hashsalt"] = "morsechaos"
    fig.savefig(args.out, format="svg", metadata={"Date": None})
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="morsechaos", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, fmt=("csv", "json", "text"), default="csv"):
        p.add_argument("--out", help="write here instead of stdout")
        p.add_argument("--format", choices=fmt, default=default)

    def sweep(p):
        p.add_argument("--delta-grid", default="default", help="comma list of rationals, or 'default'")
        p.add_argument("--checkpoints", help="comma list of horizons; sJ means s_J of the gaps")
        p.add_argument("--precision", type=int, default=DEFAULT_PRECISION)
        p.add_argument("--lookahead", type=int, default=chaos.DEFAULT_LOOKAHEAD)
        p.add_argument("--threads", type=int, default=1)

    p = sub.add_parser("gen", help="print a prefix of a point")
    p.add_argument("descriptor")
    p.add_argument("length", type=int)
    common(p, ("text", "json"), "text")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("df", help="distribution-function estimates as CSV")
    p.add_argument("points", nargs="+", help="point descriptors (quote each)")
    sweep(p)
    common(p, ("csv", "json"), "csv")
    p.set_defaults(func=cmd_df)

    p = sub.add_parser("classify", help="scrambled-tuple verdict with witnesses")
    p.add_argument("points", nargs="+")
    sweep(p)
    p.add_argument("--threshold", help="smallness threshold (default 2^-(L-2))")
    common(p, ("json", "text"), "json")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", help="p | lemma1 | step2 | lemma2 | oracle-match | w")
    p.add_argument("--prefix", type=int, action="append", help="Morse prefix length (repeatable)")
    p.add_argument("--control", default="01010", help="non-Morse control word for suite p")
    p.add_argument("--gaps")
    p.add_argument("--n", type=int)
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--window", type=int)
    p.add_argument("--horizon", type=int, default=10000)
    p.add_argument("--points", nargs="*")
    p.add_argument("--beta1", default="1")
    p.add_argument("--beta2", default="0")
    p.add_argument("--N", type=int, default=1024)
    p.add_argument("--limit", type=int, default=10 ** 6)
    sweep(p)
    common(p, ("text", "json"), "text")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("plot", help="render a df CSV as SVG (no new computation)")
    p.add_argument("csv")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_plot)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, DescriptorError, DiagonalError, CapacityError, HorizonExceeded,
            ValueError) as exc:
        print(f"morsechaos {args.command}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
