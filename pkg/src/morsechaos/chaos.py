"""Finite-horizon estimates of the lower/upper distribution functions and
scrambled-tuple evidence for tuples of symbolic points.

Distances are truncated to ``precision`` symbols. A comparison ``d < delta``
is decided conservatively from the truncated value; when ``delta * 2**L`` is
an integer the one undecidable configuration (the truncated value sits one
ulp below delta) is resolved by looking ahead for the next agreeing symbol,
up to ``lookahead`` symbols and never past a point's horizon. Anything still
undecided is counted as indeterminate.

Sweeps run over chunks of shift times k; chunk results are merged by integer
addition and min/max with the smallest-k tie-break, so the outcome does not
depend on the number of workers.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .constructions import BlockPoint
from .errors import DiagonalError, HorizonExceeded
from .symseq import DEFAULT_PRECISION, MorsePoint, ShiftedPoint, SymbolicPoint

CHUNK = 1 << 16
DEFAULT_LOOKAHEAD = 1 << 20
CSV_COLUMNS = ("delta", "m", "below", "atleast", "indeterminate", "phi_hat", "phi_star_hat")

BELOW, ATLEAST, INDET = 0, 1, 2


def default_delta_grid() -> List[Fraction]:
    small = [Fraction(1, 2 ** l) for l in range(1, 9)]
    near_diam = [1 - Fraction(1, 2 ** r) for r in range(1, 9)]
    return sorted(set(small + near_diam))


def small_threshold(precision: int) -> Fraction:
    return Fraction(1, 2 ** (precision - 2))


def _check_grid(grid) -> List[Fraction]:
    grid = [Fraction(d) for d in grid]
    if not grid:
        raise ValueError("empty delta grid")
    for d in grid:
        if not 0 < d <= 1:
            raise ValueError(f"delta must lie in (0, 1], got {d}")
    return grid


def _check_tuple(points: Sequence[SymbolicPoint]):
    if len(points) < 2:
        raise ValueError("need at least two points")
    seen = set()
    for p in points:
        if p.descriptor in seen:
            raise DiagonalError(f"point {p.descriptor!r} repeated (diagonal tuple)")
        seen.add(p.descriptor)


def _horizon(points) -> Optional[int]:
    hs = [p.horizon for p in points if p.horizon is not None]
    return min(hs) if hs else None


def numerators(diff: np.ndarray, count: int, precision: int) -> np.ndarray:
    """D[c] = sum_{i=1..L} diff[c+i-1] * 2^(L-i) for c < count."""
    if precision <= 62:
        D = np.zeros(count, dtype=np.int64)
        for i in range(precision):
            D |= diff[i:i + count].astype(np.int64) << (precision - 1 - i)
        return D
    D = np.zeros(count, dtype=object)
    for i in range(precision):
        D += diff[i:i + count].astype(object) * (1 << (precision - 1 - i))
    return D


def next_agreement(u: SymbolicPoint, v: SymbolicPoint, start: int, limit: int,
                   v_offset: int = 0) -> Optional[int]:
    """First index n in [start, limit] with u_n == v_{n + v_offset}, else None."""
    step = 4096
    n = start
    while n <= limit:
        length = min(step, limit - n + 1)
        eq = np.flatnonzero(u.window(n, length) == v.window(n + v_offset, length))
        if eq.size:
            return n + int(eq[0])
        n += length
        step = min(step * 2, 1 << 20)
    return None


@dataclass
class _ChunkResult:
    lower: np.ndarray  # (len(grid), 3) int64
    upper: np.ndarray
    min_max: Tuple[int, int]  # (numerator, k) smallest max-pair distance
    max_min: Tuple[int, int]  # (numerator, k) largest min-pair distance

    def merge(self, other: "_ChunkResult") -> "_ChunkResult":
        return _ChunkResult(
            self.lower + other.lower,
            self.upper + other.upper,
            min(self.min_max, other.min_max),
            max(self.max_min, other.max_min, key=lambda t: (t[0], -t[1])),
        )


class _Sweep:
    def __init__(self, points, grid, precision, lookahead):
        self.points = list(points)
        self.pairs = list(combinations(range(len(self.points)), 2))
        self.grid = grid
        self.L = precision
        self.lookahead = lookahead
        self.horizon = _horizon(self.points)
        scale = 1 << precision
        # D < B - 1: surely below; D >= B: surely at least; D == B - 1: boundary
        self.bounds = [math.ceil(d * scale) for d in grid]
        self.refinable = [(d * scale).denominator == 1 for d in grid]

    def run_chunk(self, k0: int, k1: int) -> _ChunkResult:
        L, C = self.L, k1 - k0
        syms = [p.window(k0 + 1, C + L - 1) for p in self.points]
        n_pairs = len(self.pairs)
        states = np.empty((n_pairs, len(self.grid), C), dtype=np.uint8)
        Ds = []
        for pi, (a, b) in enumerate(self.pairs):
            diff = syms[a] ^ syms[b]
            D = numerators(diff, C, L)
            Ds.append(D)
            fallback: List[Optional[int]] = []  # lazily filled cache
            nz = None
            for gi, B in enumerate(self.bounds):
                st = np.full(C, INDET, dtype=np.uint8)
                st[D < B - 1] = BELOW
                st[D >= B] = ATLEAST
                if self.refinable[gi]:
                    boundary = np.flatnonzero(D == B - 1)
                    if boundary.size:
                        if nz is None:
                            nz = self._next_zero_table(diff)
                        for c in boundary:
                            st[c] = self._resolve(a, b, k0, k1, int(c), diff, nz, fallback)
                states[pi, gi] = st
        lower = np.zeros((len(self.grid), 3), dtype=np.int64)
        upper = np.zeros((len(self.grid), 3), dtype=np.int64)
        for gi in range(len(self.grid)):
            st = states[:, gi, :]
            any_below = (st == BELOW).any(axis=0)
            all_atleast = (st == ATLEAST).all(axis=0)
            lower[gi] = [any_below.sum(), all_atleast.sum(), C - any_below.sum() - all_atleast.sum()]
            all_below = (st == BELOW).all(axis=0)
            any_atleast = (st == ATLEAST).any(axis=0)
            upper[gi] = [all_below.sum(), any_atleast.sum(), C - all_below.sum() - any_atleast.sum()]
        if n_pairs == 1:
            dmax = dmin = Ds[0]
        else:
            stack = np.vstack(Ds)
            dmax, dmin = stack.max(axis=0), stack.min(axis=0)
        imin = int(np.argmin(dmax))
        imax = int(np.argmax(dmin))
        return _ChunkResult(lower, upper, (int(dmax[imin]), k0 + imin), (int(dmin[imax]), k0 + imax))

    @staticmethod
    def _next_zero_table(diff: np.ndarray) -> np.ndarray:
        idx = np.where(diff == 0, np.arange(diff.size), diff.size)
        return np.minimum.accumulate(idx[::-1])[::-1]

    def _resolve(self, a, b, k0, k1, c, diff, nz, fallback) -> int:
        # boundary case: d < delta iff some symbol after position L agrees
        k = k0 + c
        t = c + self.L
        if t < diff.size and nz[t] < diff.size:
            p = k0 + 1 + int(nz[t])
        else:
            if not fallback:
                start = k0 + 1 + diff.size
                limit = k1 - 1 + self.lookahead
                if self.horizon is not None:
                    limit = min(limit, self.horizon)
                fallback.append(next_agreement(self.points[a], self.points[b], start, limit))
            p = fallback[0]
        if p is not None and p - k <= self.lookahead and (self.horizon is None or p <= self.horizon):
            return BELOW
        return INDET


def _segments(boundaries: Sequence[int], chunk: int) -> List[Tuple[int, int, int]]:
    """Split [1, boundaries[-1]) into chunks tagged with their segment index."""
    out = []
    lo = 1
    for si, hi in enumerate(boundaries):
        k = lo
        while k < hi:
            out.append((si, k, min(hi, k + chunk)))
            k = min(hi, k + chunk)
        lo = max(lo, hi)
    return out


def _run(points, grid, boundaries, precision, lookahead, workers, chunk):
    sweep = _Sweep(points, grid, precision, lookahead)
    last = boundaries[-1]
    if sweep.horizon is not None and last - 1 + precision > sweep.horizon:
        raise HorizonExceeded(
            f"need symbols up to {last - 1 + precision}, points evaluable to {sweep.horizon}")
    tasks = _segments(boundaries, chunk)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(lambda t: sweep.run_chunk(t[1], t[2]), tasks))
    else:
        results = [sweep.run_chunk(k0, k1) for _, k0, k1 in tasks]
    merged: Dict[int, _ChunkResult] = {}
    for (si, _, _), r in zip(tasks, results):
        merged[si] = merged[si].merge(r) if si in merged else r
    return merged


@dataclass
class DistributionEstimate:
    horizon: int
    delta_grid: List[Fraction]
    precision: int
    lower_counts: List[Tuple[int, int, int]]
    upper_counts: List[Tuple[int, int, int]]

    @property
    def phi_hat(self) -> List[Fraction]:
        return [Fraction(c[BELOW], self.horizon - 1) for c in self.lower_counts]

    @property
    def phi_star_hat(self) -> List[Fraction]:
        return [Fraction(c[BELOW], self.horizon - 1) for c in self.upper_counts]

    def phi(self, delta) -> Fraction:
        return self.phi_hat[self.delta_grid.index(Fraction(delta))]

    def phi_star(self, delta) -> Fraction:
        return self.phi_star_hat[self.delta_grid.index(Fraction(delta))]

    def counts(self, delta, which: str = "lower") -> Tuple[int, int, int]:
        table = self.lower_counts if which == "lower" else self.upper_counts
        return table[self.delta_grid.index(Fraction(delta))]


def _estimates(points, grid, checkpoints, precision, lookahead, workers, chunk):
    merged = _run(points, grid, checkpoints, precision, lookahead, workers, chunk)
    out = []
    lower = np.zeros((len(grid), 3), dtype=np.int64)
    upper = np.zeros((len(grid), 3), dtype=np.int64)
    for si, m in enumerate(checkpoints):
        if si in merged:
            lower = lower + merged[si].lower
            upper = upper + merged[si].upper
        out.append(DistributionEstimate(
            m, list(grid), precision,
            [tuple(int(x) for x in row) for row in lower],
            [tuple(int(x) for x in row) for row in upper]))
    return out, merged


def _check_checkpoints(checkpoints) -> List[int]:
    cps = [int(c) for c in checkpoints]
    if not cps:
        raise ValueError("empty checkpoint list")
    if cps[0] < 2 or any(x >= y for x, y in zip(cps, cps[1:])):
        raise ValueError("checkpoints must be strictly increasing horizons m >= 2")
    return cps


def estimate_df(points: Sequence[SymbolicPoint], delta_grid=None, horizon: int = 1000,
                precision: int = DEFAULT_PRECISION, lookahead: int = DEFAULT_LOOKAHEAD,
                workers: int = 1, chunk: int = CHUNK) -> DistributionEstimate:
    """Empirical Phi and Phi* over shift times 0 < k < horizon."""
    return estimate_df_checkpoints(points, delta_grid, [horizon], precision,
                                   lookahead, workers, chunk)[0]


def estimate_df_checkpoints(points, delta_grid=None, checkpoints=(1000,),
                            precision=DEFAULT_PRECISION, lookahead=DEFAULT_LOOKAHEAD,
                            workers=1, chunk=CHUNK) -> List[DistributionEstimate]:
    """One sweep, cumulative estimates read off at each checkpoint."""
    _check_tuple(points)
    grid = _check_grid(default_delta_grid() if delta_grid is None else delta_grid)
    cps = _check_checkpoints(checkpoints)
    return _estimates(points, grid, cps, precision, lookahead, workers, chunk)[0]


def estimates_to_csv(estimates: Sequence[DistributionEstimate], header: Optional[dict] = None) -> str:
    """CSV text; ``below/atleast/indeterminate`` are the min-over-pairs tallies."""
    buf = io.StringIO()
    if header is not None:
        buf.write("# " + json.dumps(header, sort_keys=True) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for est in estimates:
        for d, c, ph, ps in zip(est.delta_grid, est.lower_counts, est.phi_hat, est.phi_star_hat):
            w.writerow([repr(float(d)), est.horizon, c[0], c[1], c[2],
                        repr(float(ph)), repr(float(ps))])
    return buf.getvalue()


SCRAMBLED = "scrambled-evidence"
COND1_FAILS = "not-scrambled:condition1-fails"
COND2_FAILS = "not-scrambled:condition2-fails"
INCONCLUSIVE = "inconclusive"


@dataclass
class TupleVerdict:
    descriptors: List[str]
    checkpoints: List[int]
    precision: int
    threshold: Fraction
    # per tail window [c_{t-1}, c_t): (numerator, witness k)
    window_min_max: List[Tuple[int, int]]
    window_max_min: List[Tuple[int, int]]
    liminf_max_estimate: List[Fraction]
    limsup_min_estimate: List[Fraction]
    classification: str
    extremal_evidence: Dict[int, Dict[Fraction, Fraction]] = field(default_factory=dict)
    estimates: List[DistributionEstimate] = field(default_factory=list, repr=False)

    @property
    def error_bound(self) -> Fraction:
        return Fraction(1, 1 << self.precision)

    def to_dict(self) -> dict:
        f = str
        return {
            "descriptors": self.descriptors,
            "checkpoints": self.checkpoints,
            "precision": self.precision,
            "threshold": f(self.threshold),
            "error_bound": f(self.error_bound),
            "classification": self.classification,
            "liminf_max_estimate": [f(x) for x in self.liminf_max_estimate],
            "limsup_min_estimate": [f(x) for x in self.limsup_min_estimate],
            "windows": [
                {"from": lo, "to": hi,
                 "min_of_max": f(Fraction(a, 1 << self.precision)), "min_of_max_k": ka,
                 "max_of_min": f(Fraction(b, 1 << self.precision)), "max_of_min_k": kb}
                for lo, hi, (a, ka), (b, kb) in zip(self.checkpoints, self.checkpoints[1:],
                                                     self.window_min_max, self.window_max_min)
            ],
            "extremal_evidence": {
                str(m): {f(d): f(v) for d, v in table.items()}
                for m, table in self.extremal_evidence.items()
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def classify_tuple(points: Sequence[SymbolicPoint], checkpoints: Sequence[int],
                   delta_grid=None, precision: int = DEFAULT_PRECISION,
                   threshold=None, lookahead: int = DEFAULT_LOOKAHEAD,
                   workers: int = 1, chunk: int = CHUNK) -> TupleVerdict:
    """Finite-horizon evidence for or against the tuple being scrambled.

    The region before ``checkpoints[0]`` is burn-in; each later checkpoint
    closes a tail window. Running statistics are cumulative over tail windows.
    """
    _check_tuple(points)
    grid = _check_grid(default_delta_grid() if delta_grid is None else delta_grid)
    cps = _check_checkpoints(checkpoints)
    if len(cps) < 2:
        raise ValueError("classification needs a burn-in checkpoint and at least one tail window")
    threshold = small_threshold(precision) if threshold is None else Fraction(threshold)
    estimates, merged = _estimates(points, grid, cps, precision, lookahead, workers, chunk)

    scale = 1 << precision
    wmm, wmx, liminf, limsup = [], [], [], []
    for t in range(1, len(cps)):
        r = merged[t]
        wmm.append(r.min_max)
        wmx.append(r.max_min)
        lo = min(x for x, _ in wmm)
        hi = max(x for x, _ in wmx)
        liminf.append(Fraction(lo, scale))
        limsup.append(Fraction(hi, scale))

    err = Fraction(1, scale)
    if all(v + err < threshold for v in limsup):
        verdict = COND2_FAILS
    elif liminf[-1] >= threshold:
        verdict = COND1_FAILS
    elif liminf[-1] + err < threshold and limsup[-1] >= threshold:
        verdict = SCRAMBLED
    else:
        verdict = INCONCLUSIVE

    near_diam = [d for d in grid if d >= Fraction(1, 2)]
    extremal = {est.horizon: {d: est.phi(d) for d in near_diam} for est in estimates}
    return TupleVerdict([p.descriptor for p in points], cps, precision, threshold,
                        wmm, wmx, liminf, limsup, verdict, extremal, estimates)


def _is_family(p: SymbolicPoint) -> bool:
    if isinstance(p, ShiftedPoint):
        p = p.base
    return isinstance(p, (BlockPoint, MorsePoint))


@dataclass
class DistalityReport:
    r: int
    horizon: int
    precision: int
    min_distance: Fraction
    argmin_k: int
    floor: Fraction
    applicable: bool

    @property
    def holds(self) -> bool:
        return self.applicable and self.min_distance >= self.floor


def shifted_pair_distality(u: SymbolicPoint, v: SymbolicPoint, r: int, horizon: int,
                           precision: Optional[int] = None, chunk: int = CHUNK) -> DistalityReport:
    """min over 1 <= k <= horizon of d(sigma^k u, sigma^{k+r} v), truncated.

    ``floor`` is 2^{-14r}; the default precision 14r makes ``min >= floor``
    equivalent to "no aligned window of 14r symbols agrees".
    """
    if r < 1:
        raise ValueError("r must be positive")
    L = 14 * r if precision is None else precision
    best = (None, 0)
    k = 1
    while k <= horizon:
        C = min(chunk, horizon - k + 1)
        a = u.window(k + 1, C + L - 1)
        b = v.window(k + r + 1, C + L - 1)
        D = numerators(a ^ b, C, L)
        i = int(np.argmin(D))
        if best[0] is None or int(D[i]) < best[0]:
            best = (int(D[i]), k + i)
        k += C
    return DistalityReport(r, horizon, L, Fraction(best[0], 1 << L), best[1],
                           Fraction(1, 2 ** (14 * r)), _is_family(u) and _is_family(v))
