"""Independent verifiers.

Nothing here evaluates family points through ``constructions``: block
flags are re-derived from descriptor parameters, Morse prefixes come from a
direct popcount loop, and pair counts are computed by run-length arithmetic
over the block schedule instead of a symbol sweep.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import CapacityError, DescriptorError, HorizonExceeded, ParityError
from .words import Word, find_bbb_pattern

SCAN_CAP = 1 << 14
LINEAR_CAP = 1 << 24


@dataclass
class Check:
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)

    def line(self) -> str:
        extra = " ".join(f"{k}={v}" for k, v in self.detail.items())
        return f"{'PASS' if self.passed else 'FAIL'} {self.name} {extra}".rstrip()


# ---------------------------------------------------------------- schedules

def _parse_simple(desc: str):
    """(tag, params, gaps) for the block-built descriptor tags."""
    parts = desc.split()
    if not parts or parts[0] not in ("lemma1", "t1", "t2", "r3"):
        raise DescriptorError(f"not a family-built descriptor: {desc!r}")
    params = dict(p.split("=", 1) for p in parts[1:])
    gaps = tuple(int(x) for x in params.pop("gaps").split(","))
    return parts[0], params, gaps


def _block_flags(tag: str, params: dict, n_blocks: int) -> List[int]:
    flags = []
    for j in range(1, n_blocks + 1):
        if tag == "lemma1":
            flags.append(0)
        elif tag == "r3":
            flags.append(1)
        elif tag == "t1":
            # W_i = {2^n (2i-1)}: enumerate instead of taking odd parts
            i = int(params["i"])
            w_i = set()
            p = 2
            while p * (2 * i - 1) <= n_blocks:
                w_i.add(p * (2 * i - 1))
                p *= 2
            flags.append(int(j in w_i))
        else:
            beta = params["beta"]
            if j % 2 == 0:
                flags.append(0)
                continue
            t = (j + 1) // 2
            v = 0
            while t % 2 == 0:
                t //= 2
                v += 1
            flags.append(int(beta[v]) if v < len(beta) else 0)
    return flags


@dataclass
class BlockSchedule:
    """Blocks (s_{j-1}, s_j] with each point's plain/complement flag."""

    bounds: List[int]  # s_0 = 0, s_1, ..., s_N
    flags: List[List[int]]  # flags[point][block]
    descriptors: List[str]

    @classmethod
    def from_descriptors(cls, descriptors: Sequence[str]) -> "BlockSchedule":
        parsed = [_parse_simple(d) for d in descriptors]
        gaps = {g for _, _, g in parsed}
        if len(gaps) != 1:
            raise DescriptorError("schedule needs a common gap sequence")
        (gaps,) = gaps
        bounds = [0]
        for a in gaps:
            bounds.append(bounds[-1] + 2 ** a)
        return cls(bounds, [_block_flags(t, p, len(gaps)) for t, p, _ in parsed], list(descriptors))

    @property
    def horizon(self) -> int:
        return self.bounds[-1]

    def intervals(self):
        for j in range(1, len(self.bounds)):
            yield self.bounds[j - 1] + 1, self.bounds[j], [f[j - 1] for f in self.flags]

    def complement_blocks(self, a: int = 0, b: int = 1) -> List[int]:
        """Block indices where points a and b carry complementary blocks (the l_k)."""
        return [j for j in range(1, len(self.bounds)) if self.flags[a][j - 1] != self.flags[b][j - 1]]

    def diff_runs(self, a: int = 0, b: int = 1) -> List[Tuple[int, int, int]]:
        """Maximal runs (first, last, bit) of the pair's difference sequence."""
        runs: List[List[int]] = []
        for lo, hi, f in self.intervals():
            bit = f[a] ^ f[b]
            if runs and runs[-1][2] == bit:
                runs[-1][1] = hi
            else:
                runs.append([lo, hi, bit])
        return [tuple(r) for r in runs]


def _boundary_pattern(delta: Fraction, precision: int) -> List[int]:
    """The L bits of delta * 2^L - 1: the one truncation that cannot decide d < delta."""
    scaled = delta * (1 << precision)
    if scaled.denominator != 1 or not 0 < delta <= 1:
        raise ValueError(f"oracle needs dyadic delta in (0, 1] with denominator <= 2^L, got {delta}")
    b = int(scaled) - 1
    return [(b >> (precision - i)) & 1 for i in range(1, precision + 1)]


def _classify(segments: List[Tuple[int, int]], pattern: List[int], lookahead: int,
              known: int) -> int:
    """0 below / 1 at least / 2 indeterminate for a difference sequence.

    ``segments`` lists (bit, length) runs starting at relative position 1;
    only the first ``known`` positions exist.
    """
    it = iter(segments)
    bit, left = next(it)
    pos = 0
    for want in pattern:
        while left == 0:
            bit, left = next(it)
        pos += 1
        left -= 1
        if bit != want:
            return 0 if bit < want else 1
    # truncation sits on the boundary: below iff a later symbol agrees
    while True:
        if bit == 0 and left > 0:
            p = pos + 1
            return 0 if p <= lookahead and p <= known else 2
        pos += left
        if pos >= min(known, lookahead):
            return 2
        try:
            bit, left = next(it)
        except StopIteration:
            return 2


def exact_pair_counts(descriptors: Sequence[str], delta, horizon: int, precision: int = 32,
                      lookahead: int = 1 << 20) -> Tuple[int, int, int]:
    """(below, at-least, indeterminate) over 0 < k < horizon, by block arithmetic."""
    if len(descriptors) != 2:
        raise ValueError("exact_pair_counts takes a pair")
    if horizon < 2:
        raise ValueError("horizon must be at least 2")
    pattern = _boundary_pattern(Fraction(delta), precision)
    sched = BlockSchedule.from_descriptors(descriptors)
    if horizon - 1 + precision > sched.horizon:
        raise HorizonExceeded(f"schedule ends at {sched.horizon}")
    runs = sched.diff_runs()
    counts = [0, 0, 0]
    for ri, (lo, hi, bit) in enumerate(runs):
        # shift times k with k + 1 inside this run; the lead run has c = hi - k symbols
        k_lo, k_hi = max(lo - 1, 1), min(hi - 1, horizon - 1)
        if k_lo > k_hi:
            continue
        later = [(b, h - l + 1) for l, h, b in runs[ri + 1:]]

        def outcome(c):
            return _classify([(bit, c)] + later, pattern, lookahead, sched.horizon - (hi - c))

        c_min, c_max = hi - k_hi, hi - k_lo
        # past L + 1 the first L bits are constant; the result can then only
        # change where the next agreement (at c + 1 when bit = 1) leaves the
        # lookahead window, so split there and sample each piece at both ends
        edge = min(c_max, precision + 1)
        for c in range(c_min, edge + 1):
            counts[outcome(c)] += 1
        lo_c = max(c_min, edge + 1)
        pieces = [(lo_c, c_max)]
        if lo_c <= lookahead - 1 < c_max:
            pieces = [(lo_c, lookahead - 1), (lookahead, c_max)]
        for a, b in pieces:
            if a > b:
                continue
            ra, rb = outcome(a), outcome(b)
            if ra != rb:
                raise AssertionError(f"non-constant outcome on c in [{a}, {b}]")
            counts[ra] += b - a + 1
    return tuple(counts)


# ---------------------------------------------------------------- Morse facts

def morse_prefix_bits(n: int) -> np.ndarray:
    """First n Morse symbols by doubling; independent of the popcount path."""
    if n > LINEAR_CAP:
        raise CapacityError(f"prefix {n} exceeds linear cap {LINEAR_CAP}")
    a = np.zeros(1, dtype=np.uint8)
    while a.size < n:
        a = np.concatenate((a, 1 - a))
    return a[:n]


def verify_lemma1(gaps: Sequence[int], n: int, cap: int = LINEAR_CAP) -> Check:
    """sigma^{r_n}(m) begins with M_{a_1} ... M_{a_n}, checked on a materialized prefix."""
    gaps = tuple(gaps)
    if not 2 <= n <= len(gaps):
        raise ValueError(f"n must lie in [2, {len(gaps)}]")
    bad = [(i, a) for i, a in enumerate(gaps[:n], 1) if a % 2 != i % 2]
    if bad:
        raise ParityError(f"gaps need a_n = n mod 2; violated at (n, a_n) = {bad[0]}")
    s_prev = sum(2 ** a for a in gaps[:n - 1])
    s_n = s_prev + 2 ** gaps[n - 1]
    r_n = 3 * 2 ** gaps[n - 1] - s_prev
    if r_n + s_n > cap:
        raise CapacityError(f"need {r_n + s_n} Morse symbols, cap {cap}")
    m = morse_prefix_bits(r_n + s_n)
    expected = np.concatenate([morse_prefix_bits(2 ** a) for a in gaps[:n]])
    got = m[r_n:r_n + s_n]
    mism = np.flatnonzero(got != expected)
    detail = {"n": n, "r_n": r_n, "s_n": s_n}
    if mism.size:
        detail["first_mismatch"] = int(mism[0]) + 1
    return Check("lemma1", mism.size == 0, detail)


def verify_property_p(prefix_len: int, cap: int = SCAN_CAP, word=None) -> Check:
    """No factor B B b in the Morse prefix (or in ``word`` when given as a control)."""
    if prefix_len > cap:
        raise CapacityError(f"scan length {prefix_len} exceeds cap {cap}")
    w = Word.from_array(morse_prefix_bits(prefix_len)) if word is None else Word(word)
    wit = find_bbb_pattern(w)
    detail = {"length": len(w)}
    if wit is not None:
        detail.update(start=wit[0], block_length=wit[1])
    return Check("property-P", wit is None, detail)


def w_partition_check(limit: int) -> Check:
    """Each even j <= limit lies in exactly one W_i, two independent ways."""
    from .constructions import w_set_member

    owners = {}
    i = 1
    while 2 * (2 * i - 1) <= limit:
        p = 2
        while p * (2 * i - 1) <= limit:
            j = p * (2 * i - 1)
            owners.setdefault(j, []).append(i)
            p *= 2
        i += 1
    problems = []
    for j in range(2, limit + 1, 2):
        listed = owners.get(j, [])
        if len(listed) != 1 or not w_set_member(listed[0], j):
            problems.append(j)
        if w_set_member(listed[0] + 1, j) if listed else False:
            problems.append(j)
    detail = {"limit": limit}
    if problems:
        detail["first_bad"] = problems[0]
    return Check("W-partition", not problems, detail)


# ---------------------------------------------------------------- step II windows

def verify_step2_window(u, v, r: int, horizon: int, window_len: Optional[int] = None) -> Check:
    """No 1 <= k <= horizon where sigma^k(u) and sigma^{k+r}(v) share their first window_len symbols."""
    if r < 1:
        raise ValueError("r must be positive")
    W = 14 * r if window_len is None else window_len
    a = u.window(2, horizon + W - 1)
    b = v.window(2 + r, horizon + W - 1)
    eq = (a == b).astype(np.int64)
    cs = np.concatenate(([0], np.cumsum(eq)))
    full = np.flatnonzero(cs[W:] - cs[:-W] == W)
    detail = {"r": r, "window": W, "horizon": horizon}
    if full.size:
        k = int(full[0]) + 1
        detail.update(k=k, block="".join(map(str, a[k - 1:k - 1 + W])))
    return Check("step2-window", full.size == 0, detail)


# ---------------------------------------------------------------- coding

def alpha_difference_count(beta1: str, beta2: str, N: int) -> int:
    """#{n <= N : alpha1(n) != alpha2(n)} for the 2-adic coding alpha(n) = beta(v2(n)+1)."""
    width = max(len(beta1), len(beta2))
    b1, b2 = beta1.ljust(width, "0"), beta2.ljust(width, "0")
    if b1 == b2:
        raise ValueError("betas agree on the inspected prefix")
    count = 0
    for n in range(1, N + 1):
        v = 0
        while not n >> v & 1:
            v += 1
        x = b1[v] if v < width else "0"
        y = b2[v] if v < width else "0"
        count += x != y
    return count
