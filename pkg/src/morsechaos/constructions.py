"""Point families built by concatenating (possibly complemented) Morse blocks.

Every family point is a :class:`BlockPoint`: block ``j`` (1-based) has length
``2**a_j`` and carries either M_{a_j} or its complement. Symbols are
computed from the popcount parity of the offset inside the block, so no block
is ever materialized.

Descriptor grammar (ASCII, one line)::

    morse
    const bit=<0|1>
    lemma1 gaps=<a1,a2,...>
    t1 i=<int> gaps=<list>
    t2 beta=<bits> gaps=<list>
    r3 gaps=<list>
    shift k=<int> of=<descriptor>
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Sequence, Tuple

import numpy as np

from .errors import DescriptorError, ParityError
from .symseq import (_FAST_LIMIT, ConstantPoint, MorsePoint, SymbolicPoint,
                     parity_array, shift)


@dataclass(frozen=True)
class GapSequence:
    """Finite working prefix a_1 < a_2 < ... < a_N of the block exponents.

    ``s[k]`` is the block boundary sum_{n<=k} 2^{a_n}, with ``s[0] == 0``.
    """

    a: Tuple[int, ...]
    parity_locked: bool = True
    s: Tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        a = tuple(int(x) for x in self.a)
        if not a:
            raise ValueError("gap sequence must be nonempty")
        if a[0] < 1 or any(x >= y for x, y in zip(a, a[1:])):
            raise ValueError(f"gaps must be positive and strictly increasing: {a}")
        object.__setattr__(self, "a", a)
        s = [0]
        for x in a:
            s.append(s[-1] + (1 << x))
        object.__setattr__(self, "s", tuple(s))

    @classmethod
    def parse(cls, text: str, parity_locked: bool = True) -> "GapSequence":
        try:
            return cls(tuple(int(t) for t in text.split(",") if t.strip()), parity_locked)
        except ValueError as exc:
            raise DescriptorError(f"bad gap list {text!r}: {exc}") from None

    def __len__(self):
        return len(self.a)

    @property
    def parity_ok(self) -> bool:
        return all(x % 2 == n % 2 for n, x in enumerate(self.a, start=1))

    @property
    def horizon(self) -> int:
        return self.s[-1]

    def block_of(self, n: int) -> int:
        """1-based block index j with s_{j-1} < n <= s_j."""
        if n < 1 or n > self.s[-1]:
            raise IndexError(n)
        return bisect.bisect_left(self.s, n)

    def text(self) -> str:
        return ",".join(map(str, self.a))


def require_parity(g: GapSequence):
    if not g.parity_ok:
        bad = [(n, x) for n, x in enumerate(g.a, 1) if x % 2 != n % 2]
        raise ParityError(f"a_n and n must share parity; violated at (n, a_n) = {bad[0]}")


def odd_part(j: int) -> int:
    while j % 2 == 0:
        j //= 2
    return j


def w_set_member(i: int, j: int) -> bool:
    """j in W_i = {2^n (2i - 1) : n >= 1}."""
    return j > 0 and j % 2 == 0 and odd_part(j) == 2 * i - 1


def two_adic_valuation(n: int) -> int:
    if n <= 0:
        raise ValueError("valuation needs a positive integer")
    return (n & -n).bit_length() - 1


@dataclass(frozen=True)
class AlphaCode:
    """alpha(n) = beta(v_2(n) + 1); beta is a finite bit string padded with zeros.

    Distinct betas give alphas that differ at infinitely many n, which is the
    only property of the coding set the constructions rely on.
    """

    beta: str

    def __post_init__(self):
        if self.beta.strip("01"):
            raise DescriptorError(f"beta must be a bit string: {self.beta!r}")

    def beta_at(self, k: int) -> int:
        return int(self.beta[k - 1]) if k <= len(self.beta) else 0

    def alpha_at(self, n: int) -> int:
        return self.beta_at(two_adic_valuation(n) + 1)


def alpha_code(beta) -> AlphaCode:
    if not isinstance(beta, str):
        beta = "".join(str(int(b)) for b in beta)
    return AlphaCode(beta)


@dataclass
class ValidationReport:
    ratios: List[Fraction]
    tolerance: Fraction
    eventually_decreasing: bool
    final_ratio_ok: bool
    parity_checked: bool
    parity_ok: bool

    @property
    def passed(self) -> bool:
        return (self.eventually_decreasing and self.final_ratio_ok
                and (self.parity_ok or not self.parity_checked))


def validate_gaps(g: GapSequence, ratio_tolerance=Fraction(1, 8)) -> ValidationReport:
    """Check the ratios s_{n-1} / 2^{a_n} that must tend to zero."""
    ratios = [Fraction(g.s[n - 1], 1 << g.a[n - 1]) for n in range(1, len(g) + 1)]
    # eventually decreasing: strictly decreasing from the last local maximum on
    peak = max(range(len(ratios)), key=lambda n: (ratios[n], n))
    tail = ratios[peak:]
    decreasing = len(tail) >= 2 and all(x > y for x, y in zip(tail, tail[1:]))
    return ValidationReport(
        ratios=ratios,
        tolerance=Fraction(ratio_tolerance),
        eventually_decreasing=decreasing,
        final_ratio_ok=ratios[-1] <= ratio_tolerance,
        parity_checked=g.parity_locked,
        parity_ok=g.parity_ok,
    )


def shift_exponent_rn(g: GapSequence, n: int) -> int:
    """r_n = 3 * 2^{a_n} - s_{n-1}: sigma^{r_n}(m) starts with M_{a_1} ... M_{a_n}."""
    if not 2 <= n <= len(g):
        raise IndexError(f"n must lie in [2, {len(g)}]")
    return 3 * (1 << g.a[n - 1]) - g.s[n - 1]


class BlockPoint(SymbolicPoint):
    """Concatenation of blocks M_{a_j}, complemented where ``flags[j-1]`` is 1."""

    def __init__(self, gaps: GapSequence, flags: Sequence[int], descriptor: str):
        if len(flags) != len(gaps):
            raise ValueError("one flag per block")
        self.gaps = gaps
        self.flags = tuple(int(f) for f in flags)
        self.horizon = gaps.horizon
        self._descriptor = descriptor
        self._s = np.array([min(x, _FAST_LIMIT) for x in gaps.s], dtype=np.int64)
        self._flags = np.array(self.flags, dtype=np.uint8)

    @property
    def descriptor(self) -> str:
        return self._descriptor

    def _symbol(self, n):
        j = self.gaps.block_of(n)
        p = n - self.gaps.s[j - 1] - 1
        return ((p.bit_count() & 1) ^ self.flags[j - 1])

    def _window(self, start, length):
        if start + length >= _FAST_LIMIT:
            return super()._window(start, length)
        n = np.arange(start, start + length, dtype=np.int64)
        j = np.searchsorted(self._s, n, side="left")  # 1-based block index
        offset = n - self._s[j - 1] - 1
        return parity_array(offset) ^ self._flags[j - 1]


def point_lemma1(g: GapSequence) -> BlockPoint:
    """x = M_{a_1} M_{a_2} M_{a_3} ..., a point of the Morse minimal set."""
    require_parity(g)
    return BlockPoint(g, [0] * len(g), f"lemma1 gaps={g.text()}")


def point_theorem1(i: int, g: GapSequence) -> BlockPoint:
    """x^i: even block j is complemented exactly when j lies in W_i."""
    if i < 1:
        raise ValueError("i must be a positive integer")
    require_parity(g)
    flags = [int(w_set_member(i, j)) for j in range(1, len(g) + 1)]
    return BlockPoint(g, flags, f"t1 i={i} gaps={g.text()}")


def point_theorem2(alpha: AlphaCode, g: GapSequence) -> BlockPoint:
    """x^alpha: block 2t-1 complemented iff alpha(t) = 1; even blocks plain."""
    flags = [alpha.alpha_at((j + 1) // 2) if j % 2 else 0 for j in range(1, len(g) + 1)]
    return BlockPoint(g, flags, f"t2 beta={alpha.beta} gaps={g.text()}")


def point_remark3(g: GapSequence) -> BlockPoint:
    """Every block complemented: the closure point completing a scrambled triple."""
    require_parity(g)
    return BlockPoint(g, [1] * len(g), f"r3 gaps={g.text()}")


def _fields(rest: str, allowed: Tuple[str, ...], tag: str) -> dict:
    out = {}
    for tok in rest.split():
        key, eq, val = tok.partition("=")
        if not eq or key not in allowed or key in out:
            raise DescriptorError(f"bad field {tok!r} for {tag!r}")
        out[key] = val
    missing = [k for k in allowed if k not in out]
    if missing:
        raise DescriptorError(f"{tag!r} needs {', '.join(missing)}")
    return out


def _int(text: str, what: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise DescriptorError(f"{what} must be an integer, got {text!r}") from None


def parse_descriptor(text: str) -> SymbolicPoint:
    text = " ".join(text.split())
    tag, _, rest = text.partition(" ")
    if tag == "morse" and not rest:
        return MorsePoint()
    if tag == "const":
        f = _fields(rest, ("bit",), tag)
        if f["bit"] not in ("0", "1"):
            raise DescriptorError("const bit must be 0 or 1")
        return ConstantPoint(int(f["bit"]))
    if tag == "shift":
        head, sep, inner = rest.partition(" of=")
        if not sep or not head.startswith("k="):
            raise DescriptorError("shift needs 'k=<int> of=<descriptor>'")
        k = _int(head[2:], "k")
        if k < 1:
            raise DescriptorError("shift k must be positive")
        return shift(parse_descriptor(inner), k)
    if tag == "lemma1":
        return point_lemma1(GapSequence.parse(_fields(rest, ("gaps",), tag)["gaps"]))
    if tag == "t1":
        f = _fields(rest, ("i", "gaps"), tag)
        return point_theorem1(_int(f["i"], "i"), GapSequence.parse(f["gaps"]))
    if tag == "t2":
        f = _fields(rest, ("beta", "gaps"), tag)
        return point_theorem2(AlphaCode(f["beta"]),
                              GapSequence.parse(f["gaps"], parity_locked=False))
    if tag == "r3":
        return point_remark3(GapSequence.parse(_fields(rest, ("gaps",), tag)["gaps"]))
    raise DescriptorError(f"unknown descriptor {text!r}")
