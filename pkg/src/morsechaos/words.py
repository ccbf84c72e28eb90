"""Finite binary words: Morse blocks, complement, concatenation and
the overlap / cube scanners.

Words are stored as ASCII bytes over ``b"01"``; indices into a word are
0-based (points of the shift space use 1-based indices, see ``symseq``).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np

from .errors import CapacityError

MAX_BLOCK_ORDER = 30

_FLIP = bytes.maketrans(b"01", b"10")

Witness = Tuple[int, int]  # (start index, block length)


@dataclass(frozen=True)
class Word:
    bits: bytes = b""

    def __post_init__(self):
        if isinstance(self.bits, str):
            object.__setattr__(self, "bits", self.bits.encode("ascii"))
        if self.bits.strip(b"01"):
            raise ValueError(f"word must be over {{0,1}}: {self.bits[:32]!r}")

    @classmethod
    def from_array(cls, arr) -> "Word":
        a = np.asarray(arr, dtype=np.uint8)
        return cls((a + ord("0")).tobytes())

    @property
    def length(self) -> int:
        return len(self.bits)

    def __len__(self):
        return len(self.bits)

    def __str__(self):
        return self.bits.decode("ascii")

    def __getitem__(self, item):
        if isinstance(item, slice):
            return Word(self.bits[item])
        return self.bits[item] - 48

    def __add__(self, other: "Word") -> "Word":
        return concat(self, other)

    def __invert__(self) -> "Word":
        return complement(self)

    def to_array(self) -> np.ndarray:
        return np.frombuffer(self.bits, dtype=np.uint8) - ord("0")


WordLike = Union[Word, str, bytes]


def as_word(w: WordLike) -> Word:
    return w if isinstance(w, Word) else Word(w)


def morse_block(order: int, max_order: int = MAX_BLOCK_ORDER) -> Word:
    """M_0 = 0, M_i = M_{i-1} followed by its complement."""
    if order < 0:
        raise ValueError("order must be nonnegative")
    if order > max_order:
        raise CapacityError(f"Morse block of order {order} exceeds cap {max_order}")
    bits = b"0"
    for _ in range(order):
        bits = bits + bits.translate(_FLIP)
    return Word(bits)


def complement(w: WordLike) -> Word:
    return Word(as_word(w).bits.translate(_FLIP))


def concat(a: WordLike, b: WordLike) -> Word:
    return Word(as_word(a).bits + as_word(b).bits)


def is_factor(needle: WordLike, haystack: WordLike) -> bool:
    return as_word(needle).bits in as_word(haystack).bits


def _first_run(eq: np.ndarray, run: int) -> int:
    """Start of the first run of at least ``run`` consecutive True values, or -1."""
    if run <= 0:
        return 0
    if eq.size < run:
        return -1
    cs = np.concatenate(([0], np.cumsum(eq, dtype=np.int64)))
    hits = np.flatnonzero(cs[run:] - cs[:-run] == run)
    return int(hits[0]) if hits.size else -1


def _scan_fast(w: Word, cube: bool) -> Optional[Witness]:
    # B B x with |B| = L occurs at s iff w[i] == w[i+L] for a run of `need`
    # positions starting at s: need = L + 1 for the overlap BBb, 2L for BBB.
    a = w.to_array()
    n = a.size
    best: Optional[Witness] = None
    L = 1
    while True:
        need = 2 * L if cube else L + 1
        if L + need > n:
            break
        # only starts below the current best can improve on it
        stop = n if best is None else min(n, best[0] - 1 + need + L)
        if stop - L >= need:
            eq = a[:stop - L] == a[L:stop]
            start = _first_run(eq, need)
            if start >= 0 and (best is None or start < best[0]):
                best = (start, L)
        L += 1
    return best


def _scan_reference(w: Word, cube: bool) -> Optional[Witness]:
    b = w.bits
    n = len(b)
    for s in range(n):
        L = 1
        while s + 2 * L + (L if cube else 1) <= n:
            if b[s:s + L] == b[s + L:s + 2 * L]:
                tail = b[s + 2 * L:s + 3 * L] if cube else b[s + 2 * L:s + 2 * L + 1]
                if tail == b[s:s + len(tail)]:
                    return (s, L)
            L += 1
    return None


def find_bbb_pattern(w: WordLike, method: str = "fast") -> Optional[Witness]:
    """Least (start, |B|) occurrence of B B b with b the first symbol of B.

    ``None`` means the word is overlap-free.
    """
    w = as_word(w)
    if method == "reference":
        return _scan_reference(w, cube=False)
    return _scan_fast(w, cube=False)


def find_cube(w: WordLike, method: str = "fast") -> Optional[Witness]:
    """Least (start, |B|) occurrence of B B B, or ``None`` if cube-free."""
    w = as_word(w)
    if method == "reference":
        return _scan_reference(w, cube=True)
    return _scan_fast(w, cube=True)
