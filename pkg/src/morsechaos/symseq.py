"""Points of the one-sided full 2-shift, evaluated lazily.

A point is anything that can produce the symbol at a 1-based index. Bulk
access goes through :meth:`SymbolicPoint.window`, which returns a numpy
``uint8`` array and is vectorized whenever indices fit in 62 bits; larger
(big-integer) indices fall back to per-symbol evaluation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import CapacityError, HorizonExceeded
from .words import Word

MATERIALIZE_CAP = 1 << 24
DEFAULT_PRECISION = 32

# indices below this bound go through the int64 fast path
_FAST_LIMIT = 1 << 62


def parity_array(x: np.ndarray) -> np.ndarray:
    """Parity of the binary popcount, elementwise, for nonnegative int64."""
    return (np.bitwise_count(x.astype(np.uint64)) & 1).astype(np.uint8)


class SymbolicPoint:
    """Base class. Subclasses implement ``_symbol`` and optionally ``_window``."""

    #: last evaluable index, ``None`` when the point is defined everywhere
    horizon: Optional[int] = None

    @property
    def descriptor(self) -> str:
        raise NotImplementedError

    def _symbol(self, n: int) -> int:
        raise NotImplementedError

    def _window(self, start: int, length: int) -> np.ndarray:
        return np.fromiter((self._symbol(n) for n in range(start, start + length)),
                           dtype=np.uint8, count=length)

    def _check(self, last: int):
        if self.horizon is not None and last > self.horizon:
            raise HorizonExceeded(
                f"index {last} beyond horizon {self.horizon} of {self.descriptor!r}")

    def symbol_at(self, n: int) -> int:
        if n < 1:
            raise IndexError("indices are 1-based")
        self._check(n)
        return self._symbol(n)

    def window(self, start: int, length: int) -> np.ndarray:
        """Symbols at ``start, ..., start + length - 1``."""
        if start < 1:
            raise IndexError("indices are 1-based")
        if length <= 0:
            return np.zeros(0, dtype=np.uint8)
        self._check(start + length - 1)
        return self._window(start, length)

    def __repr__(self):
        return f"<{type(self).__name__} {self.descriptor}>"

    def __eq__(self, other):
        return isinstance(other, SymbolicPoint) and self.descriptor == other.descriptor

    def __hash__(self):
        return hash(self.descriptor)


class MorsePoint(SymbolicPoint):
    """The Morse sequence m: symbol n is the popcount parity of n - 1."""

    @property
    def descriptor(self) -> str:
        return "morse"

    def _symbol(self, n: int) -> int:
        return (n - 1).bit_count() & 1

    def _window(self, start, length):
        if start + length < _FAST_LIMIT:
            return parity_array(np.arange(start - 1, start - 1 + length, dtype=np.int64))
        return super()._window(start, length)


class ConstantPoint(SymbolicPoint):
    def __init__(self, bit: int):
        if bit not in (0, 1):
            raise ValueError("bit must be 0 or 1")
        self.bit = bit

    @property
    def descriptor(self) -> str:
        return f"const bit={self.bit}"

    def _symbol(self, n):
        return self.bit

    def _window(self, start, length):
        return np.full(length, self.bit, dtype=np.uint8)


class ShiftedPoint(SymbolicPoint):
    def __init__(self, base: SymbolicPoint, k: int):
        self.base = base
        self.k = k
        self.horizon = None if base.horizon is None else base.horizon - k

    @property
    def descriptor(self) -> str:
        return f"shift k={self.k} of={self.base.descriptor}"

    def _symbol(self, n):
        return self.base._symbol(n + self.k)

    def _window(self, start, length):
        return self.base._window(start + self.k, length)


def morse_point() -> MorsePoint:
    return MorsePoint()


def shift(x: SymbolicPoint, k: int) -> SymbolicPoint:
    """sigma^k(x); nested shifts collapse so that shift(shift(x,a),b) == shift(x,a+b)."""
    if k < 0:
        raise ValueError("shift exponent must be nonnegative")
    if k == 0:
        return x
    if isinstance(x, ShiftedPoint):
        return ShiftedPoint(x.base, x.k + k)
    return ShiftedPoint(x, k)


def prefix(x: SymbolicPoint, n: int, cap: int = MATERIALIZE_CAP) -> Word:
    if n < 1:
        raise ValueError("prefix length must be positive")
    if n > cap:
        raise CapacityError(f"prefix of length {n} exceeds cap {cap}")
    return Word.from_array(x.window(1, n))


@dataclass(frozen=True)
class TruncatedDistance:
    """sum_{i<=L} [u_i != v_i] / 2^i; the true metric lies in [value, value + error_bound]."""

    value: Fraction
    precision: int

    @property
    def error_bound(self) -> Fraction:
        return Fraction(1, 1 << self.precision)

    @property
    def upper(self) -> Fraction:
        return self.value + self.error_bound

    def surely_below(self, delta) -> bool:
        return self.upper < delta

    def surely_at_least(self, delta) -> bool:
        return self.value >= delta


def diff_numerator(diff: np.ndarray) -> int:
    """Integer D with D / 2^len(diff) = sum diff[i-1] / 2^i."""
    if diff.size == 0:
        return 0
    return int.from_bytes(np.packbits(diff[::-1], bitorder="little").tobytes(), "little")


def truncated_distance(u: SymbolicPoint, v: SymbolicPoint,
                       precision: int = DEFAULT_PRECISION) -> TruncatedDistance:
    if precision < 1:
        raise ValueError("precision must be positive")
    diff = u.window(1, precision) ^ v.window(1, precision)
    return TruncatedDistance(Fraction(diff_numerator(diff), 1 << precision), precision)
