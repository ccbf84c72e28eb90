from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from morsechaos.errors import CapacityError, HorizonExceeded
from morsechaos.symseq import (ConstantPoint, diff_numerator, morse_point, prefix, shift,
                               truncated_distance)
from morsechaos.words import morse_block


def test_morse_prefix_matches_block():
    for k in range(1, 13):
        assert prefix(morse_point(), 2 ** k) == morse_block(k)


def test_symbol_at_is_one_based():
    m = morse_point()
    assert [m.symbol_at(n) for n in range(1, 9)] == [0, 1, 1, 0, 1, 0, 0, 1]
    with pytest.raises(IndexError):
        m.symbol_at(0)


def test_big_index_path_agrees_with_bit_count():
    m = morse_point()
    n = 2 ** 70 + 12345
    assert m.symbol_at(n) == (n - 1).bit_count() % 2
    assert list(m.window(n, 4)) == [m.symbol_at(n + i) for i in range(4)]


def test_shift_collapses_and_is_identity_at_zero():
    m = morse_point()
    assert shift(m, 0) is m
    assert shift(shift(m, 3), 4) == shift(m, 7)
    assert shift(m, 10).window(1, 6).tolist() == m.window(11, 6).tolist()


@given(st.integers(0, 500), st.integers(0, 500), st.integers(1, 64))
def test_shift_composition(a, b, n):
    m = morse_point()
    assert np.array_equal(shift(shift(m, a), b).window(1, n), m.window(1 + a + b, n))


def test_prefix_cap():
    with pytest.raises(CapacityError):
        prefix(morse_point(), 100, cap=10)


def test_horizon_is_enforced():
    from morsechaos.constructions import GapSequence, point_lemma1
    x = point_lemma1(GapSequence((1, 2)))
    assert x.horizon == 6
    with pytest.raises(HorizonExceeded):
        x.window(5, 3)
    with pytest.raises(HorizonExceeded):
        shift(x, 2).symbol_at(5)


def test_diff_numerator():
    assert diff_numerator(np.array([1, 0, 1], dtype=np.uint8)) == 5
    assert diff_numerator(np.zeros(0, dtype=np.uint8)) == 0
    big = np.ones(100, dtype=np.uint8)
    assert diff_numerator(big) == 2 ** 100 - 1


def test_truncated_distance_constants():
    d = truncated_distance(ConstantPoint(0), ConstantPoint(1), precision=10)
    assert d.value == 1 - Fraction(1, 1024)
    assert d.upper == 1
    assert not d.surely_below(1)
    assert d.surely_at_least(Fraction(1, 2))


@given(st.integers(0, 300), st.integers(0, 300), st.integers(1, 40))
def test_metric_symmetry_and_bounds(a, b, L):
    u, v = shift(morse_point(), a), shift(morse_point(), b)
    d1, d2 = truncated_distance(u, v, L), truncated_distance(v, u, L)
    assert d1 == d2
    assert 0 <= d1.value < 1
    if a == b:
        assert d1.value == 0
