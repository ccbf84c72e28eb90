from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from morsechaos.constructions import (AlphaCode, GapSequence, alpha_code, odd_part,
                                      parse_descriptor, point_lemma1, point_remark3,
                                      point_theorem1, point_theorem2, shift_exponent_rn,
                                      two_adic_valuation, validate_gaps, w_set_member)
from morsechaos.errors import DescriptorError, ParityError
from morsechaos.symseq import morse_point, prefix
from morsechaos.words import morse_block


def test_gap_boundaries():
    g = GapSequence((3, 4, 9, 16))
    assert g.s == (0, 8, 24, 536, 66072)
    assert g.block_of(1) == 1 and g.block_of(8) == 1 and g.block_of(9) == 2
    with pytest.raises(ValueError):
        GapSequence((3, 3))


def test_shift_exponents():
    g = GapSequence(tuple(range(1, 6)))
    assert [shift_exponent_rn(g, n) for n in range(2, 6)] == [10, 18, 34, 66]


def test_plain_stream_is_block_concatenation():
    g = GapSequence((1, 2, 3, 4))
    want = "".join(str(morse_block(a)) for a in g.a)
    assert str(prefix(point_lemma1(g), g.horizon)) == want


def test_small_prefixes():
    assert str(prefix(parse_descriptor("t1 i=1 gaps=1,2"), 6)) == "011001"
    assert str(prefix(parse_descriptor("r3 gaps=1,2"), 6)) == "101001"


def test_parity_lock():
    with pytest.raises(ParityError):
        point_lemma1(GapSequence((2, 3)))
    with pytest.raises(ParityError):
        parse_descriptor("t1 i=1 gaps=1,3")
    # the coding family does not require it
    point_theorem2(alpha_code("1"), GapSequence((1, 3), parity_locked=False))


def test_w_sets():
    assert [j for j in range(1, 40) if w_set_member(1, j)] == [2, 4, 8, 16, 32]
    assert [j for j in range(1, 40) if w_set_member(2, j)] == [6, 12, 24]
    assert odd_part(96) == 3
    assert two_adic_valuation(96) == 5
    with pytest.raises(ValueError):
        two_adic_valuation(0)


@given(st.integers(1, 10 ** 6).map(lambda j: 2 * j))
def test_even_numbers_have_one_owner(j):
    owners = [i for i in range(1, j + 1) if w_set_member(i, j)] if j < 2000 else \
        [i for i in ((odd_part(j) + 1) // 2,) if w_set_member(i, j)]
    assert len(owners) == 1


def test_alpha_code():
    a = AlphaCode("01")
    assert [a.alpha_at(n) for n in range(1, 9)] == [0, 1, 0, 0, 0, 1, 0, 0]
    with pytest.raises(DescriptorError):
        AlphaCode("012")


@given(st.text("01", min_size=1, max_size=6), st.text("01", min_size=1, max_size=6))
def test_alpha_differences_have_density(b1, b2):
    w = max(len(b1), len(b2))
    if b1.ljust(w, "0") == b2.ljust(w, "0"):
        return
    k = next(i for i in range(w) if b1.ljust(w, "0")[i] != b2.ljust(w, "0")[i]) + 1
    a1, a2 = alpha_code(b1), alpha_code(b2)
    N = 256
    assert sum(a1.alpha_at(n) != a2.alpha_at(n) for n in range(1, N + 1)) >= N // 2 ** k


def test_zero_code_is_plain_stream():
    g = GapSequence((1, 2, 3, 4, 5))
    x = point_theorem2(alpha_code("0"), g)
    assert np.array_equal(x.window(1, g.horizon), point_lemma1(g).window(1, g.horizon))


def test_all_complement_point_is_complement_of_plain_stream():
    g = GapSequence((1, 2, 3, 4, 5))
    assert np.array_equal(point_remark3(g).window(1, g.horizon),
                          1 - point_lemma1(g).window(1, g.horizon))


def test_family_converges_to_plain_stream():
    g = GapSequence(tuple(range(1, 15)))
    x = point_lemma1(g)
    for i in range(1, 4):
        first = 2 * (2 * i - 1)  # least element of W_i
        upto = g.s[first - 1]
        xi = point_theorem1(i, g)
        assert np.array_equal(xi.window(1, upto), x.window(1, upto))
        assert xi.symbol_at(upto + 1) != x.symbol_at(upto + 1)


def test_window_matches_symbolwise():
    x = parse_descriptor("t1 i=2 gaps=1,2,3,4,5,6,7")
    assert x.window(1, x.horizon).tolist() == [x.symbol_at(n) for n in range(1, x.horizon + 1)]


def test_descriptor_roundtrip():
    for d in ("morse", "const bit=1", "lemma1 gaps=1,2,3", "t1 i=3 gaps=1,2,3",
              "t2 beta=0110 gaps=2,5,7", "r3 gaps=1,2", "shift k=5 of=t1 i=1 gaps=1,2,3"):
        assert parse_descriptor(d).descriptor == d
    assert parse_descriptor("shift k=2 of=shift k=3 of=morse").descriptor == "shift k=5 of=morse"
    assert parse_descriptor("morse") == morse_point()


@pytest.mark.parametrize("bad", ["", "moose", "t1 gaps=1,2", "t1 i=x gaps=1,2", "const bit=2",
                                 "shift k=0 of=morse", "lemma1 gaps=1,2 extra=3", "t2 beta=2 gaps=1"])
def test_bad_descriptors(bad):
    with pytest.raises((DescriptorError, ValueError)):
        parse_descriptor(bad)


def test_validate_gaps():
    good = validate_gaps(GapSequence((1, 2, 3, 4, 9, 16, 33)))
    assert good.passed and good.ratios[0] == 0
    flat = validate_gaps(GapSequence(tuple(range(1, 12))))
    assert not flat.final_ratio_ok and not flat.passed
    unlocked = validate_gaps(GapSequence((2, 9, 20), parity_locked=False))
    assert unlocked.passed and not unlocked.parity_ok
    assert validate_gaps(GapSequence((1, 2, 9)), ratio_tolerance=Fraction(1, 50)).final_ratio_ok
