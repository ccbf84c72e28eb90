from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from morsechaos.chaos import (COND1_FAILS, COND2_FAILS, SCRAMBLED, CSV_COLUMNS, classify_tuple,
                              default_delta_grid, estimate_df, estimate_df_checkpoints,
                              estimates_to_csv, shifted_pair_distality)
from morsechaos.constructions import GapSequence, parse_descriptor, point_lemma1, point_theorem1
from morsechaos.errors import DiagonalError, HorizonExceeded
from morsechaos.symseq import ConstantPoint, morse_point, shift, truncated_distance

G = GapSequence((3, 4, 9, 16))


def test_default_grid():
    grid = default_delta_grid()
    assert len(grid) == 15  # 1/2 appears in both halves
    assert grid[0] == Fraction(1, 256) and grid[-1] == Fraction(255, 256)


def test_diagonal_rejected():
    with pytest.raises(DiagonalError):
        estimate_df([morse_point(), parse_descriptor("morse")])


def test_horizon_exceeded():
    with pytest.raises(HorizonExceeded):
        estimate_df([point_theorem1(1, G), point_theorem1(2, G)], horizon=G.horizon)


def test_constant_pair_never_close():
    est = estimate_df([ConstantPoint(0), ConstantPoint(1)], horizon=200)
    assert all(x == 0 for x in est.phi_hat) and all(x == 0 for x in est.phi_star_hat)
    assert est.counts(Fraction(1, 2)) == (0, 199, 0)


def test_counts_partition_and_monotone():
    pts = [point_theorem1(i, G) for i in (1, 2, 3)]
    est = estimate_df(pts, horizon=2000)
    for lo, up in zip(est.lower_counts, est.upper_counts):
        assert sum(lo) == sum(up) == 1999
    for seq in (est.phi_hat, est.phi_star_hat):
        assert all(a <= b for a, b in zip(seq, seq[1:]))
    assert all(a >= b for a, b in zip(est.phi_hat, est.phi_star_hat))


def test_counts_match_direct_distances():
    u, v = point_theorem1(1, G), point_lemma1(G)
    est = estimate_df([u, v], [Fraction(3, 10)], horizon=300, precision=20)
    below = sum(truncated_distance(shift(u, k), shift(v, k), 20).upper < Fraction(3, 10)
                for k in range(1, 300))
    assert est.counts(Fraction(3, 10))[0] == below


def test_shared_block_lower_bound():
    # blocks 1..3 of x^1 and x^2 are identical, so every k inside block 3
    # that is at least L symbols from its end has distance below 1/4
    L = 32
    est = estimate_df([point_theorem1(1, G), point_theorem1(2, G)], [Fraction(1, 4)],
                      horizon=G.s[3], precision=L)
    assert est.phi_star(Fraction(1, 4)) >= Fraction(2 ** 9 - L, G.s[3] - 1)


def test_checkpoints_are_cumulative():
    pts = [point_theorem1(1, G), point_theorem1(2, G)]
    a, b = estimate_df_checkpoints(pts, checkpoints=[100, 700])
    assert b.counts(Fraction(1, 2)) == estimate_df(pts, horizon=700).counts(Fraction(1, 2))
    assert a.horizon == 100


def test_worker_count_does_not_change_csv():
    pts = [point_theorem1(i, G) for i in (1, 2, 3)]
    one = estimate_df_checkpoints(pts, checkpoints=[24, 536, 5000], workers=1, chunk=300)
    many = estimate_df_checkpoints(pts, checkpoints=[24, 536, 5000], workers=4, chunk=300)
    assert estimates_to_csv(one, {"x": 1}) == estimates_to_csv(many, {"x": 1})


def test_csv_schema():
    text = estimates_to_csv(estimate_df_checkpoints([ConstantPoint(0), ConstantPoint(1)],
                                                    [Fraction(1, 2)], [5, 9]), {"k": "v"})
    lines = text.splitlines()
    assert lines[0].startswith("# ")
    assert lines[1].split(",") == list(CSV_COLUMNS)
    assert len(lines) == 4


def test_classify_taxonomy():
    cps = [8, 24, 536, 5000]
    pair = classify_tuple([point_theorem1(1, G), point_theorem1(2, G)], cps)
    assert pair.classification == SCRAMBLED
    triple = classify_tuple([point_theorem1(i, G) for i in (1, 2, 3)], cps)
    assert triple.classification == COND2_FAILS
    x = point_lemma1(G)
    distal = classify_tuple([x, shift(x, 1)], cps)
    assert distal.classification == COND1_FAILS
    record = pair.to_dict()
    assert record["classification"] == SCRAMBLED and len(record["windows"]) == 3
    assert len(pair.liminf_max_estimate) == 3


def test_classify_needs_tail():
    with pytest.raises(ValueError):
        classify_tuple([ConstantPoint(0), ConstantPoint(1)], [10])


def test_distality_floor():
    x = point_lemma1(GapSequence((3, 4, 9)))
    rep = shifted_pair_distality(x, x, 1, 500)
    assert rep.applicable and rep.holds and rep.min_distance >= Fraction(1, 2 ** 14)


def test_distality_control_not_applicable():
    rep = shifted_pair_distality(ConstantPoint(0), ConstantPoint(0), 1, 100)
    assert rep.min_distance == 0 and not rep.applicable and not rep.holds


@given(st.integers(1, 3), st.integers(1, 3), st.integers(2, 600),
       st.sampled_from(default_delta_grid()), st.integers(8, 40))
def test_pair_min_equals_max(i, j, m, delta, L):
    if i == j:
        return
    est = estimate_df([point_theorem1(i, G), point_theorem1(j, G)], [delta], horizon=m, precision=L)
    assert est.lower_counts == est.upper_counts
