from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from collatzkit.accel import (
    accel_step,
    accel_total_stopping_time,
    build_window_table,
    c4_witness,
)
from collatzkit.orbit import step, total_stopping_time

# (odd count, offset) for f_{w,j}, read off the listed affine maps
PAPER_MAPS = {
    1: [(0, 0), (1, 1)],
    2: [(0, 0), (1, 1), (1, 2), (2, 5)],
    3: [(0, 0), (2, 7), (1, 2), (2, 5), (1, 4), (1, 1), (2, 10), (3, 19)],
}


def steps(n, k):
    for _ in range(k):
        n = step(n)
    return n


@pytest.mark.parametrize("w", [1, 2, 3])
def test_small_tables_match_listed_maps(w):
    t = build_window_table(w)
    assert [t.entry(j) for j in range(1 << w)] == PAPER_MAPS[w]


def test_window_five_entries():
    t = build_window_table(5)
    assert t.entry(11) == (3, 23)
    assert t.entry(10) == (1, 2)
    assert t.affine(11) == "(27x+23)/32"
    assert t.affine(0) == "x/32"


@pytest.mark.parametrize("w", [0, 25, -1])
def test_window_guard(w):
    with pytest.raises(ValueError):
        build_window_table(w)


@pytest.mark.parametrize("w", range(1, 11))
def test_table_invariants(w):
    t = build_window_table(w)
    assert t.entry(0) == (0, 0)
    for j in range(1 << w):
        e, c = t.entry(j)
        assert 0 <= e <= w
        # exactness on two members of the residue class
        for x in (j, j + (1 << w)):
            if x == 0:
                continue
            num = 3**e * x + c
            assert num % (1 << w) == 0
            assert num >> w == steps(x, w)


@pytest.mark.parametrize("w", [2, 4, 6, 8])
def test_composition_of_half_tables(w):
    half = build_window_table(w // 2)
    assert half.compose(half) == build_window_table(w)


def test_uneven_composition():
    assert build_window_table(2).compose(build_window_table(3)) == build_window_table(5)


@pytest.mark.parametrize("w, n, expected", [(5, 11, 10), (5, 10, 1), (3, 8, 1)])
def test_accel_step_examples(w, n, expected):
    assert accel_step(build_window_table(w), n) == expected


@pytest.mark.parametrize("w", range(1, 9))
def test_accel_step_sound(w):
    t = build_window_table(w)
    for n in range(1, 5000):
        assert accel_step(t, n) == steps(n, w)


@given(st.integers(min_value=1, max_value=2**200), st.integers(min_value=1, max_value=12))
def test_accel_step_sound_big(n, w):
    assert accel_step(build_window_table(w), n) == steps(n, w)


@pytest.mark.parametrize(
    "n, w, expected", [(7, 5, 11), (2**20, 3, 20), (2**20, 8, 20), (27, 8, 70), (1, 4, 0)]
)
def test_accel_total_stopping_time(n, w, expected):
    assert accel_total_stopping_time(n, build_window_table(w)) == expected


def test_accel_cap_matches_direct():
    t = build_window_table(8)
    for cap in (0, 1, 7, 8, 9, 69, 70, 71):
        assert accel_total_stopping_time(27, t, cap) == total_stopping_time(27, cap)


@given(st.integers(min_value=1, max_value=10**15), st.integers(min_value=1, max_value=10))
def test_accel_matches_direct(n, w):
    assert accel_total_stopping_time(n, build_window_table(w)) == total_stopping_time(n)


def _c4_oracle(n):
    """Slope of f_{m,k} from a difference quotient over two class members."""
    for m in range(1, 10_000):
        k = n % 2**m
        a = k if k else 2**m
        slope = Fraction(steps(a + 2**m, m) - steps(a, m), 2**m)
        if slope < 1:
            return m, k


@pytest.mark.parametrize("n, expected", [(11, (5, 11)), (4, (1, 0)), (7, (7, 7))])
def test_c4_witness(n, expected):
    assert c4_witness(n) == expected


@given(st.integers(min_value=2, max_value=10**6))
def test_c4_matches_difference_quotient(n):
    assert c4_witness(n) == _c4_oracle(n)


def test_c4_cap():
    assert c4_witness(27, cap=10) is None
