import math

import numpy as np
import pytest

from collatzkit.analytics import (
    RecordEntry,
    an_scan,
    angle_bound_violations,
    candidate_check,
    cross_check,
    curve_ordering_violations,
    gamma,
    level_set_growth,
    log_bound_violations,
    orbit_angle,
    orbit_vector_products,
    zeta,
    zeta_ratio,
    zeta_series,
)
from collatzkit.orbit import UnresolvedOrbit, total_stopping_time


@pytest.mark.parametrize("n, expected", [(3, 4.55), (27, 21.24)])
def test_gamma_listed(n, expected):
    assert round(gamma(n), 2) == expected


def test_gamma_trivial():
    assert gamma(4) == pytest.approx(2 / math.log(4), rel=1e-15)


def test_gamma_errors():
    with pytest.raises(ValueError):
        gamma(1)
    with pytest.raises(UnresolvedOrbit):
        gamma(27, cap=5)


def test_an_scan_small():
    recs = an_scan(3)
    assert [r.seed for r in recs] == [3]
    assert recs[0].kind == "AN-record"


def test_an_scan_records_increase():
    recs = an_scan(50_000)
    assert [r.seed for r in recs] == [3, 7, 9, 27]
    assert all(a.gamma < b.gamma for a, b in zip(recs, recs[1:]))


def _an_oracle(limit):
    best = 1 / math.log(2)
    out = []
    for n in range(3, limit + 1):
        g = total_stopping_time(n) / math.log(n)
        if g > best:
            out.append(n)
            best = g
    return out


def test_an_scan_matches_direct_loop():
    assert [r.seed for r in an_scan(20_000)] == _an_oracle(20_000)


def test_cross_check_detects_disagreement():
    sig = np.array([total_stopping_time(n) for n in range(2, 500)], dtype=np.int64)
    assert cross_check(2, sig, every=1) == 498
    sig[100] += 1
    with pytest.raises(RuntimeError):
        cross_check(2, sig, every=1)


def test_candidate_check():
    rows, increasing = candidate_check([837_799, 6_649_279, 100_759_293_214_567])
    assert round(rows[0].gamma, 2) == 24.12
    assert rows[1].gamma > 24.12
    assert abs(rows[2].gamma - 35.17) <= 0.01
    assert increasing
    assert all(isinstance(r, RecordEntry) and r.kind == "candidate" for r in rows)


def test_candidate_list_is_not_monotone():
    # 8,400,511 has a larger gamma than 11,200,681, so the listed order is not increasing
    rows, increasing = candidate_check()
    assert not increasing
    assert rows[1].gamma > rows[2].gamma


@pytest.mark.parametrize("m, expected", [(12, 0), (14, 1), (20, 3)])
def test_zeta(m, expected):
    assert zeta(m) == expected


def test_zeta_piecewise():
    series = zeta_series(20)
    for m in range(2, 21):
        expected = 0 if m <= 12 else 1 if m <= 14 else 2 if m <= 18 else 3
        assert series[m] == expected


def test_zeta_matches_direct_count():
    sig = [None, 0] + [total_stopping_time(k) for k in range(2, 3001)]
    direct = sum(1 for k in range(2, 3001) if sig[k] == sig[k - 1])
    assert zeta(3000) == direct


def test_zeta_ratio():
    assert zeta_ratio(12) == 0.0
    assert zeta_ratio(20) == 0.15


@pytest.mark.parametrize(
    "m, dot, norm2", [(2, 4, 5), (4, 14, 21), (3, 100, 119)]
)
def test_orbit_vector_products(m, dot, norm2):
    assert orbit_vector_products(m) == (dot, norm2)
    assert orbit_angle(m) == pytest.approx(dot / norm2, abs=1e-12)


def test_angle_bounds_small_range():
    assert angle_bound_violations(2000) == {"all": [], "odd": []}


def test_log_bound_small_range():
    assert log_bound_violations(100_000) == []


def test_curve_ordering_small_range():
    assert curve_ordering_violations(5000) == []


def test_level_set_growth():
    rows = level_set_growth(8)
    assert rows[0].ratio is None
    assert (rows[1].count, rows[1].ratio) == (1, 1.0)
    assert (rows[7].count, rows[7].ratio) == (5, 1.25)
    assert (rows[8].count, rows[8].ratio) == (6, 1.2)


def test_level_set_growth_guard():
    with pytest.raises(ValueError):
        level_set_growth(41)
