import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zeq.band_stats import BandSpec
from zeq.equidist import (
    UNIT,
    SequenceScale,
    conjecture_scan,
    equidist_report,
    erdos_turan_bound,
    explicit_prediction,
    fractional_parts,
    landau_gonek,
    nearest_prime_power_distance,
    power_sum,
    prime_power_base,
    restricted_weyl,
    star_discrepancy,
    von_mangoldt,
    weyl_sum,
)


def test_weyl_zero_is_count(zeros1k):
    assert weyl_sum(zeros1k, 0) == 1000


def test_power_sum_at_one(zeros1k):
    assert power_sum(zeros1k, 1.0) == complex(1000, 0)


def test_weyl_by_brute_force(zeros1k):
    g = zeros1k.gammas
    ref = complex(math.fsum(np.cos(2 * np.pi * 3 * g)), math.fsum(np.sin(2 * np.pi * 3 * g)))
    assert abs(weyl_sum(zeros1k, 3) - ref) < 1e-9


def test_star_discrepancy_small_cases():
    assert star_discrepancy([0.5]) == 0.5
    assert star_discrepancy([0.0, 0.5]) == 0.5
    n = 10
    assert star_discrepancy((np.arange(n) + 0.5) / n) == pytest.approx(0.5 / n)
    with pytest.raises(ValueError):
        star_discrepancy([1.0])


@settings(max_examples=40)
@given(st.lists(st.floats(0, 1, exclude_max=True), min_size=1, max_size=50))
def test_star_discrepancy_brute(xs):
    x = np.array(xs)
    d = star_discrepancy(x)
    # sup over test points at the data and just above them
    grid = np.concatenate([x, np.nextafter(x, 2), [1.0]])
    brute = max(abs(np.mean(x < t) - t) for t in grid)
    assert abs(d - brute) < 1e-12
    assert 1 / (2 * len(xs)) - 1e-15 <= d <= 1


def test_erdos_turan_dominates(zeros1k):
    for L in (1, 5, 20):
        for sc in (UNIT, SequenceScale("log_T_over_2pi", zeros1k.t_max)):
            r = equidist_report(zeros1k, L, sc)
            assert r.et_bound >= r.d_star


def test_fractional_parts_split():
    g = np.array([1e7 + 0.123456789])
    m = 0.987654321
    exact = (1e7 + 0.123456789) * m
    ref = exact - math.floor(exact)
    assert abs(fractional_parts(g, m)[0] - ref) < 1e-8
    assert fractional_parts(np.array([2.5]))[0] == 0.5


def test_scale_validation():
    with pytest.raises(ValueError):
        SequenceScale("log_T_over_2pi")
    with pytest.raises(ValueError):
        SequenceScale("loglog")
    with pytest.raises(ValueError):
        erdos_turan_bound(np.array([0.1]), 0)


@pytest.mark.parametrize("n,p", [(2, 2), (8, 2), (9, 3), (49, 7), (6, None), (1, None), (1024, 2)])
def test_prime_power_base(n, p):
    assert prime_power_base(n) == p


def test_von_mangoldt():
    assert von_mangoldt(4.0) == pytest.approx(math.log(2))
    assert von_mangoldt(6.0) == 0.0
    assert von_mangoldt(7.0 + 1e-6) == 0.0


def test_nearest_prime_power():
    assert nearest_prime_power_distance(4.0) == 1.0  # 3 and 5
    assert nearest_prime_power_distance(math.e) == pytest.approx(3 - math.e)
    assert nearest_prime_power_distance(6.0) == 1.0


def test_explicit_main_term():
    T = 1000.0
    p = explicit_prediction(4.0, T)
    assert p.main == pytest.approx(-(T / (2 * math.pi)) * math.log(2) / 2)
    assert explicit_prediction(0.25, T).main == p.main
    with pytest.raises(ValueError):
        explicit_prediction(1.0, T)


def test_landau_gonek_at_prime(zeros10k):
    obs, p = landau_gonek(zeros10k, 3.0)
    assert abs(obs - p.main) <= 3 * p.envelope


def test_power_sum_conjugate(zeros1k):
    assert power_sum(zeros1k, 0.5) == pytest.approx(power_sum(zeros1k, 2.0).conjugate(), abs=1e-9)


def test_conjecture_scan(zeros1k):
    rows = conjecture_scan(zeros1k, [2.0, 3.5, 10.0], 0.25)
    assert len(rows) == 3 and all(r.bound > 0 for r in rows)
    with pytest.raises(ValueError):
        conjecture_scan(zeros1k, [1.5], 0.25)
    with pytest.raises(ValueError):
        conjecture_scan(zeros1k, [2.0], 0.7)


def test_restricted_weyl(zeros1k):
    s, n = restricted_weyl(zeros1k, BandSpec(-1.0, 1.0), 1)
    assert 0 < n < 1000 and abs(s) <= n
    r = equidist_report(zeros1k, 5, band=BandSpec(-1.0, 1.0))
    assert r.n_points == n and r.et_bound >= r.d_star
