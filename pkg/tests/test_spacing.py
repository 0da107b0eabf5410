import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zeq.spacing import fitted_exponent, normalized_gaps, small_gap_fraction, write_gap_csv
from zeq.zero_finder import ZeroTable


def test_two_ordinates():
    recs, _ = normalized_gaps(np.array([14.134725, 21.022040]))
    assert len(recs) == 1 and recs[0].gap_raw == pytest.approx(6.887315, abs=1e-12)


def test_needs_two():
    with pytest.raises(ValueError):
        normalized_gaps(np.array([14.1]))


def test_telescoping(zeros10k):
    recs, _ = normalized_gaps(zeros10k)
    g = zeros10k.gammas
    assert all(r.gap_raw > 0 and r.gap_normalized > 0 for r in recs)
    # consecutive differences are exact (Sterbenz), so the correctly rounded sum is too
    assert math.fsum(r.gap_raw for r in recs) == g[-1] - g[0]


def test_mean_gap(zeros10k):
    _, m = normalized_gaps(zeros10k)
    assert 0.95 <= m <= 1.05


def test_lambda_validation(zeros1k):
    with pytest.raises(ValueError):
        small_gap_fraction(zeros1k, 1.5)


@settings(max_examples=20, deadline=None)
@given(st.floats(0.01, 0.98), st.floats(0.0, 0.01))
def test_monotone(lam, dl):
    g = np.cumsum(np.random.default_rng(0).exponential(0.2, 500)) + 20
    tab = ZeroTable(g, np.ones_like(g), float(g[-1]), True)
    a = small_gap_fraction(tab, lam).fraction
    b = small_gap_fraction(tab, min(lam + dl, 0.99)).fraction
    assert a <= b


def test_fraction_range(zeros10k):
    r = small_gap_fraction(zeros10k, 0.5)
    assert 0 < r.fraction <= 0.2
    assert r.fraction_over_lambda == pytest.approx(r.fraction / 0.5)


def test_fitted_exponent():
    lam = np.array([0.1, 0.2, 0.4])
    assert fitted_exponent(lam, 2 * lam**3) == pytest.approx(3.0)
    assert np.isnan(fitted_exponent(lam, [0, 0, 0.1]))


def test_csv(zeros1k, tmp_path):
    reps = [small_gap_fraction(zeros1k, x) for x in (0.1, 0.8)]
    p = tmp_path / "g.csv"
    with open(p, "w") as fh:
        write_gap_csv(fh, reps)
    assert len(p.read_text().splitlines()) == 3
