import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import prime_poly_oracle, primes_oracle
from zeq.prime_poly import (
    CapacityError,
    AsymptoticParams,
    eval_P,
    moment_report,
    asymptotic_parameters,
    primes_up_to,
    proxy_report,
    sieve,
    write_proxy_csv,
)


def test_prime_counts():
    assert primes_up_to(1).size == 0
    assert primes_up_to(2).tolist() == [2]
    assert primes_up_to(10**6).size == 78498


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 3000))
def test_sieve_matches_trial_division(n):
    assert primes_up_to(n).tolist() == primes_oracle(n)


def test_sieve_cap():
    with pytest.raises(CapacityError):
        primes_up_to(10**9 + 1)


@pytest.mark.parametrize("gamma", [14.134725141734694, 1000.5])
def test_eval_P_oracle(gamma):
    basis = sieve(500)
    ref = complex(prime_poly_oracle(gamma, 500))
    assert abs(eval_P(gamma, basis) - ref) < 1e-12


def test_eval_P_only_two():
    basis = sieve(2)
    g = 3.7
    assert eval_P(g, basis) == pytest.approx(2 ** (-0.5 - 1j * g), abs=1e-15)


@settings(max_examples=30, deadline=None)
@given(st.floats(0, 5000))
def test_conjugate_symmetry(g):
    basis = sieve(1000)
    p, q = eval_P(g, basis), eval_P(-g, basis)
    assert p == q.conjugate()


def test_vector_eval_matches_scalar():
    basis = sieve(300)
    g = np.array([10.0, 20.0, 30.0])
    np.testing.assert_allclose(eval_P(g, basis), [eval_P(x, basis) for x in g], atol=1e-14)


def test_sigma2():
    b = sieve(10)
    assert b.sigma2 == pytest.approx(0.5 * (1 / 2 + 1 / 3 + 1 / 5 + 1 / 7))


def test_asymptotic_parameters_1e6():
    pp = asymptotic_parameters(1e6)
    ll = math.log(math.log(1e6))
    assert pp.Omega == pytest.approx(ll**2)
    assert pp.K == 2 * math.floor(ll**6) == 654
    assert pp.clamped and pp.X == 3.0


def test_params_validation():
    with pytest.raises(ValueError):
        AsymptoticParams(1e6, 3.0, 1.0, 1.0, 3, False)
    with pytest.raises(ValueError):
        asymptotic_parameters(50)


def test_moment_gaussian_at_random_points():
    # away from zeros Re P behaves like a Gaussian of variance sigma^2
    from zeq.zero_finder import ZeroTable
    rng = np.random.default_rng(1)
    t = np.sort(rng.uniform(1e4, 1e6, 4000))
    tab = ZeroTable(t, np.ones_like(t), 1e6, True)
    basis = sieve(1000)
    r = moment_report(tab, basis, 2)
    assert 0.9 < r.ratio < 1.1


def test_moment_validation(zeros1k):
    with pytest.raises(ValueError):
        moment_report(zeros1k, sieve(100), 3)


def test_proxy_report(zeros1k, tmp_path):
    basis = sieve(100)
    r = proxy_report(zeros1k, basis)
    assert r.n == 1000 and 0 <= r.agreement <= 1 and not r.degenerate
    with open(tmp_path / "p.csv", "w") as fh:
        assert write_proxy_csv(fh, zeros1k, basis) == 1000
