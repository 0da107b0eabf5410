import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import f_omega_oracle, g_kernel_oracle
from zeq.sign_approx import (
    C_CAL,
    MollifierConfig,
    calibrate_envelope_constant,
    f_omega,
    fejer_envelope,
    g_kernel,
    indicator_approx,
    sgn_error_rows,
)


def test_kernel_endpoints():
    assert g_kernel(0.0) == pytest.approx(2 / math.pi, abs=1e-16)
    assert g_kernel(0.5) == pytest.approx(1 / math.pi, abs=1e-16)
    assert g_kernel(1.0) == 0.0
    with pytest.raises(ValueError):
        g_kernel(1.5)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.0, 1.0))
def test_kernel_oracle(u):
    assert abs(g_kernel(u) - float(g_kernel_oracle(u))) < 1e-14


@pytest.mark.parametrize("x,omega", [(0.3, 1.0), (1.7, 2.0), (-0.05, 8.0), (4.2, 4.0)])
def test_f_omega_oracle(x, omega):
    assert abs(f_omega(x, MollifierConfig(omega)) - float(f_omega_oracle(x, omega))) < 1e-10


def test_interpolates_sign_at_nodes():
    cfg = MollifierConfig(2.0)
    for k in (1, 2, 5):
        assert f_omega(k / 2.0, cfg) == pytest.approx(1.0, abs=1e-9)


@settings(max_examples=30, deadline=None)
@given(st.floats(-10, 10), st.sampled_from([1.0, 2.0, 4.0]))
def test_odd(x, omega):
    cfg = MollifierConfig(omega)
    assert abs(f_omega(x, cfg) + f_omega(-x, cfg)) < 1e-10


@settings(max_examples=20, deadline=None)
@given(st.floats(0.01, 5.0), st.sampled_from([2.0, 4.0]))
def test_scaling(x, omega):
    assert f_omega(x, MollifierConfig(omega)) == pytest.approx(
        f_omega(omega * x, MollifierConfig(1.0)), abs=1e-10)


def test_config_validation():
    with pytest.raises(ValueError):
        MollifierConfig(0.0)
    with pytest.raises(ValueError):
        MollifierConfig(1.0, quadrature_points=10)


def test_fejer():
    assert fejer_envelope(0.0, 3.0) == 1.0
    assert fejer_envelope(1.0, 1.0) < 1e-30


def test_calibration_below_frozen_constant():
    c = calibrate_envelope_constant(1.0, 8.0, 801)
    assert 0.5 < c <= C_CAL


def test_error_rows_unflagged():
    rows = sgn_error_rows(MollifierConfig(4.0), np.linspace(-5, 5, 201))
    assert sum(r[4] for r in rows) == 0
    assert rows[100][0] == 0.0 and rows[100][1] == 0.0


def test_indicator():
    cfg = MollifierConfig(4.0)
    assert indicator_approx(0.3, 1.0, 1.0, cfg)[0] == 0.0
    main, env = indicator_approx(0.0, -2.0, 2.0, cfg)
    assert abs(main - 1.0) <= C_CAL * env + 1e-8
    with pytest.raises(ValueError):
        indicator_approx(0.0, 1.0, -1.0, cfg)
