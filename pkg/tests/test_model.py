import math

import numpy as np
import pytest

from garchf import model
from garchf.innovations import InnovationSpec
from garchf.params import ParamVector, Zeta

from conftest import EXPLOSIVE, GAUSS


def test_param_validation():
    with pytest.raises(ValueError):
        ParamVector(0.0, 0.1, 0.1, 0.5)
    with pytest.raises(ValueError):
        ParamVector(1.0, -0.1, 0.1, 0.5)
    with pytest.raises(ValueError):
        Zeta.make(0.0, 1, 0.1, 0.1, 0.5)
    with pytest.raises(ValueError):
        ParamVector(1.0, float("nan"), 0.1, 0.5)


def test_shifted_local_alternative():
    th = ParamVector(1, 0.2, 0.2, 0.9)
    np.testing.assert_allclose(th.shifted((0, 2, -2, 0), 100).to_array(), [1, 0.4, 0.0, 0.9])


@pytest.mark.parametrize(
    "theta,delta,x,expect",
    [((1, 0.2, 0.2, 0.9), 1.0, -2.0, 1.3), ((1, 0.4, 0.7, 0.35), 1.5, 0.0, 0.35), ((1, 0.1, 0.3, 0.5), 2.0, 2.0, 0.9)],
)
def test_a0_eval(theta, delta, x, expect):
    assert model.a0_eval(ParamVector(*theta), delta, x) == pytest.approx(expect)


def test_first_step_from_zero_initials():
    z = Zeta.make(1.5, 0.7, 0.2, 0.3, 0.6)
    p = model.simulate(z, GAUSS, 1, seed=3, eps0=0.0, h0=0.0)
    assert p.log_h[0] == pytest.approx(math.log(0.7))
    assert p.eps[0] == pytest.approx(0.7 ** (1 / 1.5) * p.eta[0])


def test_geometric_recursion():
    z = Zeta.make(1.0, 1.0, 0.0, 0.0, 0.5)
    p = model.simulate(z, GAUSS, 5, seed=1, h0=0.0)
    assert math.exp(p.log_h[4]) == pytest.approx(1.9375)


def test_path_reconstructs_eps():
    z = Zeta.make(2.0, 0.3, 0.1, 0.25, 0.7)
    p = model.simulate(z, InnovationSpec.student(6), 500, seed=9)
    np.testing.assert_allclose(np.exp(p.log_h / 2.0) * p.eta, p.eps, rtol=1e-12)


def test_explicit_recursion_agrees():
    z = Zeta.make(1.3, 0.4, 0.1, 0.3, 0.6)
    p = model.simulate(z, GAUSS, 200, seed=2, eps0=0.5, h0=2.0)
    h, e = 2.0, 0.5
    for t in range(200):
        h = 0.4 + 0.1 * max(e, 0) ** 1.3 + 0.3 * max(-e, 0) ** 1.3 + 0.6 * h
        e = h ** (1 / 1.3) * p.eta[t]
        assert p.log_h[t] == pytest.approx(math.log(h), rel=1e-12, abs=1e-12)
    assert p.eps[-1] == pytest.approx(e, rel=1e-10)


def test_zero_alpha_terms_are_skipped():
    z = Zeta.make(1.0, 1.0, 0.0, 0.3, 0.5)
    p = model.simulate(z, GAUSS, 1000, seed=4)
    assert np.all(np.isfinite(p.log_h))


def test_explosive_path_stays_finite_in_logs():
    z = Zeta.make(1.0, 1.0, 0.6, 0.6, 1.0)
    p = model.simulate(z, GAUSS, 20000, seed=4)
    assert np.all(np.isfinite(p.log_h)) and p.log_h[-1] > 709
    assert np.isinf(p.eps[-1]) and np.isfinite(p.log_abs_eps[-1])


def test_determinism():
    a = model.simulate(EXPLOSIVE, GAUSS, 300, seed=(1, 2))
    b = model.simulate(EXPLOSIVE, GAUSS, 300, seed=(1, 2))
    assert np.array_equal(a.log_h, b.log_h) and np.array_equal(a.log_abs_eps, b.log_abs_eps)


def test_explosivity_rate_single_seed():
    g0 = model.lyapunov_exponent(EXPLOSIVE.theta, 1.0, GAUSS)
    p = model.simulate(EXPLOSIVE, GAUSS, 5000, seed=77)
    assert abs(p.log_h[-1] / 5000 - g0) < 0.02


def test_stationary_log_h_does_not_drift():
    z = Zeta.make(1.0, 0.1, 0.05, 0.15, 0.8)
    p = model.simulate(z, GAUSS, 40000, seed=8)
    assert abs(p.log_h[-1] / 40000) < 1e-3
    q1 = np.quantile(p.log_h[10000:20000], [0.1, 0.5, 0.9])
    q2 = np.quantile(p.log_h[30000:40000], [0.1, 0.5, 0.9])
    np.testing.assert_allclose(q1, q2, atol=0.15)


def test_boundary_drift(boundary_zeta):
    h500, h5000 = [], []
    for s in range(200):
        p = model.simulate(boundary_zeta, GAUSS, 5000, seed=(31, s))
        h500.append(p.log_h[499])
        h5000.append(p.log_h[4999])
    assert np.median(h5000) > np.median(h500)


def test_lyapunov_constant_a0():
    assert model.lyapunov_exponent(ParamVector(1, 0, 0, 0.7), 1.0, GAUSS) == pytest.approx(math.log(0.7))


def test_lyapunov_quadrature_vs_monte_carlo():
    q = model.lyapunov_exponent(EXPLOSIVE.theta, 1.0, GAUSS)
    g, se = model.lyapunov_exponent(EXPLOSIVE.theta, 1.0, GAUSS, "montecarlo", m=10**6, seed=5, return_se=True)
    assert abs(q - g) <= 3 * se


def test_lyapunov_student_anchor():
    # nu = 8 puts the headline model at the quoted exponent
    g = model.lyapunov_exponent(EXPLOSIVE.theta, 1.0, InnovationSpec.student(8))
    assert 0.03 < g < 0.06
    assert g == pytest.approx(0.045, abs=0.001)


def test_lyapunov_beta_zero_gamma_power():
    # a0 = alpha |eta|: the log singularity at 0 is integrable
    g = model.lyapunov_exponent(ParamVector(1, 0.5, 0.5, 0.0), 1.0, InnovationSpec.gamma_power(1.0))
    assert math.isfinite(g)


def test_calibrate_beta():
    for spec in (GAUSS, InnovationSpec.student(6)):
        b = model.calibrate_beta(0.1, 0.3, 1.0, spec)
        assert abs(model.lyapunov_exponent(ParamVector(1, 0.1, 0.3, b), 1.0, spec)) < 1e-10


def test_simulate_rejects_bad_input():
    with pytest.raises(ValueError):
        model.simulate(EXPLOSIVE, GAUSS, 0, seed=1)
    with pytest.raises(ValueError):
        model.simulate(EXPLOSIVE, GAUSS, 10, seed=1, h0=-1.0)


def test_scaled_path():
    p = model.simulate(EXPLOSIVE, GAUSS, 50, seed=1)
    np.testing.assert_allclose(p.scaled(3.0).eps, 3.0 * p.eps)
