import math

import numpy as np
import pytest
from scipy.stats import norm

from garchf import innovations
from garchf.innovations import InnovationSpec, NotDifferentiableError
from garchf.params import ParamVector

SPECS = [
    InnovationSpec.gaussian(),
    InnovationSpec.student(5),
    InnovationSpec.student(8),
    InnovationSpec.student(12),
    InnovationSpec.gamma_power(0.25),
    InnovationSpec.gamma_power(0.5),
    InnovationSpec.gamma_power(1.0),
    InnovationSpec.gamma_power(2.0),
]


@pytest.mark.parametrize("bad", ["student:2", "student:1", "gammapower:0", "gammapower:-1", "cauchy", "student:x"])
def test_invalid_specs_rejected(bad):
    with pytest.raises(ValueError):
        InnovationSpec.parse(bad)


def test_parse_roundtrip():
    for s in SPECS:
        assert InnovationSpec.parse(str(s)) == s


@pytest.mark.parametrize("spec", SPECS, ids=str)
def test_density_normalized_and_standardized(spec):
    assert innovations.expect(spec, lambda y: np.ones_like(y)) == pytest.approx(1, abs=1e-6)
    assert innovations.expect(spec, lambda y: y * y) == pytest.approx(1, abs=1e-6)


@pytest.mark.parametrize("spec", SPECS, ids=str)
def test_score_mean_zero(spec):
    assert abs(innovations.expect(spec, spec.score_g1)) < 1e-6


@pytest.mark.parametrize("spec", SPECS, ids=str)
def test_score_matches_finite_differences(spec):
    rng = np.random.default_rng(1)
    y = rng.uniform(0.1, 3, 20) * rng.choice([-1, 1], 20)
    h = 1e-6 * np.abs(y)
    fd = 1 + y * (spec.logpdf(y + h) - spec.logpdf(y - h)) / (2 * h)
    g = spec.score_g1(y)
    assert np.max(np.abs(fd - g) / np.maximum(np.abs(g), 1e-3)) < 1e-5


def test_score_examples():
    g = InnovationSpec.gaussian()
    assert g.score_g1(0.0) == 1.0
    assert g.score_g1(1.0) == 0.0
    for a in (0.3, 2.0):
        gp = InnovationSpec.gamma_power(a)
        assert gp.score_g1(1.7) == pytest.approx(2 * a * (1 - 1.7**2))
        with pytest.raises(NotDifferentiableError):
            gp.score_g1(0.0)


def test_gamma_power_half_is_gaussian():
    y = np.linspace(-4, 4, 41)
    y = y[y != 0]
    np.testing.assert_allclose(InnovationSpec.gamma_power(0.5).pdf(y), norm.pdf(y), rtol=1e-12)


def test_gamma_power_density_formula():
    a = 1.7
    y = np.array([-2.0, -0.3, 0.4, 1.5])
    expect = a**a / math.gamma(a) * np.exp(-a * y**2) * np.abs(y) ** (2 * a - 1)
    np.testing.assert_allclose(InnovationSpec.gamma_power(a).pdf(y), expect, rtol=1e-12)


def test_sampling_moments():
    x = innovations.sample(InnovationSpec.gaussian(), 7, 10**6)
    assert np.mean(x**2) == pytest.approx(1, abs=0.01)
    x = innovations.sample(InnovationSpec.gamma_power(0.5), 3, 10**6)
    assert np.mean(x**4) == pytest.approx(3, abs=0.05)
    x = innovations.sample(InnovationSpec.student(5), 11, 10**6)
    assert np.var(x) == pytest.approx(1, abs=0.01)


def test_sampling_deterministic():
    s = InnovationSpec.gamma_power(2.0)
    assert np.array_equal(innovations.sample(s, (1, 2), 100), innovations.sample(s, (1, 2), 100))
    with pytest.raises(ValueError):
        innovations.sample(s, 1, 0)


def test_fisher_info_values():
    assert innovations.fisher_scale_info(InnovationSpec.gaussian()) == pytest.approx(2, abs=1e-8)
    assert innovations.fisher_scale_info(InnovationSpec.gamma_power(0.5)) == pytest.approx(2, abs=1e-8)
    for a in (0.25, 1.0, 2.0):
        assert innovations.fisher_scale_info(InnovationSpec.gamma_power(a)) == pytest.approx(4 * a, abs=1e-8)


def test_fisher_info_matches_monte_carlo():
    spec = InnovationSpec.student(8)
    g = spec.score_g1(innovations.sample(spec, 4, 400_000)) ** 2
    assert abs(g.mean() - innovations.fisher_scale_info(spec)) < 3 * g.std() / math.sqrt(g.size)


def test_kurtosis():
    assert innovations.kurtosis(InnovationSpec.gaussian()) == 3
    assert innovations.kurtosis(InnovationSpec.gamma_power(0.25)) == pytest.approx(5)
    assert innovations.kurtosis(InnovationSpec.student(8)) == pytest.approx(4.5)
    assert innovations.expect(InnovationSpec.student(8), lambda y: y**4) == pytest.approx(4.5, rel=1e-7)
    assert math.isinf(innovations.kurtosis(InnovationSpec.student(4)))


@pytest.mark.parametrize("a", [0.25, 0.5, 1.0, 2.0])
def test_umpu_identity_gamma_power(a):
    s = InnovationSpec.gamma_power(a)
    assert (innovations.kurtosis(s) - 1) * innovations.fisher_scale_info(s) == pytest.approx(4, abs=1e-6)


@pytest.mark.parametrize("nu", [5, 8, 12])
def test_umpu_identity_fails_for_student(nu):
    s = InnovationSpec.student(nu)
    assert (innovations.kurtosis(s) - 1) * innovations.fisher_scale_info(s) > 4


def test_a0_moments_identity_and_symmetry():
    th = ParamVector(1, 0.2, 0.2, 0.9)
    m = innovations.a0_moments(InnovationSpec.gaussian(), th, 1.0)
    assert th.alpha_plus * m.nu_plus + th.alpha_minus * m.nu_minus + m.nu1 == pytest.approx(1, abs=1e-8)
    assert m.nu_plus == pytest.approx(m.nu_minus, abs=1e-10)
    assert m.gamma0 == pytest.approx(0.05175, abs=1e-5)


def test_a0_moments_identity_asymmetric():
    th = ParamVector(1, 0.1, 0.4, 0.7)
    for spec in (InnovationSpec.student(6), InnovationSpec.gamma_power(1.5)):
        m = innovations.a0_moments(spec, th, 1.7)
        assert 0.1 * m.nu_plus + 0.4 * m.nu_minus + m.nu1 == pytest.approx(1, abs=1e-8)


def test_a0_moments_constant_a0():
    m = innovations.a0_moments(InnovationSpec.student(7), ParamVector(1, 0, 0, 0.6), 1.0)
    assert m.nu1 == 1 and m.sigma_u2 == 0
    assert math.isfinite(m.nu_plus) and math.isfinite(m.nu_minus)


def test_log_a0_score_integration_by_parts():
    # E[log a0(eta) g1(eta)] = -delta (1 - nu1)
    for spec, delta in ((InnovationSpec.gaussian(), 1.0), (InnovationSpec.student(8), 1.5), (InnovationSpec.gamma_power(2), 2.0)):
        m = innovations.a0_moments(spec, ParamVector(1, 0.15, 0.3, 0.8), delta)
        assert m.cov_log_a0_g1 == pytest.approx(-delta * (1 - m.nu1), abs=1e-7)
