import numpy as np
import pytest

from garchf import covariance, model, oracles
from garchf.covariance import SingularInformationError, avar_and_ci, i_star_hat, j_hat, kappa_hat
from garchf.params import Zeta
from garchf.volfilter import FilterOutput, filter_series

from conftest import EXPLOSIVE, GAUSS, STATIONARY


def _fo(R, delta=1.0):
    n = R.shape[0]
    z = Zeta.make(delta, 1.0, 0.1, 0.1, 0.5)
    return FilterOutput(z, np.zeros(n), np.zeros(n), np.ones(n), R)


def test_constant_rows_give_rank_one():
    r = np.array([0.5, 1.0, 2.0, 3.0])
    J = j_hat(_fo(np.tile(r, (7, 1)), delta=1.5))
    np.testing.assert_allclose(J, 4 / 1.5**2 * np.outer(r, r))
    np.testing.assert_allclose(i_star_hat(J), 0, atol=1e-12)


def test_zero_series_omega_block():
    omega = 0.7
    fo = filter_series(np.zeros(30), Zeta.make(2.0, omega, 0.2, 0.3, 0.0))
    J = j_hat(fo)
    assert J[0, 0] == pytest.approx(1 / omega**2)


def test_block_diagonal_schur():
    J = np.diag([2.0, 1.0, 3.0, 4.0])
    J[1:, 1:] += 0.1
    np.testing.assert_allclose(i_star_hat(J), J[1:, 1:])


def test_schur_invariant_to_omega_rescaling():
    A = np.random.default_rng(0).standard_normal((10, 4))
    J = A.T @ A
    D = np.diag([7.5, 1, 1, 1])
    np.testing.assert_allclose(i_star_hat(D @ J @ D), i_star_hat(J), rtol=1e-12)


def test_singular_omega_block():
    with pytest.raises(SingularInformationError):
        i_star_hat(np.zeros((4, 4)))


def test_kappa_hat():
    assert kappa_hat(np.array([1.0, -1.0, 1.0])) == 1.0
    assert kappa_hat(np.random.default_rng(2).standard_normal(10**6)) == pytest.approx(3, abs=0.05)
    with pytest.raises(ValueError):
        kappa_hat([])


def test_se_formula():
    c, n = 4.0, 1000
    J = np.diag([1.0, c, c, c])
    resid = np.full(n, 3 ** 0.25)
    rep = avar_and_ci(J, resid, EXPLOSIVE)
    for nm in rep.names:
        assert rep.se[nm] == pytest.approx(np.sqrt(2 / (c * n)))
    assert any("omega" in s for s in rep.notes)
    assert "omega" not in rep.ci


def test_singular_i_star():
    J = np.diag([1.0, 1.0, 1.0, 0.0])
    with pytest.raises(SingularInformationError):
        avar_and_ci(J, np.ones(10) * 2, EXPLOSIVE)


def test_report_on_explosive_fit(explosive_fit):
    rep = covariance.covariance_report(explosive_fit)
    assert rep.kappa_hat == pytest.approx(3, abs=0.3)
    np.testing.assert_allclose(rep.J_hat, rep.J_hat.T)
    assert np.linalg.eigvalsh(rep.avar)[0] > 0
    assert set(rep.ci95) == {"alpha_plus", "alpha_minus", "beta"}
    assert rep.as_dict()["names"] == ["alpha_plus", "alpha_minus", "beta"]


def test_universal_estimator_matches_oracle(explosive_fit):
    info = oracles.information_matrix_I(EXPLOSIVE.theta, 1.0, GAUSS, m=100_000, seed=99)
    rep = covariance.covariance_report(explosive_fit)
    assert np.linalg.norm(rep.I_star_hat - info) / np.linalg.norm(info) < 0.10


def test_stationary_j_two_paths(stationary_path):
    other = model.simulate(STATIONARY, GAUSS, 200_000, seed=4242)
    J_ref = j_hat(filter_series(other, STATIONARY))
    J = j_hat(filter_series(stationary_path, STATIONARY))
    assert np.linalg.norm(J - J_ref) / np.linalg.norm(J_ref) < 0.10


def test_joint_report_has_delta():
    p = model.simulate(EXPLOSIVE, GAUSS, 3000, seed=8)
    fo = filter_series(p, EXPLOSIVE, with_delta_derivs=True)
    rep = avar_and_ci(j_hat(fo), fo.residuals, EXPLOSIVE)
    assert rep.names[-1] == "delta" and rep.avar.shape == (4, 4)
