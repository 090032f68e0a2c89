"""
Strict-stationarity tests and the asymmetry (leverage) test.

``stationarity_test`` compares ``T_n = sqrt(n) gamma_hat / sigma_u_hat`` with
normal quantiles: direction ``"ST"`` tests ``H0: gamma0 < 0`` and rejects for
large ``T_n``; direction ``"NS"`` tests ``H0: gamma0 >= 0`` and rejects for
small ``T_n``.  ``symmetry_test`` is a two-sided Wald test of
``alpha_plus = alpha_minus`` built on the universal covariance estimator, so
it needs no stationarity assumption.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
import math

import numpy as np
from scipy.stats import norm

from garchf import innovations
from garchf.covariance import CovReport, sym_inverse
from garchf.innovations import InnovationSpec
from garchf.params import Zeta
from garchf.volfilter import FilterOutput

__all__ = [
    "DegenerateStatisticError",
    "TestReport",
    "gamma_and_sigma_u",
    "sigma_gamma_sq",
    "stationarity_test",
    "symmetry_test",
]


class DegenerateStatisticError(ValueError):
    """The statistic's variance estimate vanishes."""

    def __init__(self, msg, gamma_hat=None, sigma_u_hat=None):
        super().__init__(msg)
        self.gamma_hat = gamma_hat
        self.sigma_u_hat = sigma_u_hat


@dataclass(frozen=True)
class TestReport:
    __test__ = False  # not a pytest class

    name: str
    statistic: float
    pvalue: float
    level: float
    reject: bool
    variance_used: float
    gamma_hat: float | None = None
    sigma_u_hat: float | None = None

    def as_dict(self) -> dict:
        return asdict(self)


def _log_a_hat(residuals, zeta: Zeta) -> np.ndarray:
    th = zeta.theta
    r = np.asarray(residuals, dtype=float)
    pos = np.maximum(r, 0.0)
    neg = np.maximum(-r, 0.0)
    with np.errstate(divide="ignore"):
        return np.log(th.alpha_plus * pos**zeta.delta + th.alpha_minus * neg**zeta.delta + th.beta)


def gamma_and_sigma_u(filter_out: FilterOutput, zeta_hat: Zeta, *, tol: float = 1e-12):
    """Empirical Lyapunov exponent and the standard deviation of its summands.

    The variance uses divisor ``n``.
    """
    th = zeta_hat.theta
    if th.alpha_plus == 0 and th.alpha_minus == 0 and th.beta == 0:
        raise ValueError("alpha_plus, alpha_minus and beta are all zero")
    w = _log_a_hat(filter_out.residuals, zeta_hat)
    if not np.all(np.isfinite(w)):
        raise DegenerateStatisticError("log a(eta_hat) is not finite")
    g = float(np.mean(w))
    su = float(np.sqrt(np.mean((w - g) ** 2)))
    if su <= tol:
        raise DegenerateStatisticError(f"sigma_u_hat = {su:.3g}; T_n undefined", g, su)
    return g, su


def stationarity_test(filter_out: FilterOutput, zeta_hat: Zeta, direction: str = "ST", level: float = 0.05) -> TestReport:
    direction = direction.upper()
    if direction not in ("ST", "NS"):
        raise ValueError(f"direction must be 'ST' or 'NS', got {direction!r}")
    if not 0 < level < 1:
        raise ValueError("level must lie in (0, 1)")
    g, su = gamma_and_sigma_u(filter_out, zeta_hat)
    tn = math.sqrt(filter_out.n) * g / su
    return _stationarity_report(tn, direction, level, g, su)


def _stationarity_report(tn, direction, level, g=None, su=None) -> TestReport:
    if direction == "ST":
        p = float(norm.sf(tn))
        reject = bool(tn > norm.ppf(1 - level))
    else:
        p = float(norm.cdf(tn))
        reject = bool(tn < norm.ppf(level))
    return TestReport(
        name=f"stationarity_{direction}",
        statistic=float(tn),
        pvalue=p,
        level=level,
        reject=reject,
        variance_used=su**2 if su is not None else math.nan,
        gamma_hat=g,
        sigma_u_hat=su,
    )


def symmetry_test(cov_report: CovReport, zeta_hat: Zeta, level: float = 0.05) -> TestReport:
    if not 0 < level < 1:
        raise ValueError("level must lie in (0, 1)")
    k = cov_report.I_star_hat.shape[0]
    e = np.zeros(k)
    e[0], e[1] = 1.0, -1.0
    var = (cov_report.kappa_hat - 1.0) * float(e @ sym_inverse(cov_report.I_star_hat) @ e)
    if not var > 0:
        raise DegenerateStatisticError(f"variance of the contrast is {var}")
    diff = zeta_hat.theta.alpha_plus - zeta_hat.theta.alpha_minus
    ts = math.sqrt(cov_report.n) * diff / math.sqrt(var)
    p = float(2 * norm.sf(abs(ts)))
    return TestReport(
        name="symmetry",
        statistic=float(ts),
        pvalue=min(p, 1.0),
        level=level,
        reject=bool(abs(ts) > norm.ppf(1 - level / 2)),
        variance_used=var,
    )


def sigma_gamma_sq(
    spec: InnovationSpec,
    zeta: Zeta,
    regime: str,
    j_matrix: np.ndarray | None = None,
    omega_vec: np.ndarray | None = None,
) -> float:
    """Asymptotic variance of ``sqrt(n) (gamma_hat - gamma0)``.

    In the nonstationary regime this is ``Var log a0(eta)``.  In the
    stationary regime a population ``J`` over ``(omega, alpha_plus,
    alpha_minus, beta)`` is required and the value is

        sigma_u^2 + (kappa - 1) (a' J^-1 a - (delta^2 / 4) (1 - nu1)^2),

    with ``a = (0, nu_plus, nu_minus, nu1 / beta)``.  Supplying
    ``omega_vec = E (1/h_t) d sigma_t^delta / d theta`` switches to the
    unsimplified expression, cross term included, which must agree.
    """
    th = zeta.theta
    mom = innovations.a0_moments(spec, th, zeta.delta)
    if regime == "nonstationary":
        return mom.sigma_u2
    if regime != "stationary":
        raise ValueError(f"regime must be 'stationary' or 'nonstationary', got {regime!r}")
    if j_matrix is None:
        raise ValueError("the stationary branch needs a J matrix")
    kap = innovations.kurtosis(spec)
    d = zeta.delta
    a = np.array([0.0, mom.nu_plus, mom.nu_minus, mom.nu1 / th.beta])
    Jinv = sym_inverse(np.asarray(j_matrix, float))
    if omega_vec is None:
        return mom.sigma_u2 + (kap - 1) * (a @ Jinv @ a - d**2 / 4 * (1 - mom.nu1) ** 2)
    om = np.asarray(omega_vec, float)
    psi = (1 - mom.nu1) * om - a
    c = mom.cov_log_a0_sq
    return mom.sigma_u2 + 4 * c / d * (om @ Jinv @ psi) + (kap - 1) * (psi @ Jinv @ psi)
