"""
Local asymptotic power under ``theta_n = theta0 + tau / sqrt(n)``.

Three quantities are provided:

* the drift ``c_f`` of the stationarity statistic ``T_n`` and the resulting
  limiting rejection probabilities of the one-sided tests;
* the limiting power of the two-sided symmetry test;
* the power envelope of unbiased tests of ``alpha_plus = alpha_minus``.

Two-sided powers are ``1 - Phi(q - c) + Phi(-q - c)`` with
``q = Phi^-1(1 - level/2)``, which equals ``level`` at ``c = 0``.
"""

from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np
from scipy.stats import norm

from garchf import innovations
from garchf.covariance import sym_inverse
from garchf.innovations import InnovationSpec
from garchf.params import ParamVector

__all__ = [
    "DegenerateAlternativeError",
    "LocalAlternative",
    "PowerCurve",
    "c_f",
    "optimal_power_bound",
    "power_curve",
    "sigma_ts",
    "stationarity_local_power",
    "symmetry_local_power",
    "two_sided_power",
]

SYMMETRY_CONTRAST = np.array([1.0, -1.0, 0.0])


class DegenerateAlternativeError(ValueError):
    """The drift of the stationarity statistic is undefined."""


@dataclass(frozen=True)
class LocalAlternative:
    """Local alternative around ``theta0``.

    ``tau`` is ordered as ``(omega, alpha_plus, alpha_minus, beta)``.
    """

    tau: tuple
    theta0: ParamVector
    delta: float
    spec: InnovationSpec

    def __post_init__(self) -> None:
        t = np.asarray(self.tau, dtype=float)
        if t.shape != (4,) or not np.all(np.isfinite(t)):
            raise ValueError("tau must be a finite 4-vector")
        object.__setattr__(self, "tau", tuple(float(v) for v in t))

    def theta_n(self, n: int) -> ParamVector:
        """The alternative at sample size ``n``; raises if it leaves the parameter space."""
        return self.theta0.shifted(self.tau, n)


def _check_level(level):
    if not 0 < level < 1:
        raise ValueError("level must lie in (0, 1)")


def c_f(alt: LocalAlternative) -> float:
    """Drift of ``T_n`` under the local alternative.

    Equals ``-(tau2 nu_plus + tau3 nu_minus + tau4 nu1 / beta0)
    E[log a0(eta) g1(eta)] / (delta sigma_u (1 - nu1))`` where
    ``g1(y) = 1 + y f'(y)/f(y)``.  Integration by parts gives
    ``E[log a0 g1] = -delta (1 - nu1)``, so the drift is positive when the
    alternative raises the coefficients.
    """
    th = alt.theta0
    mom = innovations.a0_moments(alt.spec, th, alt.delta)
    if not mom.sigma_u > 0:
        raise DegenerateAlternativeError("sigma_u = 0")
    if not mom.nu1 < 1:
        raise DegenerateAlternativeError("nu1 = 1")
    _, t2, t3, t4 = alt.tau
    lin = t2 * mom.nu_plus + t3 * mom.nu_minus
    if t4 != 0:
        if th.beta == 0:
            raise DegenerateAlternativeError("beta0 = 0 with a beta shift")
        lin += t4 * mom.nu1 / th.beta
    if lin == 0:
        return 0.0
    return -lin * mom.cov_log_a0_g1 / (alt.delta * mom.sigma_u * (1.0 - mom.nu1))


def stationarity_local_power(alt: LocalAlternative, direction: str = "ST", level: float = 0.05) -> float:
    _check_level(level)
    c = c_f(alt)
    direction = direction.upper()
    if direction == "ST":
        return float(norm.cdf(c - norm.ppf(1 - level)))
    if direction == "NS":
        return float(norm.cdf(norm.ppf(level) - c))
    raise ValueError(f"direction must be 'ST' or 'NS', got {direction!r}")


def two_sided_power(c, level: float = 0.05):
    """``1 - Phi(q - c) + Phi(-q - c)``; vectorized in ``c``."""
    _check_level(level)
    q = norm.ppf(1 - level / 2)
    c = np.asarray(c, dtype=float)
    out = norm.sf(q - c) + norm.cdf(-q - c)
    return float(out) if out.ndim == 0 else out


def sigma_ts(I_matrix, kappa: float) -> float:
    """``sqrt((kappa - 1) e' I^-1 e)`` with ``e = (1, -1, 0)``."""
    e = SYMMETRY_CONTRAST
    v = (kappa - 1.0) * float(e @ sym_inverse(np.asarray(I_matrix, float)) @ e)
    if not v > 0:
        raise ValueError(f"nonpositive contrast variance {v}")
    return math.sqrt(v)


def symmetry_local_power(tau, sigma_TS: float, level: float = 0.05) -> float:
    """Limiting power of the symmetry test; ``tau`` as in :class:`LocalAlternative`."""
    if not sigma_TS > 0:
        raise ValueError("sigma_TS must be > 0")
    t = np.asarray(tau, float)
    return two_sided_power((t[1] - t[2]) / sigma_TS, level)


def optimal_power_bound(contrast: float, iota_f: float, I_matrix, level: float = 0.05) -> float:
    """Power envelope of unbiased tests at ``e' tau = contrast``."""
    e = SYMMETRY_CONTRAST
    v = float(e @ sym_inverse(np.asarray(I_matrix, float)) @ e)
    if not v > 0:
        raise ValueError("e' I^-1 e must be > 0")
    return two_sided_power(contrast * math.sqrt(iota_f) / (2.0 * math.sqrt(v)), level)


@dataclass(frozen=True, eq=False)
class PowerCurve:
    contrast: np.ndarray
    power_test: np.ndarray
    power_bound: np.ndarray
    level: float

    @property
    def gap(self) -> np.ndarray:
        return self.power_bound - self.power_test

    def rows(self):
        return list(zip(self.contrast.tolist(), self.power_test.tolist(), self.power_bound.tolist()))


def power_curve(spec: InnovationSpec, I_matrix, contrasts, level: float = 0.05) -> PowerCurve:
    """Tabulate the symmetry test's power and the envelope over ``contrasts``.

    ``contrasts`` are values of ``tau2 - tau3``.  ``I_matrix`` is the
    information over ``(alpha_plus, alpha_minus, beta)``, typically from
    :func:`garchf.oracles.information_matrix_I`.
    """
    c = np.asarray(contrasts, dtype=float).ravel()
    kap = innovations.kurtosis(spec)
    if not math.isfinite(kap):
        raise ValueError(f"{spec} has infinite kurtosis")
    iota = innovations.fisher_scale_info(spec)
    e = SYMMETRY_CONTRAST
    v = float(e @ sym_inverse(np.asarray(I_matrix, float)) @ e)
    test = np.atleast_1d(two_sided_power(c / math.sqrt((kap - 1.0) * v), level))
    bound = np.atleast_1d(two_sided_power(c * math.sqrt(iota) / (2.0 * math.sqrt(v)), level))
    return PowerCurve(c, test, bound, level)
