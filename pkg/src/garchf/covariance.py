"""
Asymptotic covariance of the QMLE of ``(alpha_plus, alpha_minus, beta)``.

The sample information ``J`` is built from the filter's derivative ratios and
the omega coordinate is profiled out by a Schur complement.  The resulting
``(kappa - 1) I_star^-1`` estimates the asymptotic variance whether the data
are stationary, explosive, or at the boundary; no regime is ever branched on.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import linalg
from scipy.stats import norm

from garchf.params import Zeta
from garchf.volfilter import FilterOutput

__all__ = [
    "CovReport",
    "SingularInformationError",
    "avar_and_ci",
    "covariance_report",
    "i_star_hat",
    "j_hat",
    "kappa_hat",
    "sym_inverse",
]

COND_MAX = 1e12
THETA_COLS = ("omega", "alpha_plus", "alpha_minus", "beta", "delta")


class SingularInformationError(np.linalg.LinAlgError):
    pass


def j_hat(filter_out: FilterOutput, delta: float | None = None) -> np.ndarray:
    """``(1/n) sum_t g_t g_t'`` with ``g_t`` the gradient of ``log sigma_t^2``.

    Columns are ``(omega, alpha_plus, alpha_minus, beta)``, followed by
    ``delta`` when the filter carried delta derivatives.  For the first four
    columns this is ``(4/delta^2) (1/n) sum_t r_t r_t'``.
    """
    if delta is not None and delta != filter_out.delta:
        raise ValueError("delta does not match the filter output")
    g = filter_out.dlog_sigma2()
    return g.T @ g / g.shape[0]


def i_star_hat(J: np.ndarray, tol: float = 0.0) -> np.ndarray:
    """Schur complement of the omega (first) coordinate of ``J``."""
    J = np.asarray(J, dtype=float)
    jww = J[0, 0]
    if not (np.isfinite(jww) and jww > tol):
        raise SingularInformationError(f"omega block of J is {jww!r}, not > {tol}")
    jvw = J[1:, 0]
    out = J[1:, 1:] - np.outer(jvw, jvw) / jww
    return 0.5 * (out + out.T)


def kappa_hat(residuals) -> float:
    r = np.asarray(residuals, dtype=float)
    if r.size == 0:
        raise ValueError("no residuals")
    return float(np.mean(r**4))


def sym_inverse(A: np.ndarray, cond_max: float = COND_MAX) -> np.ndarray:
    """Inverse of a symmetric matrix through a pivoted symmetric factorization."""
    A = np.asarray(A, dtype=float)
    c = np.linalg.cond(A)
    if not np.isfinite(c) or c > cond_max:
        raise SingularInformationError(f"matrix condition number {c:.3g} exceeds {cond_max:.0e}")
    inv = linalg.solve(A, np.eye(A.shape[0]), assume_a="sym")
    return 0.5 * (inv + inv.T)


@dataclass(frozen=True, eq=False)
class CovReport:
    """
    Attributes
    ----------
    names : tuple
        Coordinates covered by ``avar``: ``alpha_plus, alpha_minus, beta``
        and ``delta`` for joint fits.
    avar : ndarray
        ``(kappa_hat - 1) I_star_hat^-1``; divide by ``n`` for the
        finite-sample covariance.
    se, ci : dict
        Standard errors and two-sided intervals at ``level``.
    """

    J_hat: np.ndarray
    I_star_hat: np.ndarray
    kappa_hat: float
    avar: np.ndarray
    names: tuple
    n: int
    level: float
    estimate: dict
    se: dict
    ci: dict
    notes: tuple = field(default=())

    @property
    def ci95(self) -> dict:
        if self.level != 0.95:
            raise AttributeError(f"report was built at level {self.level}")
        return self.ci

    def as_dict(self) -> dict:
        return {
            "names": list(self.names),
            "n": self.n,
            "level": self.level,
            "kappa_hat": self.kappa_hat,
            "J_hat": self.J_hat.tolist(),
            "I_star_hat": self.I_star_hat.tolist(),
            "avar": self.avar.tolist(),
            "estimate": dict(self.estimate),
            "se": dict(self.se),
            "ci": {k: list(v) for k, v in self.ci.items()},
            "notes": list(self.notes),
        }


def avar_and_ci(
    J: np.ndarray,
    residuals,
    zeta_hat: Zeta,
    level: float = 0.95,
    *,
    at_boundary: tuple = (),
) -> CovReport:
    """Standard errors and confidence intervals from ``J`` and the residuals."""
    if not 0 < level < 1:
        raise ValueError("level must lie in (0, 1)")
    J = np.asarray(J, dtype=float)
    I_star = i_star_hat(J)
    kap = kappa_hat(residuals)
    n = len(residuals)
    avar = (kap - 1.0) * sym_inverse(I_star)
    names = THETA_COLS[1 : J.shape[0]]
    values = {
        "alpha_plus": zeta_hat.theta.alpha_plus,
        "alpha_minus": zeta_hat.theta.alpha_minus,
        "beta": zeta_hat.theta.beta,
        "delta": zeta_hat.delta,
    }
    z = norm.ppf(1 - (1 - level) / 2)
    diag = np.diag(avar)
    if np.any(diag <= 0):
        raise SingularInformationError("asymptotic variance is not positive definite")
    se = {nm: float(np.sqrt(v / n)) for nm, v in zip(names, diag)}
    est = {nm: values[nm] for nm in names}
    ci = {nm: (est[nm] - z * se[nm], est[nm] + z * se[nm]) for nm in names}
    notes = ["omega: no interval; its estimator is not covered by the universal variance and "
             "admits no valid inference when the process is nonstationary"]
    for nm in at_boundary:
        if nm in names:
            notes.append(f"{nm}: estimate on the box boundary, interval not guaranteed")
    return CovReport(J, I_star, kap, avar, tuple(names), n, level, est, se, ci, tuple(notes))


def covariance_report(result, level: float = 0.95) -> CovReport:
    """:func:`avar_and_ci` for an :class:`~garchf.estimation.EstimationResult`."""
    fo = result.filter_out
    return avar_and_ci(j_hat(fo), fo.residuals, result.zeta_hat, level, at_boundary=result.at_boundary)
