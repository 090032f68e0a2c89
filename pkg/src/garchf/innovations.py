"""
Innovation laws for the volatility model.

Every law is standardized so that ``E eta^2 = 1``.  Three families are
supported:

* ``gaussian``      standard normal
* ``student:NU``    Student t with ``NU > 2`` degrees of freedom, rescaled by
                    ``sqrt((NU - 2) / NU)``
* ``gammapower:A``  ``eta = S * sqrt(G)`` with ``S`` a fair sign and
                    ``G ~ Gamma(shape A, rate A)``; its density is
                    ``A^A / Gamma(A) * exp(-A y^2) * |y|^(2A - 1)``.
                    ``A = 1/2`` is the standard normal.

Scalar functionals (kurtosis, Fisher information for scale, the moments of
``1 / a0(eta)`` and of ``log a0(eta)``) are computed by adaptive quadrature.
"""

from __future__ import annotations

from dataclasses import dataclass
import math
import warnings

import numpy as np
from scipy import integrate
from scipy.special import gammaln

from garchf.params import ParamVector
from garchf.rng import SeedLike, generator

__all__ = [
    "A0Moments",
    "InnovationSpec",
    "NotDifferentiableError",
    "QuadratureError",
    "a0_moments",
    "expect",
    "fisher_scale_info",
    "kurtosis",
    "sample",
    "score_g1",
]

QUAD_TOL = 1e-9


class QuadratureError(RuntimeError):
    """Adaptive quadrature did not reach the requested accuracy."""


class NotDifferentiableError(ValueError):
    """The density is not differentiable at the requested point."""


_KINDS = ("gaussian", "student", "gammapower")


@dataclass(frozen=True)
class InnovationSpec:
    kind: str
    param: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise ValueError(f"unknown innovation law {self.kind!r}; expected one of {_KINDS}")
        if self.kind == "gaussian":
            if self.param is not None:
                raise ValueError("gaussian takes no parameter")
            return
        if self.param is None or not np.isfinite(self.param):
            raise ValueError(f"{self.kind} requires a finite parameter")
        if self.kind == "student" and self.param <= 2:
            raise ValueError(f"student degrees of freedom must be > 2, got {self.param}")
        if self.kind == "gammapower" and self.param <= 0:
            raise ValueError(f"gammapower shape must be > 0, got {self.param}")

    @classmethod
    def gaussian(cls) -> InnovationSpec:
        return cls("gaussian")

    @classmethod
    def student(cls, nu: float) -> InnovationSpec:
        return cls("student", float(nu))

    @classmethod
    def gamma_power(cls, a: float) -> InnovationSpec:
        return cls("gammapower", float(a))

    @classmethod
    def parse(cls, text: str) -> InnovationSpec:
        """Parse ``gaussian``, ``student:NU`` or ``gammapower:A``."""
        text = text.strip().lower()
        if text in ("gaussian", "normal"):
            return cls.gaussian()
        kind, sep, value = text.partition(":")
        if not sep:
            raise ValueError(f"cannot parse innovation law {text!r}")
        return cls(kind, float(value))

    def __str__(self) -> str:
        if self.kind == "gaussian":
            return "gaussian"
        return f"{self.kind}:{self.param:g}"

    # -- density ---------------------------------------------------------
    def logpdf(self, y):
        y = np.asarray(y, dtype=float)
        if self.kind == "gaussian":
            return -0.5 * y * y - 0.5 * math.log(2 * math.pi)
        if self.kind == "student":
            nu = self.param
            s2 = (nu - 2.0) / nu
            const = (
                gammaln((nu + 1) / 2)
                - gammaln(nu / 2)
                - 0.5 * math.log(nu * math.pi)
                - 0.5 * math.log(s2)
            )
            return const - 0.5 * (nu + 1) * np.log1p(y * y / (nu * s2))
        a = self.param
        with np.errstate(divide="ignore"):
            return a * math.log(a) - gammaln(a) - a * y * y + (2 * a - 1) * np.log(np.abs(y))

    def pdf(self, y):
        return np.exp(self.logpdf(y))

    def score_g1(self, y):
        """``1 + y f'(y) / f(y)``."""
        y = np.asarray(y, dtype=float)
        if self.kind == "gaussian":
            return 1.0 - y * y
        if self.kind == "student":
            nu = self.param
            return 1.0 - (nu + 1) * y * y / (nu - 2 + y * y)
        a = self.param
        if a != 0.5 and np.any(y == 0):
            raise NotDifferentiableError(f"{self} density is not differentiable at 0")
        return 2 * a * (1.0 - y * y)

    @property
    def singular_at_zero(self) -> bool:
        return self.kind == "gammapower" and self.param != 0.5


def sample(spec: InnovationSpec, seed: SeedLike, n: int) -> np.ndarray:
    """Draw ``n`` i.i.d. innovations; deterministic in ``seed``."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    rng = generator(seed)
    if spec.kind == "gaussian":
        return rng.standard_normal(n)
    if spec.kind == "student":
        nu = spec.param
        return rng.standard_t(nu, n) * math.sqrt((nu - 2.0) / nu)
    a = spec.param
    g = rng.gamma(a, 1.0 / a, n)
    sign = np.where(rng.random(n) < 0.5, -1.0, 1.0)
    return sign * np.sqrt(g)


def score_g1(spec: InnovationSpec, y):
    return spec.score_g1(y)


def _quad(fun, a, b, tol):
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            val, err = integrate.quad(fun, a, b, epsabs=tol, epsrel=1e-11, limit=500)
        except integrate.IntegrationWarning as exc:
            raise QuadratureError(f"quadrature on ({a}, {b}) failed: {exc}") from None
    if not np.isfinite(val):
        raise QuadratureError(f"quadrature on ({a}, {b}) returned {val}")
    return val


def expect(spec: InnovationSpec, fun, *, tol: float = QUAD_TOL, lower=-np.inf, upper=np.inf) -> float:
    """``E fun(eta)`` by adaptive Gauss-Kronrod quadrature.

    The real line is split at 0 and +-1 so that the cusp or pole of the
    density (and of ``a0``) at the origin sits on an interval endpoint.
    """
    knots = [k for k in (-np.inf, -1.0, 0.0, 1.0, np.inf) if lower <= k <= upper]
    if knots[0] != lower:
        knots.insert(0, lower)
    if knots[-1] != upper:
        knots.append(upper)

    def integrand(y):
        return fun(y) * spec.pdf(y)

    return math.fsum(_quad(integrand, lo, hi, tol) for lo, hi in zip(knots[:-1], knots[1:]) if hi > lo)


def kurtosis(spec: InnovationSpec) -> float:
    """``E eta^4``; ``inf`` for Student laws with ``nu <= 4``."""
    if spec.kind == "gaussian":
        return 3.0
    if spec.kind == "student":
        nu = spec.param
        return 3.0 * (nu - 2) / (nu - 4) if nu > 4 else math.inf
    return 1.0 + 1.0 / spec.param


def fisher_scale_info(spec: InnovationSpec, *, tol: float = QUAD_TOL) -> float:
    """Fisher information for scale, ``E (1 + eta f'(eta)/f(eta))^2``."""
    return expect(spec, lambda y: spec.score_g1(y) ** 2, tol=tol)


@dataclass(frozen=True)
class A0Moments:
    """Moments of ``a0(eta) = alpha_plus (eta+)^delta + alpha_minus (-eta-)^delta + beta``.

    Attributes
    ----------
    nu_plus, nu_minus
        ``E (eta+)^delta / a0(eta)`` and ``E (-eta-)^delta / a0(eta)``.
    nu1
        ``E beta / a0(eta)``.
    gamma0
        ``E log a0(eta)``, the top Lyapunov exponent.
    sigma_u2
        ``Var log a0(eta)``.
    cov_log_a0_g1
        ``E log a0(eta) g1(eta)`` (``g1`` has mean zero).
    cov_log_a0_sq
        ``E log a0(eta) (1 - eta^2)``.
    """

    nu_plus: float
    nu_minus: float
    nu1: float
    gamma0: float
    sigma_u2: float
    cov_log_a0_g1: float
    cov_log_a0_sq: float

    @property
    def sigma_u(self) -> float:
        return math.sqrt(self.sigma_u2)


def _a0(theta: ParamVector, delta: float, y):
    y = np.asarray(y, dtype=float)
    pos = np.maximum(y, 0.0)
    neg = np.maximum(-y, 0.0)
    return theta.alpha_plus * pos**delta + theta.alpha_minus * neg**delta + theta.beta


def a0_moments(spec: InnovationSpec, theta: ParamVector, delta: float, *, tol: float = QUAD_TOL) -> A0Moments:
    if theta.alpha_plus == 0 and theta.alpha_minus == 0 and theta.beta == 0:
        raise ValueError("a0 vanishes identically")
    b = theta.beta

    def a0(y):
        return _a0(theta, delta, y)

    nu_plus = expect(spec, lambda y: y**delta / a0(y), tol=tol, lower=0.0)
    nu_minus = expect(spec, lambda y: (-y) ** delta / a0(y), tol=tol, upper=0.0)
    nu1 = expect(spec, lambda y: b / a0(y), tol=tol) if b > 0 else 0.0
    if theta.alpha_plus == 0 and theta.alpha_minus == 0:
        return A0Moments(nu_plus, nu_minus, nu1, math.log(b), 0.0, 0.0, 0.0)
    gamma0 = expect(spec, lambda y: np.log(a0(y)), tol=tol)
    sigma_u2 = expect(spec, lambda y: (np.log(a0(y)) - gamma0) ** 2, tol=tol)
    cov_g1 = expect(spec, lambda y: np.log(a0(y)) * spec.score_g1(y), tol=tol)
    cov_sq = expect(spec, lambda y: np.log(a0(y)) * (1.0 - y * y), tol=tol)
    return A0Moments(nu_plus, nu_minus, nu1, gamma0, sigma_u2, cov_g1, cov_sq)
