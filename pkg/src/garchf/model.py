"""
The data-generating process

    eps_t = h_t^(1/delta) eta_t,
    h_t   = omega + alpha_plus (eps_{t-1}^+)^delta
                  + alpha_minus (-eps_{t-1}^-)^delta + beta h_{t-1},

simulated in the log-volatility domain so that explosive paths never
overflow, together with its top Lyapunov exponent ``E log a0(eta)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import math

import numpy as np
from numba import njit
from scipy import optimize

from garchf import innovations
from garchf.innovations import InnovationSpec
from garchf.params import ParamVector, Zeta
from garchf.rng import SeedLike

__all__ = [
    "SimPath",
    "a0_eval",
    "calibrate_beta",
    "lyapunov_exponent",
    "simulate",
]

# |log eps| beyond which the raw eps column is replaced by a +-inf sentinel
LOG_EPS_SENTINEL = 700.0


def a0_eval(theta: ParamVector, delta: float, x):
    """``alpha_plus (x+)^delta + alpha_minus (-x-)^delta + beta``."""
    return innovations._a0(theta, delta, x)


@dataclass(frozen=True, eq=False)
class SimPath:
    """A return series with its log-magnitude representation.

    ``log_abs_eps`` and ``sign`` are authoritative; ``eps`` is a convenience
    copy that holds ``+-inf`` wherever ``|log eps|`` exceeds 700.  Observed data
    carries no ``log_h``, ``eta``, ``truth`` or ``spec``.
    """

    log_abs_eps: np.ndarray
    sign: np.ndarray
    log_h: np.ndarray | None = None
    eta: np.ndarray | None = None
    seed: SeedLike | None = None
    truth: Zeta | None = None
    spec: InnovationSpec | None = None
    eps0: float = 0.0
    h0: float | None = None
    eps: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        la = np.ascontiguousarray(self.log_abs_eps, dtype=float)
        sg = np.ascontiguousarray(self.sign, dtype=float)
        if la.ndim != 1 or la.shape != sg.shape:
            raise ValueError("log_abs_eps and sign must be 1-d arrays of equal length")
        if la.size == 0:
            raise ValueError("empty series")
        la = np.where(sg == 0, -np.inf, la)
        with np.errstate(over="ignore"):
            eps = sg * np.exp(la)
        eps = np.where(la > LOG_EPS_SENTINEL, np.copysign(np.inf, sg), eps)
        object.__setattr__(self, "log_abs_eps", la)
        object.__setattr__(self, "sign", sg)
        object.__setattr__(self, "eps", eps)
        if self.log_h is not None and np.shape(self.log_h) != la.shape:
            raise ValueError("log_h length differs from the series length")

    @classmethod
    def from_eps(cls, eps, eps0: float = 0.0) -> SimPath:
        """Wrap raw returns; zeros are allowed."""
        eps = np.asarray(eps, dtype=float)
        if not np.all(np.isfinite(eps)):
            raise ValueError("returns must be finite")
        with np.errstate(divide="ignore"):
            la = np.log(np.abs(eps))
        return cls(la, np.sign(eps), eps0=float(eps0))

    @property
    def n(self) -> int:
        return self.log_abs_eps.shape[0]

    def scaled(self, c: float) -> SimPath:
        """The series ``c * eps`` (observed-data view, no truth attached)."""
        if c <= 0:
            raise ValueError("scale must be positive")
        return SimPath(self.log_abs_eps + math.log(c), self.sign, eps0=self.eps0 * c)

    @property
    def log_abs_eps0(self) -> float:
        return math.log(abs(self.eps0)) if self.eps0 != 0 else -math.inf

    @property
    def sign0(self) -> float:
        return float(np.sign(self.eps0))


@njit(cache=True)
def _simulate_core(eta, delta, omega, ap, am, beta, la0, sg0, log_h0):
    n = eta.shape[0]
    log_h = np.empty(n)
    la = np.empty(n)
    sg = np.empty(n)
    lw = math.log(omega)
    prev_la = la0
    prev_sg = sg0
    prev_lh = log_h0
    for t in range(n):
        m = lw
        x1 = -np.inf
        if prev_sg > 0 and ap > 0:
            x1 = math.log(ap) + delta * prev_la
        elif prev_sg < 0 and am > 0:
            x1 = math.log(am) + delta * prev_la
        x2 = -np.inf
        if beta > 0 and prev_lh > -np.inf:
            x2 = math.log(beta) + prev_lh
        if x1 > m:
            m = x1
        if x2 > m:
            m = x2
        acc = math.exp(lw - m)
        if x1 > -np.inf:
            acc += math.exp(x1 - m)
        if x2 > -np.inf:
            acc += math.exp(x2 - m)
        lh = m + math.log(acc)
        log_h[t] = lh
        e = eta[t]
        if e == 0.0:
            la[t] = -np.inf
            sg[t] = 0.0
        else:
            la[t] = lh / delta + math.log(abs(e))
            sg[t] = 1.0 if e > 0 else -1.0
        prev_la = la[t]
        prev_sg = sg[t]
        prev_lh = lh
    return log_h, la, sg


def simulate(
    zeta: Zeta,
    spec: InnovationSpec,
    n: int,
    seed: SeedLike,
    eps0: float = 0.0,
    h0: float | None = None,
) -> SimPath:
    """Simulate ``n`` returns; ``h0`` defaults to ``omega``."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    th = zeta.theta
    h0 = th.omega if h0 is None else float(h0)
    if h0 < 0:
        raise ValueError("h0 must be >= 0")
    eta = innovations.sample(spec, seed, n)
    la0 = math.log(abs(eps0)) if eps0 != 0 else -math.inf
    log_h0 = math.log(h0) if h0 > 0 else -math.inf
    log_h, la, sg = _simulate_core(
        eta, zeta.delta, th.omega, th.alpha_plus, th.alpha_minus, th.beta,
        la0, float(np.sign(eps0)), log_h0,
    )
    return SimPath(la, sg, log_h=log_h, eta=eta, seed=seed, truth=zeta, spec=spec, eps0=float(eps0), h0=h0)


def lyapunov_exponent(
    theta: ParamVector,
    delta: float,
    spec: InnovationSpec,
    method: str = "quadrature",
    *,
    m: int = 1_000_000,
    seed: SeedLike = 0,
    return_se: bool = False,
):
    """Top Lyapunov exponent ``gamma0 = E log a0(eta)``.

    ``method="montecarlo"`` averages ``m`` draws; with ``return_se`` the
    Monte Carlo standard error is returned as well (0 for quadrature).
    """
    if theta.alpha_plus == 0 and theta.alpha_minus == 0:
        if theta.beta <= 0:
            raise ValueError("a0 vanishes identically")
        g, se = math.log(theta.beta), 0.0
    elif method == "quadrature":
        g = innovations.expect(spec, lambda y: np.log(a0_eval(theta, delta, y)))
        se = 0.0
    elif method == "montecarlo":
        eta = innovations.sample(spec, seed, m)
        with np.errstate(divide="ignore"):
            vals = np.log(a0_eval(theta, delta, eta))
        if not np.all(np.isfinite(vals)):
            raise ValueError("log a0(eta) not finite on the sample")
        g = float(np.mean(vals))
        se = float(np.std(vals) / math.sqrt(m))
    else:
        raise ValueError(f"unknown method {method!r}")
    return (g, se) if return_se else g


def calibrate_beta(
    alpha_plus: float,
    alpha_minus: float,
    delta: float,
    spec: InnovationSpec,
    *,
    target: float = 0.0,
    omega: float = 1.0,
    xtol: float = 1e-13,
) -> float:
    """``beta`` such that the Lyapunov exponent equals ``target``.

    Solved by bracketing root search on the (increasing) map
    ``beta -> E log a0(eta)``.
    """
    if alpha_plus == 0 and alpha_minus == 0:
        return math.exp(target)

    def gap(beta):
        return lyapunov_exponent(ParamVector(omega, alpha_plus, alpha_minus, beta), delta, spec) - target

    lo, hi = 1e-12, 1.0
    while gap(hi) < 0:
        hi *= 2.0
        if hi > 1e6:
            raise ValueError("no beta reaches the target exponent")
    if gap(lo) > 0:
        raise ValueError("target exponent is below the value at beta = 0")
    return optimize.brentq(gap, lo, hi, xtol=xtol, rtol=4 * np.finfo(float).eps)
