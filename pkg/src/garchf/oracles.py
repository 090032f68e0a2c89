"""
Population-level oracles from the stationary approximations of nonstationary
paths.

Writing ``b_k = beta0 / a0(eta_{t-k})``, the series

    d^{alpha+}_t = sum_{j>=1} (eta_{t-j}^+)^delta / a0(eta_{t-j}) * prod_{k<j} b_k
    d^{alpha-}_t = sum_{j>=1} (-eta_{t-j}^-)^delta / a0(eta_{t-j}) * prod_{k<j} b_k
    d^{beta}_t   = sum_{j>=2} (j-1) c_{t-j} / beta0 * prod_{k<j} b_k,
                   c = (alpha_plus (eta^+)^delta + alpha_minus (-eta^-)^delta) / a0

are the limits of the derivative ratios of the volatility filter at the true
parameter; ``I = (4/delta^2) E d d'`` is the asymptotic information of the
QMLE of ``(alpha_plus, alpha_minus, beta)`` when the Lyapunov exponent is
nonnegative.  ``v_t`` is the corresponding limit of ``sigma_t^delta(theta) / h_t``.

Every draw uses its own independent block of innovations, so draws are
i.i.d. and may be produced in any order.
"""

from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np

from garchf import innovations
from garchf.innovations import InnovationSpec
from garchf.params import ParamVector
from garchf.rng import SeedLike, split

__all__ = [
    "DivergentSeriesError",
    "DtDraw",
    "information_matrix_I",
    "kullback_terms",
    "sample_dt",
    "sample_vt",
]

DEFAULT_TRUNCATION = 400
TAIL_RTOL = 1e-6
CHUNK = 20_000


class DivergentSeriesError(ArithmeticError):
    pass


@dataclass(frozen=True, eq=False)
class DtDraw:
    """Truncated draws of ``d_t``; arrays of equal length.

    ``tail`` is the largest (over draws) ratio of the last retained term to
    the partial sum, a proxy for the truncation error.
    """

    d_alpha_plus: np.ndarray
    d_alpha_minus: np.ndarray
    d_beta: np.ndarray
    truncation: int
    tail: float

    def matrix(self) -> np.ndarray:
        return np.column_stack([self.d_alpha_plus, self.d_alpha_minus, self.d_beta])


def _check_contracting(theta0: ParamVector, delta: float, spec: InnovationSpec) -> None:
    if theta0.alpha_plus == 0 and theta0.alpha_minus == 0:
        raise ValueError("alpha_plus = alpha_minus = 0: beta/a0 is identically 1, series diverge")
    if theta0.beta > 0:
        mom = innovations.a0_moments(spec, theta0, delta)
        if not math.log(theta0.beta) - mom.gamma0 < 0:
            raise ValueError("E log(beta0 / a0(eta)) >= 0: series diverge")


def _eta_block(spec, seed, rows, cols):
    # column j holds the lag j+1 innovations of every draw and has its own
    # stream, so the leading lags do not depend on the truncation length
    out = np.empty((rows, cols), order="F")
    for j in range(cols):
        out[:, j] = innovations.sample(spec, split(seed, j), rows)
    return out


def _dt_block(eta, theta0: ParamVector, delta: float):
    # eta[:, j-1] plays the role of eta_{t-j}
    ap, am, b = theta0.alpha_plus, theta0.alpha_minus, theta0.beta
    pos = np.maximum(eta, 0.0) ** delta
    neg = np.maximum(-eta, 0.0) ** delta
    a0 = ap * pos + am * neg + b
    c = (ap * pos + am * neg) / a0
    m, T = eta.shape
    dp = np.zeros(m)
    dm = np.zeros(m)
    db = np.zeros(m)
    q = np.ones(m)  # prod_{k<j} 1/a0_k
    bpow = 1.0  # beta0^(j-2) for j >= 2
    last = np.zeros(m)
    for j in range(1, T + 1):
        col = j - 1
        w = q * (b ** (j - 1) if j > 1 else 1.0)
        dp += pos[:, col] / a0[:, col] * w
        dm += neg[:, col] / a0[:, col] * w
        if j >= 2:
            term = (j - 1) * c[:, col] * q * bpow
            db += term
            bpow *= b
            last = np.maximum(np.maximum(pos[:, col] / a0[:, col] * w, neg[:, col] / a0[:, col] * w), term)
        q = q / a0[:, col]
    scale = np.maximum(np.maximum(dp, dm), db)
    with np.errstate(invalid="ignore", divide="ignore"):
        tail = float(np.nanmax(np.where(scale > 0, last / scale, 0.0)))
    return dp, dm, db, tail


def sample_dt(
    theta0: ParamVector,
    delta: float,
    spec: InnovationSpec,
    truncation: int = DEFAULT_TRUNCATION,
    seed: SeedLike = 0,
    m: int = 1,
    *,
    auto_extend: bool = True,
) -> DtDraw:
    """``m`` independent truncated draws of ``d_t``.

    When the largest relative tail term exceeds ``1e-6`` the truncation is
    doubled (up to 16 times the request) before giving up.
    """
    _check_contracting(theta0, delta, spec)
    if truncation < 2:
        raise ValueError("truncation must be >= 2")
    T = truncation
    while True:
        parts = []
        tail = 0.0
        for k, start in enumerate(range(0, m, CHUNK)):
            rows = min(CHUNK, m - start)
            eta = _eta_block(spec, split(seed, k), rows, T)
            dp, dm, db, tl = _dt_block(eta, theta0, delta)
            parts.append((dp, dm, db))
            tail = max(tail, tl)
        if not auto_extend or tail <= TAIL_RTOL:
            break
        if T >= 16 * truncation:
            raise DivergentSeriesError(f"relative tail {tail:.2e} after {T} terms")
        T *= 2
    dp, dm, db = (np.concatenate(x) for x in zip(*parts))
    if not (np.all(np.isfinite(dp)) and np.all(np.isfinite(dm)) and np.all(np.isfinite(db))):
        raise DivergentSeriesError("non-finite partial sums")
    return DtDraw(dp, dm, db, T, tail)


def information_matrix_I(
    theta0: ParamVector,
    delta: float,
    spec: InnovationSpec,
    m: int = 100_000,
    seed: SeedLike = 0,
    truncation: int = DEFAULT_TRUNCATION,
    *,
    check_pd: bool = True,
) -> np.ndarray:
    """``(4/delta^2) E d d'`` estimated from ``m`` draws.

    ``beta0 = 0`` is rejected: then ``d^beta = 1/a0(eta_{t-1})`` has an
    infinite second moment whenever the density is positive at 0.
    """
    if theta0.beta == 0:
        raise ValueError("beta0 = 0 is on the boundary of the parameter space; I is not finite")
    D = sample_dt(theta0, delta, spec, truncation, seed, m).matrix()
    info = 4.0 / delta**2 * (D.T @ D) / m
    info = 0.5 * (info + info.T)
    if check_pd and not np.linalg.eigvalsh(info)[0] > 0:
        raise np.linalg.LinAlgError("information matrix is not positive definite")
    return info


def sample_vt(
    vartheta,
    theta0: ParamVector,
    delta: float,
    spec: InnovationSpec,
    truncation: int = DEFAULT_TRUNCATION,
    seed: SeedLike = 0,
    m: int = 1,
) -> np.ndarray:
    """``m`` truncated draws of ``v_t(vartheta)``.

    Requires ``beta < exp(gamma0)`` so that the series converges.
    """
    ap, am, b = (float(v) for v in vartheta)
    if min(ap, am, b) < 0:
        raise ValueError("vartheta entries must be >= 0")
    if theta0.alpha_plus == 0 and theta0.alpha_minus == 0:
        raise ValueError("true alphas are zero")
    g0 = innovations.a0_moments(spec, theta0, delta).gamma0
    if b > 0 and not math.log(b) < g0:
        raise DivergentSeriesError(f"beta = {b} >= exp(gamma0) = {math.exp(g0):.6g}")
    out = []
    for k, start in enumerate(range(0, m, CHUNK)):
        rows = min(CHUNK, m - start)
        eta = _eta_block(spec, split(seed, k), rows, truncation)
        pos = np.maximum(eta, 0.0) ** delta
        neg = np.maximum(-eta, 0.0) ** delta
        a0 = theta0.alpha_plus * pos + theta0.alpha_minus * neg + theta0.beta
        v = np.zeros(rows)
        w = np.ones(rows)
        for j in range(truncation):
            v += (ap * pos[:, j] + am * neg[:, j]) / a0[:, j] * w
            w = w * (b / a0[:, j])
        out.append(v)
    v = np.concatenate(out)
    if not np.all(np.isfinite(v)):
        raise DivergentSeriesError("non-finite partial sums")
    return v


def kullback_terms(v, delta: float) -> np.ndarray:
    """``v^(-2/delta) - 1 + log v^(2/delta)``, nonnegative and zero iff ``v = 1``."""
    v = np.asarray(v, dtype=float)
    return v ** (-2.0 / delta) - 1.0 + (2.0 / delta) * np.log(v)
