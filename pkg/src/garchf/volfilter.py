"""
Volatility filter ``sigma_t^delta(zeta)`` for a given return series.

The recursion

    s_t = omega + alpha_plus (eps_{t-1}^+)^delta
                + alpha_minus (-eps_{t-1}^-)^delta + beta s_{t-1},   s_0 = omega,

is run on ``log s_t`` with a log-sum-exp update, so explosive series are
handled without overflow.  The derivative ratios ``(1/s_t) ds_t/dparam`` are
propagated through ratio recursions in which every product of explosive
quantities appears as ``s_{t-1}/s_t``.
"""

from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np
from numba import njit

from garchf.model import SimPath
from garchf.params import Zeta

__all__ = ["FilterOutput", "filter_series", "qml_loss", "loss_fast"]

THETA_NAMES = ("omega", "alpha_plus", "alpha_minus", "beta")


@dataclass(frozen=True, eq=False)
class FilterOutput:
    """
    Filtered quantities for ``t = 1, ..., n``.

    Attributes
    ----------
    log_s : ndarray
        ``log sigma_t^delta``.
    loss_terms : ndarray
        ``eps_t^2 / sigma_t^2 + log sigma_t^2``.
    residuals : ndarray
        ``eps_t / sigma_t``.
    deriv_ratios : ndarray or None
        ``n x 4`` (or ``n x 5`` with the delta column last) matrix with rows
        ``(1/sigma_t^delta) d sigma_t^delta / d(omega, alpha_plus, alpha_minus, beta[, delta])``.
    """

    zeta: Zeta
    log_s: np.ndarray
    loss_terms: np.ndarray
    residuals: np.ndarray
    deriv_ratios: np.ndarray | None = None

    @property
    def delta(self) -> float:
        return self.zeta.delta

    @property
    def n(self) -> int:
        return self.log_s.shape[0]

    @property
    def loss(self) -> float:
        return float(np.mean(self.loss_terms))

    def dlog_sigma2(self) -> np.ndarray:
        """Gradient of ``log sigma_t^2`` in ``(omega, alpha_plus, alpha_minus, beta[, delta])``.

        For the delta coordinate this is ``(2/delta) r_delta - (2/delta^2) log s_t``.
        """
        if self.deriv_ratios is None:
            raise ValueError("filter was run without derivatives")
        d = self.delta
        g = (2.0 / d) * self.deriv_ratios
        if g.shape[1] == 5:
            g = g.copy()
            g[:, 4] -= (2.0 / d**2) * self.log_s
        return g


@njit(cache=True)
def _filter_core(la, sg, la0, sg0, omega, ap, am, beta, delta, nder):
    n = la.shape[0]
    log_s = np.empty(n)
    loss = np.empty(n)
    resid = np.empty(n)
    R = np.zeros((n, nder))
    lw = math.log(omega)
    lap = math.log(ap) if ap > 0 else -np.inf
    lam = math.log(am) if am > 0 else -np.inf
    lb = math.log(beta) if beta > 0 else -np.inf
    c2 = 2.0 / delta
    prev_ls = lw
    prev_la = la0
    prev_sg = sg0
    r_prev = np.zeros(5)
    r_prev[0] = 1.0 / omega
    for t in range(n):
        x1 = -np.inf
        if prev_sg > 0:
            x1 = lap + delta * prev_la
        elif prev_sg < 0:
            x1 = lam + delta * prev_la
        x2 = lb + prev_ls
        m = lw
        if x1 > m:
            m = x1
        if x2 > m:
            m = x2
        acc = math.exp(lw - m)
        if x1 > -np.inf:
            acc += math.exp(x1 - m)
        if x2 > -np.inf:
            acc += math.exp(x2 - m)
        ls = m + math.log(acc)
        log_s[t] = ls
        if sg[t] == 0:
            loss[t] = c2 * ls
            resid[t] = 0.0
        else:
            loss[t] = math.exp(2.0 * la[t] - c2 * ls) + c2 * ls
            resid[t] = sg[t] * math.exp(la[t] - ls / delta)
        if nder > 0:
            ratio = math.exp(prev_ls - ls)
            br = beta * ratio
            e_s = 0.0
            if prev_sg != 0:
                e_s = math.exp(delta * prev_la - ls)
            r0 = math.exp(-ls) + br * r_prev[0]
            r1 = br * r_prev[1]
            r2 = br * r_prev[2]
            if prev_sg > 0:
                r1 += e_s
            elif prev_sg < 0:
                r2 += e_s
            r3 = ratio * (1.0 + beta * r_prev[3])
            R[t, 0] = r0
            R[t, 1] = r1
            R[t, 2] = r2
            R[t, 3] = r3
            r_prev[0] = r0
            r_prev[1] = r1
            r_prev[2] = r2
            r_prev[3] = r3
            if nder == 5:
                r4 = br * r_prev[4]
                if prev_sg > 0:
                    r4 += ap * e_s * prev_la
                elif prev_sg < 0:
                    r4 += am * e_s * prev_la
                R[t, 4] = r4
                r_prev[4] = r4
        prev_ls = ls
        prev_la = la[t]
        prev_sg = sg[t]
    return log_s, loss, resid, R


@njit(cache=True)
def _loss_fast(la, sg, la0, sg0, omega, ap, am, beta, delta):
    # Linear-domain recursion on s_t / exp(K) with K re-centred whenever the
    # mantissa leaves [1e-100, 1e100]; same value as the log-domain filter.
    n = la.shape[0]
    c2 = 2.0 / delta
    K = math.log(omega)
    q = 1.0
    w = 1.0
    prev_la = la0
    prev_sg = sg0
    tot = 0.0
    for t in range(n):
        x = w + beta * q
        if prev_sg > 0:
            x += ap * math.exp(delta * prev_la - K)
        elif prev_sg < 0:
            x += am * math.exp(delta * prev_la - K)
        q = x
        if q > 1e100 or q < 1e-100:
            if not (q > 0.0 and q < np.inf):
                return np.nan
            K += math.log(q)
            q = 1.0
            w = math.exp(math.log(omega) - K)
        ls = math.log(q) + K
        if sg[t] != 0:
            tot += math.exp(2.0 * la[t] - c2 * ls)
        tot += c2 * ls
        prev_la = la[t]
        prev_sg = sg[t]
    return tot / n


def _as_path(series) -> SimPath:
    if isinstance(series, SimPath):
        return series
    return SimPath.from_eps(series)


def filter_series(series, zeta: Zeta, with_derivs: bool = True, with_delta_derivs: bool = False) -> FilterOutput:
    """Run the volatility filter of ``series`` at ``zeta``.

    ``series`` is a :class:`SimPath` or an array of raw returns.
    """
    path = _as_path(series)
    th = zeta.theta
    nder = 0
    if with_derivs:
        nder = 5 if with_delta_derivs else 4
    log_s, loss, resid, R = _filter_core(
        path.log_abs_eps, path.sign, path.log_abs_eps0, path.sign0,
        th.omega, th.alpha_plus, th.alpha_minus, th.beta, zeta.delta, nder,
    )
    return FilterOutput(zeta, log_s, loss, resid, R if nder else None)


def qml_loss(series, zeta: Zeta) -> float:
    """Average QML loss ``(1/n) sum_t l_t(zeta)``."""
    out = filter_series(series, zeta, with_derivs=False)
    return out.loss


def loss_fast(series, zeta: Zeta) -> float:
    """Same value as :func:`qml_loss` through the cheaper rescaled recursion."""
    path = _as_path(series)
    th = zeta.theta
    return _loss_fast(
        path.log_abs_eps, path.sign, path.log_abs_eps0, path.sign0,
        th.omega, th.alpha_plus, th.alpha_minus, th.beta, zeta.delta,
    )
