"""Compiled Nelder-Mead on the logit-reparameterized QML loss."""

from __future__ import annotations

import numpy as np
from numba import njit

from garchf.volfilter import _loss_fast


@njit(cache=True)
def to_natural(x, lo, up):
    return lo + (up - lo) / (1.0 + np.exp(-x))


@njit(cache=True)
def to_unbounded(p, lo, up):
    return np.log((p - lo) / (up - p))


@njit(cache=True)
def objective(x, lo, up, fixed_delta, la, sg, la0, sg0):
    p = to_natural(x, lo, up)
    if fixed_delta > 0:
        v = _loss_fast(la, sg, la0, sg0, p[0], p[1], p[2], p[3], fixed_delta)
    else:
        v = _loss_fast(la, sg, la0, sg0, p[1], p[2], p[3], p[4], p[0])
    if not np.isfinite(v):
        return np.inf
    return v


@njit(cache=True)
def minimize(x0, step, xtol, max_evals, lo, up, fixed_delta, la, sg, la0, sg0):
    """Returns ``(x_best, f_best, n_evals, converged)``.

    Stops when every vertex lies within ``xtol`` (max-norm) of the best
    vertex, or after ``max_evals`` loss evaluations.  Non-finite losses count
    as ``+inf`` so the offending vertex is always replaced.
    """
    k = x0.shape[0]
    sim = np.empty((k + 1, k))
    fs = np.empty(k + 1)
    sim[0] = x0
    for i in range(k):
        sim[i + 1] = x0
        sim[i + 1, i] += step
    nev = 0
    for i in range(k + 1):
        fs[i] = objective(sim[i], lo, up, fixed_delta, la, sg, la0, sg0)
        nev += 1
    converged = False
    while True:
        order = np.argsort(fs, kind="mergesort")
        sim = sim[order]
        fs = fs[order]
        diam = 0.0
        for i in range(1, k + 1):
            for j in range(k):
                d = abs(sim[i, j] - sim[0, j])
                if d > diam:
                    diam = d
        if diam < xtol:
            converged = True
            break
        if nev >= max_evals:
            break
        xbar = np.zeros(k)
        for i in range(k):
            xbar += sim[i]
        xbar /= k
        xr = 2.0 * xbar - sim[k]
        fr = objective(xr, lo, up, fixed_delta, la, sg, la0, sg0)
        nev += 1
        if fr < fs[0]:
            xe = 3.0 * xbar - 2.0 * sim[k]
            fe = objective(xe, lo, up, fixed_delta, la, sg, la0, sg0)
            nev += 1
            if fe < fr:
                sim[k] = xe
                fs[k] = fe
            else:
                sim[k] = xr
                fs[k] = fr
            continue
        if fr < fs[k - 1]:
            sim[k] = xr
            fs[k] = fr
            continue
        shrink = False
        if fr < fs[k]:
            xc = 1.5 * xbar - 0.5 * sim[k]
            fc = objective(xc, lo, up, fixed_delta, la, sg, la0, sg0)
            nev += 1
            if fc <= fr:
                sim[k] = xc
                fs[k] = fc
            else:
                shrink = True
        else:
            xc = 0.5 * xbar + 0.5 * sim[k]
            fc = objective(xc, lo, up, fixed_delta, la, sg, la0, sg0)
            nev += 1
            if fc < fs[k]:
                sim[k] = xc
                fs[k] = fc
            else:
                shrink = True
        if shrink:
            for i in range(1, k + 1):
                sim[i] = sim[0] + 0.5 * (sim[i] - sim[0])
                fs[i] = objective(sim[i], lo, up, fixed_delta, la, sg, la0, sg0)
                nev += 1
    return sim[0].copy(), fs[0], nev, converged


def run(x0, step, xtol, max_evals, lo, up, fixed_delta, path):
    x, f, nev, conv = minimize(
        np.ascontiguousarray(x0, dtype=float), float(step), float(xtol), int(max_evals),
        lo, up, float(fixed_delta), path.log_abs_eps, path.sign,
        path.log_abs_eps0, path.sign0,
    )
    return x, float(f), int(nev), bool(conv)


__all__ = ["minimize", "objective", "run", "to_natural", "to_unbounded"]
