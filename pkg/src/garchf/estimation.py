"""
Box-constrained quasi-maximum likelihood estimation.

The loss is minimized by Nelder-Mead in the coordinates
``x = log((p - lo) / (up - p))``.  A fixed grid of starting points (corners of
a sub-box plus its center) is searched with a coarse tolerance; the best
candidate is then polished to the final tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
import itertools
import math

import numpy as np
from scipy.special import logsumexp

from garchf import _neldermead as nm
from garchf.model import SimPath
from garchf.params import Zeta
from garchf.volfilter import FilterOutput, filter_series

__all__ = ["EstimationResult", "FitOptions", "ParamBox", "fit", "start_grid"]

MIN_LENGTH = 50
TIE_TOL = 1e-12

# coordinate order used throughout: (delta, omega, alpha_plus, alpha_minus, beta)
NAMES = ("delta", "omega", "alpha_plus", "alpha_minus", "beta")


@dataclass(frozen=True)
class ParamBox:
    """Compact parameter box over ``(delta, omega, alpha_plus, alpha_minus, beta)``.

    With ``fixed_delta`` set, the delta bounds are ignored and only the four
    volatility coefficients are estimated.
    """

    lower: tuple
    upper: tuple
    fixed_delta: float | None = 1.0

    def __post_init__(self) -> None:
        lo = np.asarray(self.lower, float)
        up = np.asarray(self.upper, float)
        if lo.shape != (5,) or up.shape != (5,):
            raise ValueError("bounds must have 5 entries (delta, omega, alpha_plus, alpha_minus, beta)")
        if lo[0] <= 0 or lo[1] <= 0:
            raise ValueError("lower bounds of delta and omega must be > 0")
        if np.any(lo[2:] < 0):
            raise ValueError("lower bounds of alpha_plus, alpha_minus, beta must be >= 0")
        if np.any(lo >= up) or not np.all(np.isfinite(up)):
            raise ValueError("need finite bounds with lower < upper")
        if self.fixed_delta is not None and self.fixed_delta <= 0:
            raise ValueError("fixed delta must be > 0")

    @classmethod
    def default(cls, regime: str = "stationary", delta: float | None = 1.0) -> ParamBox:
        """Default box; ``regime="any"`` lets beta range up to 3."""
        if regime not in ("stationary", "any"):
            raise ValueError(f"regime must be 'stationary' or 'any', got {regime!r}")
        beta_up = 0.9999 if regime == "stationary" else 3.0
        return cls(
            lower=(0.2, 1e-6, 1e-8, 1e-8, 1e-8),
            upper=(4.0, 100.0, 10.0, 10.0, beta_up),
            fixed_delta=delta,
        )

    @property
    def joint(self) -> bool:
        return self.fixed_delta is None

    def active(self):
        """Lower and upper bounds of the estimated coordinates."""
        lo = np.asarray(self.lower, float)
        up = np.asarray(self.upper, float)
        if self.joint:
            return lo, up
        return lo[1:].copy(), up[1:].copy()

    def scaled_omega(self, factor: float) -> ParamBox:
        """Box with the omega bounds multiplied by ``factor``."""
        lo = list(self.lower)
        up = list(self.upper)
        lo[1] *= factor
        up[1] *= factor
        return replace(self, lower=tuple(lo), upper=tuple(up))

    def contains(self, zeta: Zeta) -> bool:
        v = zeta.to_array()
        lo, up = np.asarray(self.lower), np.asarray(self.upper)
        inner = slice(0, 5) if self.joint else slice(1, 5)
        return bool(np.all(v[inner] >= lo[inner]) and np.all(v[inner] <= up[inner]))


@dataclass(frozen=True)
class FitOptions:
    """Optimizer settings.

    ``starts`` caps the number of sub-box corners searched (``None`` uses all
    of them); the sub-box center is always searched and serves as the
    reference start.  ``x0`` adds a user start, searched last.
    """

    starts: int | None = None
    max_evals: int = 20_000
    xtol: float = 1e-9
    coarse_xtol: float = 1e-3
    step: float = 0.5
    x0: Zeta | None = None


@dataclass(frozen=True, eq=False)
class EstimationResult:
    zeta_hat: Zeta
    loss: float
    filter_out: FilterOutput
    converged: bool
    n_restarts_used: int
    regime_note: str
    n_evals: int = 0
    start_losses: tuple = field(default=(), repr=False)
    at_boundary: tuple = ()

    @property
    def theta_hat(self):
        return self.zeta_hat.theta


def _log_mean_abs_pow(path: SimPath, delta: float, m: int = 100) -> float:
    la = path.log_abs_eps[:m]
    la = la[np.isfinite(la)]
    if la.size == 0:
        return 0.0
    return float(logsumexp(delta * la) - math.log(la.size))


_ALPHA_GRID = (0.05, 0.3)
_BETA_GRID = (0.3, 0.9)
_DELTA_GRID = (0.8, 2.0)


def start_grid(path: SimPath, box: ParamBox) -> list[np.ndarray]:
    """Deterministic starting points in natural coordinates, center first.

    Volatility coefficients come from a fixed sub-box; the omega start is
    scaled by the average ``|eps|^delta`` of the first 100 observations so
    that rescaling the data rescales the starts.
    """
    lo, up = box.active()
    if box.joint:
        axes = [_DELTA_GRID, _ALPHA_GRID, _ALPHA_GRID, _BETA_GRID]
    else:
        axes = [_ALPHA_GRID, _ALPHA_GRID, _BETA_GRID]
    center = [0.5 * (a + b) for a, b in axes]
    points = [center] + [list(c) for c in itertools.product(*axes)]
    out = []
    for pt in points:
        if box.joint:
            delta, ap, am, beta = pt
        else:
            delta, (ap, am, beta) = box.fixed_delta, pt
        level = math.exp(_log_mean_abs_pow(path, delta))
        omega = level * max(1.0 - beta - 0.5 * (ap + am), 0.05)
        p = np.array([delta, omega, ap, am, beta]) if box.joint else np.array([omega, ap, am, beta])
        # keep starts strictly inside the box
        width = up - lo
        p = np.clip(p, lo + 1e-6 * width, up - 1e-6 * width)
        out.append(p)
    return out


def _to_zeta(p: np.ndarray, box: ParamBox) -> Zeta:
    if box.joint:
        return Zeta.from_array(p)
    return Zeta.from_array(np.concatenate([[box.fixed_delta], p]))


def _regime_note(result_filter: FilterOutput, zeta: Zeta) -> str:
    from garchf.stattests import gamma_and_sigma_u

    try:
        g, su = gamma_and_sigma_u(result_filter, zeta)
    except ValueError as exc:
        return f"stationarity statistic undefined ({exc})"
    tn = math.sqrt(result_filter.n) * g / su
    if tn > 1.96:
        verdict = "evidence of nonstationarity (gamma > 0); no inference on omega"
    elif tn < -1.96:
        verdict = "evidence of strict stationarity (gamma < 0)"
    else:
        verdict = "close to the stationarity boundary; no inference on omega"
    return (
        f"gamma_hat={g:.6g}, T_n={tn:.4g}: {verdict}. "
        "Boundary-case validity assumes A2 and beta below ||1/a0(eta)||_p^-1; not checked."
    )


def fit(series, box: ParamBox | None = None, options: FitOptions | None = None, *, min_length: int = MIN_LENGTH) -> EstimationResult:
    """Quasi-maximum likelihood fit of ``series`` over ``box``."""
    path = series if isinstance(series, SimPath) else SimPath.from_eps(series)
    if path.n < min_length:
        raise ValueError(f"series length {path.n} below the minimum {min_length}")
    box = box or ParamBox.default()
    options = options or FitOptions()
    lo, up = box.active()
    fixed = box.fixed_delta if box.fixed_delta is not None else 0.0

    grid = start_grid(path, box)
    center, corners = grid[0], grid[1:]
    if options.starts is not None:
        corners = corners[: options.starts]
    starts = [center] + corners
    if options.x0 is not None:
        user = options.x0.to_array()
        starts.append(user if box.joint else user[1:])

    total = 0
    candidates = []
    for idx, p0 in enumerate(starts):
        p0 = np.clip(p0, lo + 1e-9 * (up - lo), up - 1e-9 * (up - lo))
        x0 = nm.to_unbounded(p0, lo, up)
        if idx == 0:
            f_center = nm.objective(x0, lo, up, fixed, path.log_abs_eps, path.sign, path.log_abs_eps0, path.sign0)
        x, f, nev, _ = nm.run(x0, options.step, options.coarse_xtol, options.max_evals, lo, up, fixed, path)
        total += nev
        candidates.append((f, idx, x))
    start_losses = tuple(c[0] for c in candidates)

    # lowest loss wins; losses within TIE_TOL go to the lowest start index
    fbest = min(c[0] for c in candidates)
    f, idx, x = min((c for c in candidates if c[0] <= fbest + TIE_TOL), key=lambda c: c[1])

    converged = False
    for _ in range(3):
        x_new, f_new, nev, conv = nm.run(x, 0.05, options.xtol, options.max_evals, lo, up, fixed, path)
        total += nev
        improved = f_new < f - 1e-12
        if f_new <= f:
            x, f = x_new, f_new
        converged = conv
        if not improved:
            break

    p = nm.to_natural(x, lo, up)
    zeta = _to_zeta(p, box)
    out = filter_series(path, zeta, with_derivs=True, with_delta_derivs=box.joint)
    if not (f < f_center):
        converged = False
    width = up - lo
    names = NAMES if box.joint else NAMES[1:]
    at_boundary = tuple(nm_ for nm_, v, l, u, w in zip(names, p, lo, up, width) if v - l < 1e-6 * w or u - v < 1e-6 * w)
    return EstimationResult(
        zeta_hat=zeta,
        loss=out.loss,
        filter_out=out,
        converged=converged,
        n_restarts_used=len(starts),
        regime_note=_regime_note(out, zeta),
        n_evals=total,
        start_losses=start_losses,
        at_boundary=at_boundary,
    )
