"""
Monte Carlo experiments: size, power and coverage of the estimators and
tests.

Replication ``r`` simulates from the stream ``split(seed, r)``, fits the
model and records estimates, standard errors, test statistics and decisions.
Records are collected by replication index, so the aggregated table does not
depend on execution order or on the number of worker processes
(``GARCHF_THREADS``).
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
import math
import os

import numpy as np

from garchf import covariance, estimation, stattests
from garchf.innovations import InnovationSpec
from garchf.model import simulate
from garchf.params import Zeta
from garchf.rng import split

__all__ = [
    "MonteCarloError",
    "MonteCarloResult",
    "Scenario",
    "n_workers",
    "run_replication",
    "run_scenario",
]

MAX_ERROR_RATE = 0.01


class MonteCarloError(RuntimeError):
    pass


@dataclass(frozen=True)
class Scenario:
    """One data-generating process and fitting setup.

    The data are simulated at ``theta0 + tau / sqrt(n)``; coverage is
    measured against that simulated truth.
    """

    name: str
    zeta0: Zeta
    spec: InnovationSpec
    n: int
    tau: tuple = (0.0, 0.0, 0.0, 0.0)
    joint: bool = False
    regime: str = "any"
    level: float = 0.05
    starts: int | None = None

    def truth(self) -> Zeta:
        return Zeta(self.zeta0.delta, self.zeta0.theta.shifted(self.tau, self.n))

    def box(self) -> estimation.ParamBox:
        return estimation.ParamBox.default(self.regime, None if self.joint else self.zeta0.delta)


COVERED = ("alpha_plus", "alpha_minus", "beta", "delta")


def run_replication(scenario: Scenario, seed, r: int) -> dict:
    """Fit one simulated path; never raises (errors are recorded)."""
    truth = scenario.truth()
    rec = {"r": r, "error": ""}
    try:
        path = simulate(truth, scenario.spec, scenario.n, split(seed, r))
        res = estimation.fit(path, scenario.box(), estimation.FitOptions(starts=scenario.starts))
        rec["converged"] = res.converged
        est = res.zeta_hat.as_dict()
        for k, v in est.items():
            rec[f"hat_{k}"] = v
        st = stattests.stationarity_test(res.filter_out, res.zeta_hat, "ST", scenario.level)
        ns = stattests._stationarity_report(st.statistic, "NS", scenario.level)
        rec.update(T_n=st.statistic, gamma_hat=st.gamma_hat, sigma_u_hat=st.sigma_u_hat,
                   reject_ST=st.reject, reject_NS=ns.reject, p_ST=st.pvalue)
        cov = covariance.covariance_report(res, 1 - scenario.level)
        sym = stattests.symmetry_test(cov, res.zeta_hat, scenario.level)
        rec.update(T_S=sym.statistic, reject_S=sym.reject, kappa_hat=cov.kappa_hat)
        tv = truth.as_dict()
        for nm in cov.names:
            lo, hi = cov.ci[nm]
            rec[f"se_{nm}"] = cov.se[nm]
            rec[f"z_{nm}"] = (est[nm] - tv[nm]) / cov.se[nm]
            rec[f"cover_{nm}"] = bool(lo <= tv[nm] <= hi)
    except Exception as exc:  # recorded, counted against the error budget
        rec["error"] = f"{type(exc).__name__}: {exc}"
    return rec


def n_workers() -> int:
    raw = os.environ.get("GARCHF_THREADS", "")
    if raw.strip():
        try:
            k = int(raw)
        except ValueError:
            raise MonteCarloError(f"GARCHF_THREADS must be an integer, got {raw!r}") from None
        return max(1, k)
    return max(1, os.cpu_count() or 1)


def _rep_star(args):
    return run_replication(*args)


@dataclass(frozen=True, eq=False)
class MonteCarloResult:
    scenario: Scenario
    records: list = field(repr=False)

    @property
    def replications(self) -> int:
        return len(self.records)

    @property
    def ok(self) -> list:
        return [r for r in self.records if not r["error"]]

    @property
    def n_errors(self) -> int:
        return len(self.records) - len(self.ok)

    def column(self, key) -> np.ndarray:
        return np.array([r[key] for r in self.ok if key in r], dtype=float)

    def rate(self, key):
        """Proportion of successful replications where ``key`` is true, with its binomial SE."""
        x = self.column(key)
        if x.size == 0:
            return math.nan, math.nan, 0
        p = float(x.mean())
        return p, math.sqrt(p * (1 - p) / x.size), int(x.sum())

    def table(self) -> list:
        """Rows ``(scenario, metric, count, used, rate, se)``."""
        rows = [(self.scenario.name, "errors", self.n_errors, self.replications,
                 self.n_errors / self.replications, math.nan)]
        keys = ["converged", "reject_ST", "reject_NS", "reject_S"] + [f"cover_{k}" for k in COVERED]
        for k in keys:
            x = self.column(k)
            if x.size == 0:
                continue
            p, se, c = self.rate(k)
            rows.append((self.scenario.name, k, c, x.size, p, se))
        return rows


TABLE_HEADER = ("scenario", "metric", "count", "used", "rate", "se")


def run_scenario(scenario: Scenario, replications: int, seed=0, *, workers: int | None = None,
                 order=None, max_error_rate: float = MAX_ERROR_RATE) -> MonteCarloResult:
    """Run ``replications`` replications of ``scenario``.

    ``order`` permutes the execution order (for testing order independence).
    Raises :class:`MonteCarloError` if more than ``max_error_rate`` of the
    replications fail.
    """
    if replications < 1:
        raise ValueError("replications must be >= 1")
    idx = list(range(replications)) if order is None else [int(i) for i in order]
    if sorted(idx) != list(range(replications)):
        raise ValueError("order must be a permutation of range(replications)")
    workers = workers or n_workers()
    jobs = [(scenario, seed, r) for r in idx]
    if workers == 1 or replications == 1:
        recs = [_rep_star(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            recs = list(ex.map(_rep_star, jobs, chunksize=max(1, replications // (4 * workers))))
    recs.sort(key=lambda d: d["r"])
    res = MonteCarloResult(scenario, recs)
    if res.n_errors > max_error_rate * replications:
        first = next(r["error"] for r in recs if r["error"])
        raise MonteCarloError(f"{res.n_errors}/{replications} replications failed; first: {first}")
    return res
