"""
Command line interface::

    garchf simulate|estimate|test|power|montecarlo|lyapunov|oracle --config FILE [--key value ...]

Every key of :class:`garchf.io.RunConfig` is accepted both in the config file
and as a flag (``--alpha-plus 0.3`` or ``--alpha_plus 0.3``).  Exit codes:
0 success, 2 statistical nonconvergence, 3 I/O or configuration error.
"""

from __future__ import annotations

import argparse
from dataclasses import fields
from importlib import metadata
import math
import sys

import numpy as np
import scipy

from garchf import covariance, estimation, io, model, montecarlo, oracles, power, stattests
from garchf.innovations import QuadratureError, a0_moments, kurtosis

EXIT_OK = 0
EXIT_NONCONVERGENCE = 2
EXIT_IO = 3

COMMANDS = ("simulate", "estimate", "test", "power", "montecarlo", "lyapunov", "oracle")


class _Nonconvergence(Exception):
    pass


def _versions() -> dict:
    try:
        pkg = metadata.version("artifact")
    except metadata.PackageNotFoundError:
        pkg = "unknown"
    return {"garchf": pkg, "numpy": np.__version__, "scipy": scipy.__version__}


def _zeta(cfg: io.RunConfig):
    z = cfg.zeta
    if cfg.calibrate:
        b = model.calibrate_beta(cfg.alpha_plus, cfg.alpha_minus, cfg.delta, cfg.spec)
        z = z.make(cfg.delta, cfg.omega, cfg.alpha_plus, cfg.alpha_minus, b)
    return z


def _require(value, what):
    if not value:
        raise io.ConfigError(f"missing required option '{what}'")
    return value


def _fit(cfg: io.RunConfig):
    path = io.read_series(_require(cfg.input, "input"))
    box = estimation.ParamBox.default(cfg.regime, None if cfg.joint else cfg.delta)
    opts = estimation.FitOptions(starts=None if cfg.starts < 0 else cfg.starts)
    return estimation.fit(path, box, opts)


def _fit_report(res, level) -> dict:
    out = {
        "estimate": res.zeta_hat.as_dict(),
        "loss": res.loss,
        "converged": res.converged,
        "n_restarts_used": res.n_restarts_used,
        "n_evals": res.n_evals,
        "at_boundary": list(res.at_boundary),
        "regime_note": res.regime_note,
        "n": res.filter_out.n,
    }
    try:
        out["covariance"] = covariance.covariance_report(res, 1 - level).as_dict()
    except (covariance.SingularInformationError, ValueError) as exc:
        out["covariance"] = {"error": str(exc)}
    return out


def cmd_simulate(cfg: io.RunConfig) -> dict:
    """Simulate a path and write it as CSV."""
    z = _zeta(cfg)
    path = model.simulate(z, cfg.spec, cfg.n, cfg.seed, eps0=cfg.eps0)
    io.write_series(_require(cfg.output, "output"), path)
    g0 = a0_moments(cfg.spec, z.theta, z.delta).gamma0
    print(f"simulated n={cfg.n} from {cfg.spec} zeta={z.as_dict()}; gamma0 (quadrature) = {g0:.10g}", file=sys.stderr)
    return {"output": cfg.output, "zeta": z.as_dict(), "gamma0": g0}


def cmd_estimate(cfg: io.RunConfig) -> dict:
    """Fit the model to a CSV series."""
    res = _fit(cfg)
    rep = _fit_report(res, cfg.level)
    if not res.converged:
        raise _Nonconvergence(rep)
    return rep


def cmd_test(cfg: io.RunConfig) -> dict:
    """Fit, then run a stationarity or symmetry test."""
    res = _fit(cfg)
    rep = _fit_report(res, cfg.level)
    which = cfg.which.lower()
    try:
        if which in ("stationarity-st", "stationarity-ns"):
            t = stattests.stationarity_test(res.filter_out, res.zeta_hat, which[-2:].upper(), cfg.level)
        elif which == "symmetry":
            cov = covariance.covariance_report(res, 1 - cfg.level)
            t = stattests.symmetry_test(cov, res.zeta_hat, cfg.level)
        else:
            raise io.ConfigError(f"unknown test {cfg.which!r}")
        rep["test"] = t.as_dict()
    except (stattests.DegenerateStatisticError, covariance.SingularInformationError) as exc:
        rep["test"] = {"error": str(exc)}
        raise _Nonconvergence(rep) from None
    if not res.converged:
        raise _Nonconvergence(rep)
    return rep


def cmd_power(cfg: io.RunConfig) -> dict:
    """Tabulate local power of the symmetry test and its envelope."""
    z = _zeta(cfg)
    info = oracles.information_matrix_I(z.theta, z.delta, cfg.spec, cfg.m, cfg.seed, cfg.truncation)
    curve = power.power_curve(cfg.spec, info, cfg.contrasts, cfg.level)
    io.write_table(_require(cfg.output, "output"), ("contrast", "power_test", "power_bound"), curve.rows())
    rep = {"zeta": z.as_dict(), "I": info, "curve": cfg.output}
    if any(cfg.tau):
        alt = power.LocalAlternative(cfg.tau, z.theta, z.delta, cfg.spec)
        try:
            rep["c_f"] = power.c_f(alt)
            rep["power_ST"] = power.stationarity_local_power(alt, "ST", cfg.level)
            rep["power_NS"] = power.stationarity_local_power(alt, "NS", cfg.level)
        except power.DegenerateAlternativeError as exc:
            rep["c_f"] = str(exc)
        rep["power_symmetry"] = power.symmetry_local_power(cfg.tau, power.sigma_ts(info, kurtosis(cfg.spec)), cfg.level)
    return rep


def cmd_montecarlo(cfg: io.RunConfig) -> dict:
    """Run a size/power/coverage experiment."""
    z = _zeta(cfg)
    sc = montecarlo.Scenario(cfg.name, z, cfg.spec, cfg.n, cfg.tau, cfg.joint, cfg.regime, cfg.level,
                             None if cfg.starts < 0 else cfg.starts)
    res = montecarlo.run_scenario(sc, cfg.replications, cfg.seed)
    rows = res.table()
    io.write_table(_require(cfg.output, "output"), montecarlo.TABLE_HEADER, rows)
    return {"table": cfg.output, "rows": [dict(zip(montecarlo.TABLE_HEADER, r)) for r in rows]}


def cmd_lyapunov(cfg: io.RunConfig) -> dict:
    """Top Lyapunov exponent by quadrature or simulation."""
    z = _zeta(cfg)
    if cfg.method == "montecarlo":
        g, se = model.lyapunov_exponent(z.theta, z.delta, cfg.spec, "montecarlo", m=cfg.m, seed=cfg.seed, return_se=True)
        return {"method": "montecarlo", "gamma0": g, "se": se, "m": cfg.m}
    mom = a0_moments(cfg.spec, z.theta, z.delta)
    return {"method": "quadrature", "gamma0": mom.gamma0, "sigma_u": mom.sigma_u,
            "nu_plus": mom.nu_plus, "nu_minus": mom.nu_minus, "nu1": mom.nu1}


def cmd_oracle(cfg: io.RunConfig) -> dict:
    """Population oracles: information matrix, d_t, v_t."""
    z = _zeta(cfg)
    q = cfg.quantity
    if q == "I":
        return {"I": oracles.information_matrix_I(z.theta, z.delta, cfg.spec, cfg.m, cfg.seed, cfg.truncation)}
    if q == "dt":
        d = oracles.sample_dt(z.theta, z.delta, cfg.spec, cfg.truncation, cfg.seed, cfg.m)
        return {"mean": d.matrix().mean(axis=0), "truncation": d.truncation, "tail": d.tail}
    if q == "vt":
        vt = cfg.vartheta or tuple(z.theta.vartheta)
        if len(vt) != 3:
            raise io.ConfigError("vartheta needs 3 entries")
        v = oracles.sample_vt(vt, z.theta, z.delta, cfg.spec, cfg.truncation, cfg.seed, cfg.m)
        return {"vartheta": vt, "mean": float(v.mean()), "se": float(v.std() / math.sqrt(v.size))}
    raise io.ConfigError(f"unknown oracle quantity {q!r}")


HANDLERS = {
    "simulate": cmd_simulate,
    "estimate": cmd_estimate,
    "test": cmd_test,
    "power": cmd_power,
    "montecarlo": cmd_montecarlo,
    "lyapunov": cmd_lyapunov,
    "oracle": cmd_oracle,
}


class _Parser(argparse.ArgumentParser):
    """Argument errors are configuration errors (exit code 3)."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_IO, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", help="key = value configuration file")
    for f in fields(io.RunConfig):
        flags = [f"--{f.name.replace('_', '-')}"]
        if "_" in f.name:
            flags.append(f"--{f.name}")
        common.add_argument(*flags, dest=f.name, default=None, metavar="VALUE", help=f.metadata.get("help"))
    parser = _Parser(prog="garchf", description="Asymmetric power GARCH(1,1) toolkit")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=HANDLERS[name].__doc__)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # --help or a usage error
        return int(exc.code or 0)
    overrides = {f.name: getattr(args, f.name) for f in fields(io.RunConfig)}
    try:
        cfg = io.load_config(args.config, overrides)
    except io.ConfigError as exc:
        print(f"garchf: {exc}", file=sys.stderr)
        return EXIT_IO
    code = EXIT_OK
    try:
        body = HANDLERS[args.command](cfg)
    except _Nonconvergence as exc:
        body, code = exc.args[0], EXIT_NONCONVERGENCE
        print("garchf: optimizer or statistic did not converge", file=sys.stderr)
    except montecarlo.MonteCarloError as exc:
        print(f"garchf: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except (io.ConfigError, OSError) as exc:
        print(f"garchf: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, QuadratureError, oracles.DivergentSeriesError) as exc:
        print(f"garchf: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_IO
    report = {"command": args.command, "config": cfg.as_dict(), "seed": cfg.seed,
              "versions": _versions(), "result": body}
    try:
        io.write_json(cfg.report or None, report)
    except OSError as exc:
        print(f"garchf: {exc}", file=sys.stderr)
        return EXIT_IO
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
