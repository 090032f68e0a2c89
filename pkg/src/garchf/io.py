"""
Files in and out: series CSV, key-value configuration and JSON reports.

Series CSV columns are ``t,eps,log_abs_eps,sign,log_h``; on input only
``eps`` is required, and ``log_abs_eps``/``sign`` take precedence when
present (they survive overflow of ``eps``).  Numbers are written with 12
significant digits so that files diff cleanly.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field, fields
import json
import math
from pathlib import Path

import numpy as np

from garchf.innovations import InnovationSpec
from garchf.model import SimPath
from garchf.params import Zeta

__all__ = [
    "ConfigError",
    "RunConfig",
    "fmt",
    "load_config",
    "read_series",
    "write_json",
    "write_series",
    "write_table",
]


class ConfigError(ValueError):
    """Invalid or unreadable configuration or input file."""


def fmt(x) -> str:
    """12 significant digits; integers and strings pass through."""
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return f"{x:.12g}"
    return str(x)


def write_series(path, series: SimPath) -> None:
    p = Path(path)
    log_h = series.log_h if series.log_h is not None else np.full(series.n, np.nan)
    with p.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", "eps", "log_abs_eps", "sign", "log_h"])
        for t, (e, la, s, lh) in enumerate(zip(series.eps, series.log_abs_eps, series.sign, log_h), start=1):
            w.writerow([t, fmt(e), fmt(la), fmt(s), fmt(lh)])


def read_series(path) -> SimPath:
    p = Path(path)
    try:
        with p.open(newline="") as fh:
            rows = list(csv.DictReader(fh))
    except OSError as exc:
        raise ConfigError(f"cannot read {p}: {exc}") from exc
    if not rows:
        raise ConfigError(f"{p}: no data rows")
    cols = rows[0].keys()
    try:
        if "log_abs_eps" in cols and "sign" in cols:
            la = np.array([float(r["log_abs_eps"]) for r in rows])
            sg = np.array([float(r["sign"]) for r in rows])
            return SimPath(la, sg)
        if "eps" not in cols:
            raise ConfigError(f"{p}: needs an 'eps' column")
        eps = np.array([float(r["eps"]) for r in rows])
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{p}: malformed number ({exc})") from exc
    if not np.all(np.isfinite(eps)):
        raise ConfigError(f"{p}: non-finite eps")
    return SimPath.from_eps(eps)


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, (np.bool_, bool)):
        return bool(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else str(x)
    return x


def write_json(path, report: dict) -> None:
    text = json.dumps(_jsonable(report), indent=2, sort_keys=True)
    if path is None or str(path) == "-":
        print(text)
    else:
        Path(path).write_text(text + "\n")


def write_table(path, header, rows) -> None:
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([fmt(v) for v in r])


def _floats(text: str) -> tuple:
    return tuple(float(v) for v in text.replace(",", " ").split())


def _bool(text: str) -> bool:
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


@dataclass
class RunConfig:
    """Every option the command line understands.

    Values come from a ``key = value`` file (``#`` starts a comment) and are
    then overridden by ``--key value`` flags.
    """

    dist: str = field(default="gaussian", metadata={"help": "gaussian | student:NU | gammapower:A"})
    delta: float = 1.0
    omega: float = 1.0
    alpha_plus: float = 0.2
    alpha_minus: float = 0.2
    beta: float = 0.9
    n: int = 1000
    seed: int = 0
    eps0: float = 0.0
    input: str = ""
    output: str = ""
    report: str = ""
    level: float = 0.05
    joint: bool = False
    regime: str = field(default="any", metadata={"help": "parameter box: stationary | any"})
    starts: int = -1
    which: str = field(default="symmetry", metadata={"help": "stationarity-st | stationarity-ns | symmetry"})
    tau: tuple = (0.0, 0.0, 0.0, 0.0)
    contrasts: tuple = (0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 5.0)
    replications: int = 100
    name: str = "custom"
    method: str = field(default="quadrature", metadata={"help": "quadrature | montecarlo"})
    m: int = 100_000
    truncation: int = 400
    quantity: str = field(default="I", metadata={"help": "I | dt | vt"})
    vartheta: tuple = ()
    calibrate: bool = field(default=False, metadata={"help": "set beta so that gamma0 = 0"})

    _CONVERTERS = {float: float, int: int, str: str, bool: _bool, tuple: _floats}

    @classmethod
    def keys(cls):
        return [f for f in fields(cls)]

    @classmethod
    def convert(cls, key: str, text):
        ftypes = {f.name: f.type for f in fields(cls)}
        if key not in ftypes:
            raise ConfigError(f"unknown configuration key {key!r}")
        kind = {"float": float, "int": int, "str": str, "bool": bool, "tuple": tuple}[ftypes[key]]
        try:
            return cls._CONVERTERS[kind](text)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad value for {key}: {text!r} ({exc})") from None

    def validate(self) -> RunConfig:
        try:
            self.spec
            self.zeta
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        if not 0 < self.level < 1:
            raise ConfigError("level must lie in (0, 1)")
        if self.replications < 1:
            raise ConfigError("replications must be >= 1")
        if self.n < 1:
            raise ConfigError("n must be >= 1")
        if len(self.tau) != 4:
            raise ConfigError("tau needs 4 entries")
        if self.regime not in ("stationary", "any"):
            raise ConfigError("regime must be 'stationary' or 'any'")
        return self

    @property
    def spec(self) -> InnovationSpec:
        return InnovationSpec.parse(self.dist)

    @property
    def zeta(self) -> Zeta:
        return Zeta.make(self.delta, self.omega, self.alpha_plus, self.alpha_minus, self.beta)

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def parse_config_text(text: str, origin: str = "<config>") -> dict:
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{origin}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        out[key] = RunConfig.convert(key, value)
    return out


def load_config(path=None, overrides: dict | None = None) -> RunConfig:
    """Config file values overridden by ``overrides`` (already-typed or text)."""
    values = {}
    if path:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        values.update(parse_config_text(text, str(path)))
    for k, v in (overrides or {}).items():
        if v is None:
            continue
        values[k] = RunConfig.convert(k, v) if isinstance(v, str) else v
    return RunConfig(**values).validate()
