"""Asymmetric power GARCH(1,1): simulation, QML estimation, universal inference and local power."""

from garchf.params import ParamVector, Zeta
from garchf.innovations import InnovationSpec
from garchf.model import SimPath, simulate, lyapunov_exponent, calibrate_beta
from garchf.estimation import ParamBox, FitOptions, fit
from garchf.covariance import covariance_report
from garchf.stattests import stationarity_test, symmetry_test

__all__ = [
    "FitOptions",
    "InnovationSpec",
    "ParamBox",
    "ParamVector",
    "SimPath",
    "Zeta",
    "calibrate_beta",
    "covariance_report",
    "fit",
    "lyapunov_exponent",
    "simulate",
    "stationarity_test",
    "symmetry_test",
]
