import numpy as np
import pytest

from garchf import estimation, model
from garchf.innovations import InnovationSpec
from garchf.params import ParamVector, Zeta

GAUSS = InnovationSpec.gaussian()
EXPLOSIVE = Zeta.make(1.0, 1.0, 0.2, 0.2, 0.9)
STATIONARY = Zeta.make(1.0, 0.1, 0.05, 0.15, 0.8)


@pytest.fixture(scope="session")
def gauss():
    return GAUSS


@pytest.fixture(scope="session")
def explosive_path():
    return model.simulate(EXPLOSIVE, GAUSS, 5000, seed=20240)


@pytest.fixture(scope="session")
def stationary_path():
    return model.simulate(STATIONARY, GAUSS, 20000, seed=20241)


@pytest.fixture(scope="session")
def explosive_fit(explosive_path):
    return estimation.fit(explosive_path, estimation.ParamBox.default("any"))


@pytest.fixture(scope="session")
def stationary_fit(stationary_path):
    return estimation.fit(stationary_path, estimation.ParamBox.default("stationary"))


@pytest.fixture(scope="session")
def boundary_zeta():
    b = model.calibrate_beta(0.2, 0.2, 1.0, GAUSS)
    return Zeta.make(1.0, 1.0, 0.2, 0.2, b)


def random_theta(rng, explosive=False):
    ap, am = rng.uniform(0.03, 0.4, 2)
    beta = rng.uniform(0.85, 0.95) if explosive else rng.uniform(0.3, 0.7)
    return ParamVector(float(rng.uniform(0.05, 1.0)), float(ap), float(am), float(beta))


def max_rel_err(a, b, floor=1e-12):
    a, b = np.asarray(a, float), np.asarray(b, float)
    return float(np.max(np.abs(a - b) / np.maximum(np.abs(b), floor)))


# one line per acceptance criterion, printed at the end of the session
ACCEPTANCE_LINES = {}


def record_criterion(key, passed, detail):
    line = f"{'PASS' if passed else 'FAIL'}  {key}: {detail}"
    ACCEPTANCE_LINES[key] = line
    print(line)
    return passed


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES, key=lambda k: (not k.startswith("criterion"), int(k.split()[1]) if k.startswith("criterion") else 0, k)):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
