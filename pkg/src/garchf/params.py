"""Parameter containers for the asymmetric power GARCH(1,1) model."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ParamVector:
    """Volatility coefficients ``(omega, alpha_plus, alpha_minus, beta)``.

    ``omega`` must be strictly positive, the remaining coefficients
    nonnegative.
    """

    omega: float
    alpha_plus: float
    alpha_minus: float
    beta: float

    def __post_init__(self) -> None:
        vals = (self.omega, self.alpha_plus, self.alpha_minus, self.beta)
        if not all(np.isfinite(v) for v in vals):
            raise ValueError(f"non-finite parameter in {vals}")
        if self.omega <= 0:
            raise ValueError(f"omega must be > 0, got {self.omega}")
        if min(self.alpha_plus, self.alpha_minus, self.beta) < 0:
            raise ValueError(f"alpha_plus, alpha_minus, beta must be >= 0, got {vals}")

    @classmethod
    def from_array(cls, x) -> ParamVector:
        x = np.asarray(x, dtype=float)
        return cls(float(x[0]), float(x[1]), float(x[2]), float(x[3]))

    def to_array(self) -> np.ndarray:
        return np.array([self.omega, self.alpha_plus, self.alpha_minus, self.beta])

    @property
    def vartheta(self) -> np.ndarray:
        """The identifiable sub-vector ``(alpha_plus, alpha_minus, beta)``."""
        return np.array([self.alpha_plus, self.alpha_minus, self.beta])

    def shifted(self, tau, n: int) -> ParamVector:
        """Local alternative ``theta + tau / sqrt(n)``."""
        return ParamVector.from_array(self.to_array() + np.asarray(tau, float) / np.sqrt(n))


@dataclass(frozen=True)
class Zeta:
    """Power ``delta`` together with the coefficient vector."""

    delta: float
    theta: ParamVector

    def __post_init__(self) -> None:
        if not (np.isfinite(self.delta) and self.delta > 0):
            raise ValueError(f"delta must be > 0, got {self.delta}")

    @classmethod
    def make(cls, delta, omega, alpha_plus, alpha_minus, beta) -> Zeta:
        return cls(float(delta), ParamVector(omega, alpha_plus, alpha_minus, beta))

    @classmethod
    def from_array(cls, x) -> Zeta:
        """Build from ``(delta, omega, alpha_plus, alpha_minus, beta)``."""
        x = np.asarray(x, dtype=float)
        return cls(float(x[0]), ParamVector.from_array(x[1:5]))

    def to_array(self) -> np.ndarray:
        return np.concatenate([[self.delta], self.theta.to_array()])

    def as_dict(self) -> dict:
        t = self.theta
        return {
            "delta": self.delta,
            "omega": t.omega,
            "alpha_plus": t.alpha_plus,
            "alpha_minus": t.alpha_minus,
            "beta": t.beta,
        }
