"""Time-series analytics models: peaks, moving averages and envelope fits."""

import math
from typing import Dict, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .enums import TimeUnit

ArrayLike = Union[float, np.ndarray]


class PeakSequence(BaseModel):
    """Local maxima of a channel, truncated at the longest decreasing prefix."""

    model_config = ConfigDict(frozen=True)

    times: Tuple[float, ...]
    values: Tuple[float, ...]
    n_detected: int = Field(..., ge=0, description="Maxima found before truncation")

    @model_validator(mode="after")
    def _check(self) -> "PeakSequence":
        if len(self.times) != len(self.values):
            raise ValueError("times and values must have equal length")
        if any(b <= a for a, b in zip(self.times, self.times[1:])):
            raise ValueError("peak times must be strictly increasing")
        return self

    @property
    def n(self) -> int:
        return len(self.times)

    @property
    def period(self) -> float:
        """Mean spacing of successive peaks."""
        if self.n < 2:
            raise ValueError("period needs at least two peaks")
        return (self.times[-1] - self.times[0]) / (self.n - 1)

    def head(self, count: int) -> "PeakSequence":
        """The first ``count`` peaks."""
        count = min(count, self.n)
        return PeakSequence(times=self.times[:count], values=self.values[:count], n_detected=self.n_detected)


class MovingAverage(BaseModel):
    """Windowed mean gbar(tau) = (1/l) * integral of g over [tau, tau + l]."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    window: float = Field(..., gt=0.0)
    channel: str
    tau: np.ndarray
    values: np.ndarray

    def at(self, tau: ArrayLike) -> ArrayLike:
        """Linear interpolation of the averaged samples."""
        if np.any(np.asarray(tau) > self.tau[-1] + 1e-12) or np.any(np.asarray(tau) < self.tau[0] - 1e-12):
            raise ValueError("moving average requested outside its support")
        return np.interp(tau, self.tau, self.values)

    def restrict(self, t0: float, t1: float) -> Tuple[np.ndarray, np.ndarray]:
        mask = (self.tau >= t0 - 1e-12) & (self.tau <= t1 + 1e-12)
        return self.tau[mask], self.values[mask]


class ExpFit(BaseModel):
    """Exponential envelope k1 * exp(k2 * (tau - t_ref)) fitted on an interval."""

    model_config = ConfigDict(frozen=True)

    k1: float = Field(..., gt=0.0)
    k2: float
    t0: float
    t1: float
    t_ref: float
    residual: float = Field(..., ge=0.0, description="RMS of the retained fit")
    refined: bool = False
    time_unit: TimeUnit = TimeUnit.TAU
    gamma1: Optional[float] = None
    gamma2: Optional[float] = None

    @property
    def amplitude(self) -> float:
        return self.k1

    @property
    def rate(self) -> float:
        return self.k2

    def evaluate(self, tau: ArrayLike) -> ArrayLike:
        return self.k1 * np.exp(self.k2 * (np.asarray(tau, dtype=float) - self.t_ref))

    def to_export_dict(self) -> Dict[str, object]:
        return {
            "interval": [self.t0, self.t1],
            "k1": self.k1,
            "k2": self.k2,
            "residual": self.residual,
            "time_unit": self.time_unit.value,
        }

    def in_slow_time(self, delta: float) -> "ExpFit":
        """The same envelope expressed in slow time s = delta * tau."""
        if self.time_unit == TimeUnit.SLOW:
            return self
        return self.model_copy(update={
            "k2": self.k2 / delta,
            "t0": self.t0 * delta,
            "t1": self.t1 * delta,
            "t_ref": self.t_ref * delta,
            "time_unit": TimeUnit.SLOW,
        })


class BCoefficients(BaseModel):
    """Constants of the averaged system used by the bistability classifier."""

    model_config = ConfigDict(frozen=True)

    A: float = Field(..., ge=0.0)
    theta: float = Field(..., gt=0.0)
    b1: float = Field(..., gt=0.0)
    b2: float = Field(..., lt=0.0)
    B: float
    c2: float
    period: float = Field(..., gt=0.0)

    @property
    def amplitude(self) -> float:
        return self.b1

    @property
    def rate(self) -> float:
        return self.b2


class BaseCurve(BaseModel):
    """Closed-form solution of wbar' = delta*H3*wbar + (delta/2)*H11*amp*exp(rate*(tau - tau1))."""

    model_config = ConfigDict(frozen=True)

    wbar_tau1: float
    tau1: float
    amplitude: float
    rate: float
    delta: float
    H3: float
    H11: float

    @property
    def forced_coefficient(self) -> float:
        """delta*H11*amp / (2*(rate - delta*H3)); also the critical level at tau1."""
        return self.delta * self.H11 * self.amplitude / (2.0 * (self.rate - self.delta * self.H3))

    def __call__(self, tau: ArrayLike) -> ArrayLike:
        s = np.asarray(tau, dtype=float) - self.tau1
        c = self.forced_coefficient
        return (self.wbar_tau1 - c) * np.exp(self.delta * self.H3 * s) + c * np.exp(self.rate * s)

    def derivative(self, tau: ArrayLike) -> ArrayLike:
        s = np.asarray(tau, dtype=float) - self.tau1
        c = self.forced_coefficient
        dh = self.delta * self.H3
        return dh * (self.wbar_tau1 - c) * np.exp(dh * s) + c * self.rate * np.exp(self.rate * s)

    def forcing(self, tau: ArrayLike) -> ArrayLike:
        """Base envelope of u-squared driving the curve."""
        return self.amplitude * np.exp(self.rate * (np.asarray(tau, dtype=float) - self.tau1))

    def ode_residual(self, tau: ArrayLike) -> ArrayLike:
        return (self.derivative(tau) - self.delta * self.H3 * self(tau)
                - 0.5 * self.delta * self.H11 * self.forcing(tau))


def time_to_slow(tau: ArrayLike, delta: float) -> ArrayLike:
    """Slow time s = delta * tau."""
    return np.asarray(tau) * delta if isinstance(tau, np.ndarray) else tau * delta


def slow_to_time(s: ArrayLike, delta: float) -> ArrayLike:
    """Normal-form time tau = s / delta."""
    if delta <= 0 or not math.isfinite(delta):
        raise ValueError("delta must be positive")
    return np.asarray(s) / delta if isinstance(s, np.ndarray) else s / delta
