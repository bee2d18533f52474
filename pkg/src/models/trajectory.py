"""Integrator configuration, trajectory and attractor-verdict models."""

from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .enums import AttractorKind, CoordinateSystem, TerminationEvent, TimeUnit

_CHANNELS = {
    CoordinateSystem.XYZ: ("x", "y", "z"),
    CoordinateSystem.UVW: ("u", "v", "w"),
}


class IntegratorConfig(BaseModel):
    """Settings of one adaptive integration."""

    model_config = ConfigDict(frozen=True)

    rtol: float = Field(default=1e-8, gt=0.0)
    atol: float = Field(default=1e-10, gt=0.0)
    max_step: float = Field(default=0.05, gt=0.0)
    t_final: float = Field(default=500.0, gt=0.0)
    method: str = Field(default="RK45", description="Embedded Runge-Kutta pair")
    dense_output: bool = True
    events: Optional[List[TerminationEvent]] = Field(default=None, description="Active events; all applicable ones when None")
    extinction_floor: float = Field(default=1e-6, gt=0.0, description="y level that ends an xyz run")
    divergence_floor: float = Field(default=-5.0, lt=0.0, description="w level that ends a uvw run")
    sample_step: Optional[float] = Field(default=None, gt=0.0, description="Uniform output spacing; solver steps when None")

    @field_validator("method")
    @classmethod
    def _explicit_pair(cls, v: str) -> str:
        if v not in {"RK45", "DOP853", "RK23"}:
            raise ValueError(f"Unsupported integration method: {v}")
        return v


class Trajectory(BaseModel):
    """Time-stamped states with integrator metadata. Arrays are read-only."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    t: np.ndarray
    states: np.ndarray = Field(..., description="Shape (n, 3)")
    coordinates: CoordinateSystem
    time_unit: TimeUnit
    nfev: int = 0
    n_steps: int = 0
    status: int = 0
    message: str = ""
    event_times: Dict[str, List[float]] = Field(default_factory=dict)
    terminated_by: Optional[TerminationEvent] = None
    sol: Optional[Any] = Field(default=None, exclude=True, description="Dense-output interpolant")

    @model_validator(mode="after")
    def _check_arrays(self) -> "Trajectory":
        t = np.array(self.t, dtype=float)
        states = np.array(self.states, dtype=float)
        if t.ndim != 1 or states.shape != (t.size, 3):
            raise ValueError("states must have shape (len(t), 3)")
        if t.size > 1 and np.any(np.diff(t) <= 0):
            raise ValueError("time grid must be strictly increasing")
        if not np.all(np.isfinite(states)):
            raise ValueError("states must be finite")
        t.setflags(write=False)
        states.setflags(write=False)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "states", states)
        return self

    @property
    def channel_names(self):
        return _CHANNELS[self.coordinates]

    @property
    def span(self) -> float:
        return float(self.t[-1] - self.t[0])

    def _column(self, name: str) -> int:
        try:
            return self.channel_names.index(name)
        except ValueError:
            raise KeyError(f"Channel '{name}' not in {self.coordinates.value} trajectory") from None

    def channel(self, name: str) -> np.ndarray:
        """Samples of a coordinate; a trailing '2' squares it (e.g. 'u2')."""
        if name.endswith("2"):
            values = self.states[:, self._column(name[:-1])]
            return values * values
        return self.states[:, self._column(name)]

    def evaluate(self, times: np.ndarray, name: Optional[str] = None) -> np.ndarray:
        """States (or one channel) at arbitrary times via dense output, else linear interpolation."""
        times = np.asarray(times, dtype=float)
        if self.sol is not None:
            values = np.asarray(self.sol(times)).T
        else:
            values = np.column_stack([np.interp(times, self.t, self.states[:, j]) for j in range(3)])
        if name is None:
            return values
        if name.endswith("2"):
            column = values[:, self._column(name[:-1])]
            return column * column
        return values[:, self._column(name)]

    def final_state(self) -> np.ndarray:
        return np.array(self.states[-1])

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame(self.states, columns=list(self.channel_names))
        frame.insert(0, self.time_unit.value if self.time_unit == TimeUnit.TAU else "t", self.t)
        return frame


class AttractorVerdict(BaseModel):
    """Asymptotic fate of a trajectory with the numbers that decided it."""

    model_config = ConfigDict(frozen=True)

    kind: AttractorKind
    decision_time: Optional[float] = None
    evidence: Dict[str, float] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _evidence_required(self) -> "AttractorVerdict":
        if self.kind != AttractorKind.UNDECIDED and not self.evidence:
            raise ValueError("a decided verdict needs evidence")
        return self
