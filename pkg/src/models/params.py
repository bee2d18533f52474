"""Model parameter and state models."""

import math
from typing import Iterable

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator


class ModelParams(BaseModel):
    """Dimensionless parameters of the three-species model."""

    model_config = ConfigDict(frozen=True)

    beta1: float = Field(default=0.1923, gt=0.0, lt=1.0, description="Half-saturation of the first predator")
    beta2: float = Field(default=0.6, gt=0.0, lt=1.0, description="Half-saturation of the second predator")
    c: float = Field(default=0.4, gt=0.0, lt=1.0, description="Death rate of the first predator")
    d: float = Field(default=0.21, gt=0.0, lt=1.0, description="Death rate of the second predator")
    a12: float = Field(default=0.5, gt=0.0, lt=1.0, description="Interference of the second predator on the first")
    a21: float = Field(default=0.1, gt=0.0, lt=1.0, description="Interference of the first predator on the second")
    h: float = Field(default=0.2649, ge=0.0, description="Intraspecific competition of the second predator")
    zeta: float = Field(default=0.01, gt=0.0, description="Timescale ratio between prey and predators")

    @field_validator("*")
    @classmethod
    def _finite(cls, v: float) -> float:
        if not math.isfinite(v):
            raise ValueError("parameters must be finite")
        return v

    def with_h(self, h: float) -> "ModelParams":
        """Copy with a different intraspecific competition value."""
        return ModelParams(**{**self.model_dump(), "h": h})


class State(BaseModel):
    """Population densities (x prey, y and z predators)."""

    model_config = ConfigDict(frozen=True)

    x: float = Field(..., ge=0.0, description="Prey density")
    y: float = Field(..., ge=0.0, description="First predator density")
    z: float = Field(..., ge=0.0, description="Second predator density")

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)

    @classmethod
    def from_array(cls, values: Iterable[float]) -> "State":
        x, y, z = (float(v) for v in values)
        # round-off below zero on an invariant plane
        return cls(x=max(x, 0.0), y=max(y, 0.0), z=max(z, 0.0))
