"""Equilibrium and structural-condition models."""

from typing import Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field

from .enums import ConditionStatus, EquilibriumKind, StabilityTag
from .params import State


class Eigenvalue(BaseModel):
    """A complex eigenvalue stored as real and imaginary parts."""

    model_config = ConfigDict(frozen=True)

    real: float
    imag: float

    @classmethod
    def from_complex(cls, value: complex) -> "Eigenvalue":
        return cls(real=float(value.real), imag=float(value.imag))

    def as_complex(self) -> complex:
        return complex(self.real, self.imag)


class Equilibrium(BaseModel):
    """A converged equilibrium of the slow-time system."""

    model_config = ConfigDict(frozen=True)

    state: State
    kind: EquilibriumKind
    h: float = Field(..., description="Value of h the equilibrium was computed at")
    eigenvalues: List[Eigenvalue] = Field(..., min_length=3, max_length=3)
    stability: StabilityTag
    residual: float = Field(..., ge=0.0, description="Max-norm residual of the equilibrium equations")
    iterations: int = Field(default=0, ge=0)

    def eigenvalues_complex(self) -> List[complex]:
        return [e.as_complex() for e in self.eigenvalues]

    def complex_pair(self, tol: float = 1e-9) -> Optional[complex]:
        """The eigenvalue of the complex pair with positive imaginary part, if any."""
        pair = [e for e in self.eigenvalues_complex() if e.imag > tol]
        return pair[0] if pair else None


class ConditionCheck(BaseModel):
    """One structural sign condition together with the numbers that decided it."""

    model_config = ConfigDict(frozen=True)

    name: str
    status: ConditionStatus
    evidence: Dict[str, float] = Field(default_factory=dict)
    note: Optional[str] = None

    @property
    def passed(self) -> Optional[bool]:
        if self.status == ConditionStatus.PASSED:
            return True
        if self.status == ConditionStatus.FAILED:
            return False
        return None


class ConditionReport(BaseModel):
    """Structural conditions at the FSN II point and the boundary equilibrium."""

    model_config = ConfigDict(frozen=True)

    checks: List[ConditionCheck]

    def get(self, name: str) -> ConditionCheck:
        for check in self.checks:
            if check.name == name:
                return check
        raise KeyError(name)

    def failed(self) -> List[str]:
        return [c.name for c in self.checks if c.status == ConditionStatus.FAILED]

    def all_passed(self, names: Optional[List[str]] = None) -> bool:
        selected = [c for c in self.checks if names is None or c.name in names]
        return all(c.status != ConditionStatus.FAILED for c in selected)
