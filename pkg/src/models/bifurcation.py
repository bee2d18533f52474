"""Equilibrium branches and the bifurcations found on them."""

from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field

from .enums import BifurcationKind, EquilibriumKind, StabilityTag
from .equilibrium import Eigenvalue, Equilibrium
from .params import ModelParams


class BranchPoint(BaseModel):
    """One continuation step."""

    model_config = ConfigDict(frozen=True)

    h: float
    equilibrium: Equilibrium

    @property
    def eigenvalues(self) -> List[Eigenvalue]:
        return self.equilibrium.eigenvalues

    @property
    def stability(self) -> StabilityTag:
        return self.equilibrium.stability

    def to_row(self) -> Dict[str, Any]:
        s = self.equilibrium.state
        row: Dict[str, Any] = {"h": self.h, "x": s.x, "y": s.y, "z": s.z}
        for i, ev in enumerate(self.eigenvalues, start=1):
            row[f"re_lambda{i}"] = ev.real
            row[f"im_lambda{i}"] = ev.imag
        row["stability"] = self.stability.value
        return row


class Branch(BaseModel):
    """An equilibrium branch sampled over h."""

    model_config = ConfigDict(frozen=True)

    kind: EquilibriumKind
    points: List[BranchPoint] = Field(default_factory=list)
    terminated: bool = False
    termination_h: Optional[float] = Field(default=None, description="First h at which continuation failed")
    message: Optional[str] = None
    params: Optional[ModelParams] = Field(default=None, description="Parameters with h varying along the branch")

    @property
    def branch_id(self) -> str:
        return self.kind.value

    @property
    def h_values(self) -> List[float]:
        return [p.h for p in self.points]

    def __len__(self) -> int:
        return len(self.points)


class BifurcationEvent(BaseModel):
    """A Hopf or transcritical point located on a branch."""

    model_config = ConfigDict(frozen=True)

    kind: BifurcationKind
    h: float
    branch: EquilibriumKind
    bracket: List[float] = Field(..., min_length=2, max_length=2)
    evidence: Dict[str, float] = Field(default_factory=dict)

    def to_export_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind.value,
            "h": self.h,
            "branch": self.branch.value,
            "bracket": list(self.bracket),
            "evidence": dict(self.evidence),
        }


class SweepResult(BaseModel):
    """Branches of one sweep, in input order, and the events found on them."""

    model_config = ConfigDict(frozen=True)

    branches: List[Branch] = Field(default_factory=list)
    events: List[BifurcationEvent] = Field(default_factory=list)

    def events_of(self, kind: BifurcationKind, branch: Optional[EquilibriumKind] = None) -> List[BifurcationEvent]:
        return [e for e in self.events if e.kind == kind and (branch is None or e.branch == branch)]

    def to_export_dict(self) -> Dict[str, Any]:
        return {
            "branches": [
                {"branch": b.branch_id, "n_points": len(b), "terminated": b.terminated,
                 "termination_h": b.termination_h, "message": b.message}
                for b in self.branches
            ],
            "events": [e.to_export_dict() for e in self.events],
        }
