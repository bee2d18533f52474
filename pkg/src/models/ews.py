"""Early-warning scan configuration, critical curves and reports."""

from typing import Any, Dict, List, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .enums import EWSVerdict, TheoremVerdict
from .signal import ExpFit

ArrayLike = Union[float, np.ndarray]


class EWSConfig(BaseModel):
    """Settings of the nested-interval scan."""

    model_config = ConfigDict(frozen=True)

    k: int = Field(default=5, gt=4, description="Minimum oscillations per interval")
    N: Optional[int] = Field(default=None, description="Peaks to use; None uses all available")
    u_channel: str = "u"
    w_channel: str = "w"
    crossing_tol: float = Field(default=1e-9, ge=0.0)
    samples_per_window: int = Field(default=256, ge=16)
    refine_fits: bool = True

    @model_validator(mode="after")
    def _check_n(self) -> "EWSConfig":
        if self.N is not None and self.N <= self.k:
            raise ValueError(f"N must exceed k (got N={self.N}, k={self.k})")
        return self


class CriticalCurve(BaseModel):
    """Threshold wbar_crit(tau) = delta*H11*k1*exp(k2*(tau - tau1)) / (2*(k2 - delta*H3))."""

    model_config = ConfigDict(frozen=True)

    index: int = Field(..., ge=1)
    k1: float
    k2: float
    tau1: float
    delta: float
    H3: float
    H11: float

    @property
    def scale(self) -> float:
        return self.delta * self.H11 * self.k1 / (2.0 * (self.k2 - self.delta * self.H3))

    def __call__(self, tau: ArrayLike) -> ArrayLike:
        return self.scale * np.exp(self.k2 * (np.asarray(tau, dtype=float) - self.tau1))


class CriticalCurveFamily(BaseModel):
    """Critical curves of all nested intervals plus monotonicity diagnostics."""

    model_config = ConfigDict(frozen=True)

    curves: List[CriticalCurve] = Field(default_factory=list)

    @property
    def k1_sequence(self) -> List[float]:
        return [c.k1 for c in self.curves]

    @property
    def k2_sequence(self) -> List[float]:
        return [c.k2 for c in self.curves]

    @property
    def monotonic_k1(self) -> bool:
        """k1 non-increasing across intervals."""
        seq = self.k1_sequence
        return all(b <= a for a, b in zip(seq, seq[1:]))

    @property
    def monotonic_k2(self) -> bool:
        """k2 non-decreasing across intervals."""
        seq = self.k2_sequence
        return all(b >= a for a, b in zip(seq, seq[1:]))

    def ordered_on(self, index: int, tau: np.ndarray) -> bool:
        """Whether curve ``index`` lies below curve ``index + 1`` on the given samples."""
        if index >= len(self.curves):
            return True
        lower = self.curves[index - 1](tau)
        upper = self.curves[index](tau)
        return bool(np.all(lower <= upper + 1e-12))

    def __len__(self) -> int:
        return len(self.curves)

    def __getitem__(self, index: int) -> CriticalCurve:
        return self.curves[index - 1]


class TheoremBounds(BaseModel):
    """Bounds of the bistability classifier for a given wbar(tau1)."""

    model_config = ConfigDict(frozen=True)

    lower: float
    upper: float
    extinction_threshold: float
    wbar_tau1: float
    gap: Optional[float] = None


class TheoremResult(BaseModel):
    """Verdict of the averaged-system classifier."""

    model_config = ConfigDict(frozen=True)

    verdict: TheoremVerdict
    bounds: TheoremBounds
    rel2_satisfied: Optional[bool] = None
    tau_min_pred: Optional[float] = None
    tau_cross_pred: Optional[float] = None

    def to_export_dict(self) -> Dict[str, Any]:
        return {
            "verdict": self.verdict.value,
            "bounds": self.bounds.model_dump(),
            "rel2_satisfied": self.rel2_satisfied,
            "tau_min_pred": self.tau_min_pred,
            "tau_cross_pred": self.tau_cross_pred,
        }


class EWSReport(BaseModel):
    """Outcome of the nested-interval early-warning scan."""

    model_config = ConfigDict(frozen=True)

    verdict: EWSVerdict
    i0: Optional[int] = None
    warning_time_tau: Optional[float] = None
    warning_time_s: Optional[float] = None
    tau_min_pred: Optional[float] = None
    tau_cross_pred: Optional[float] = None
    theorem_bounds: Optional[TheoremBounds] = None
    monotonic_k1: bool = True
    monotonic_k2: bool = True
    curves_ordered: bool = True
    n_intervals: int = Field(default=0, ge=0)
    k: int
    N: int
    tau1: Optional[float] = None
    n_delta_over_k: Optional[float] = None
    fits: List[ExpFit] = Field(default_factory=list)
    family: CriticalCurveFamily = Field(default_factory=CriticalCurveFamily)
    curve_samples: Dict[str, List[float]] = Field(default_factory=dict, description="tau, wbar, wcrit_i0 on the triggering interval")
    message: Optional[str] = None

    @model_validator(mode="after")
    def _verdict_fields(self) -> "EWSReport":
        if self.verdict == EWSVerdict.EXTINCTION_WARNING and (
                self.i0 is None or self.warning_time_s is None):
            raise ValueError("an extinction warning needs i0 and the warning time")
        if self.verdict == EWSVerdict.COEXISTENCE_MINIMUM and self.tau_min_pred is None:
            raise ValueError("a coexistence verdict needs the predicted minimum time")
        return self

    def to_export_dict(self) -> Dict[str, Any]:
        bounds = None
        if self.theorem_bounds is not None:
            bounds = {
                "lower": self.theorem_bounds.lower,
                "upper": self.theorem_bounds.upper,
                "wbar_tau1": self.theorem_bounds.wbar_tau1,
            }
        return {
            "verdict": self.verdict.value,
            "warning_time_s": self.warning_time_s,
            "warning_time_tau": self.warning_time_tau,
            "i0": self.i0,
            "tau_min_pred": self.tau_min_pred,
            "tau_cross_pred": self.tau_cross_pred,
            "theorem_bounds": bounds,
            "monotonic_k1": self.monotonic_k1,
            "monotonic_k2": self.monotonic_k2,
            "curves_ordered": self.curves_ordered,
            "n_intervals": self.n_intervals,
            "n_delta_over_k": self.n_delta_over_k,
            "config": {"k": self.k, "N": self.N},
            "message": self.message,
        }
