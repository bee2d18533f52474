"""Pydantic value objects of the slow-fast early-warning toolkit."""

from .bifurcation import BifurcationEvent, Branch, BranchPoint, SweepResult
from .enums import (
    AttractorKind,
    BifurcationKind,
    Command,
    ConditionStatus,
    CoordinateSystem,
    Criticality,
    EquilibriumKind,
    EWSVerdict,
    ModelType,
    OutputFormat,
    StabilityTag,
    TerminationEvent,
    TheoremVerdict,
    TimeScale,
    TimeUnit,
)
from .equilibrium import ConditionCheck, ConditionReport, Eigenvalue, Equilibrium
from .ews import (
    CriticalCurve,
    CriticalCurveFamily,
    EWSConfig,
    EWSReport,
    TheoremBounds,
    TheoremResult,
)
from .normal_form import (
    EigenTriple,
    HopfLocation,
    LinearFlowModel,
    LyapunovResult,
    NFState,
    NormalFormCoeffs,
    ParametrizedSpectrum,
    StableManifoldGraph,
)
from .params import ModelParams, State
from .signal import BaseCurve, BCoefficients, ExpFit, MovingAverage, PeakSequence
from .trajectory import AttractorVerdict, IntegratorConfig, Trajectory

__all__ = [
    "AttractorKind",
    "AttractorVerdict",
    "BaseCurve",
    "BCoefficients",
    "BifurcationEvent",
    "BifurcationKind",
    "Branch",
    "BranchPoint",
    "SweepResult",
    "Command",
    "ConditionCheck",
    "ConditionReport",
    "ConditionStatus",
    "CoordinateSystem",
    "CriticalCurve",
    "CriticalCurveFamily",
    "Criticality",
    "Eigenvalue",
    "EigenTriple",
    "Equilibrium",
    "EquilibriumKind",
    "EWSConfig",
    "EWSReport",
    "EWSVerdict",
    "ExpFit",
    "HopfLocation",
    "IntegratorConfig",
    "LinearFlowModel",
    "LyapunovResult",
    "ModelParams",
    "ModelType",
    "MovingAverage",
    "NFState",
    "NormalFormCoeffs",
    "OutputFormat",
    "ParametrizedSpectrum",
    "PeakSequence",
    "StabilityTag",
    "StableManifoldGraph",
    "State",
    "TerminationEvent",
    "TheoremBounds",
    "TheoremResult",
    "TheoremVerdict",
    "TimeScale",
    "TimeUnit",
    "Trajectory",
]
