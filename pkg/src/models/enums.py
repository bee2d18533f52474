"""Enums for the slow-fast early-warning toolkit."""

from enum import Enum


class TimeScale(str, Enum):
    """Time scale in which the vector field is evaluated."""
    SLOW = "slow"
    FAST = "fast"


class ModelType(str, Enum):
    """Shipped implementations of the slow-fast model interface."""
    PREDATOR_PREY = "predator_prey"


class EquilibriumKind(str, Enum):
    """Equilibria of the three-species system, by support."""
    ORIGIN = "origin"
    AXIAL = "axial"
    BOUNDARY_XY = "boundary_xy"
    BOUNDARY_XZ = "boundary_xz"
    COEXISTENCE = "coexistence"


class StabilityTag(str, Enum):
    """Stability class derived from eigenvalue real and imaginary parts."""
    STABLE = "stable_node_focus"
    SADDLE = "saddle"
    SADDLE_FOCUS = "saddle_focus"
    UNSTABLE = "unstable_node_focus"
    NON_HYPERBOLIC = "non_hyperbolic"


class ConditionStatus(str, Enum):
    """Outcome of a structural condition check."""
    PASSED = "passed"
    FAILED = "failed"
    CHECKED_ELSEWHERE = "checked_elsewhere"
    EMPIRICAL = "empirical"


class Criticality(str, Enum):
    """Criticality of a Hopf bifurcation from the first Lyapunov coefficient."""
    SUBCRITICAL = "subcritical"
    SUPERCRITICAL = "supercritical"
    DEGENERATE = "degenerate"


class CoordinateSystem(str, Enum):
    """Coordinates a trajectory is expressed in."""
    XYZ = "xyz"
    UVW = "uvw"


class TimeUnit(str, Enum):
    """Slow time s of the model or normal-form time tau = s / delta."""
    SLOW = "s"
    TAU = "tau"


class TerminationEvent(str, Enum):
    """Integration events; the first three stop the integration."""
    EXTINCTION = "extinction"
    NEGATIVE_POPULATION = "negative_population"
    W_DIVERGENCE = "w_divergence"
    W_ZERO_CROSSING = "w_zero_crossing"
    FUNNEL_ENTRY = "funnel_entry"


class AttractorKind(str, Enum):
    """Asymptotic fate of a trajectory."""
    LIMIT_CYCLE = "limit_cycle"
    BOUNDARY_XZ = "boundary_xz"
    W_DIVERGENCE = "w_divergence"
    UNDECIDED = "undecided"


class TheoremVerdict(str, Enum):
    """Outcome of the averaged-system bistability classifier."""
    LIMIT_CYCLE = "limit_cycle"
    EXTINCTION = "extinction"
    INCONCLUSIVE = "inconclusive"


class EWSVerdict(str, Enum):
    """Outcome of the nested-interval early-warning scan."""
    COEXISTENCE_MINIMUM = "coexistence_minimum"
    EXTINCTION_WARNING = "extinction_warning"
    INCONCLUSIVE = "inconclusive"


class BifurcationKind(str, Enum):
    """Codimension-one bifurcations detected on equilibrium branches."""
    HOPF = "hopf"
    TRANSCRITICAL = "transcritical"


class Command(str, Enum):
    """CLI commands."""
    SIMULATE = "simulate"
    NORMALFORM = "normalform"
    EWS = "ews"
    CLASSIFY = "classify"
    SWEEP = "sweep"


class OutputFormat(str, Enum):
    """Tabular artifact formats."""
    CSV = "csv"
    JSON = "json"
