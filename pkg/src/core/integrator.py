"""Adaptive integration of the population model and the normal form, with fate classification."""

import time
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import solve_ivp
from scipy.signal import find_peaks

from ..models.enums import (
    AttractorKind,
    CoordinateSystem,
    EquilibriumKind,
    ModelType,
    TerminationEvent,
    TimeUnit,
)
from ..models.equilibrium import Equilibrium
from ..models.normal_form import NFState, NormalFormCoeffs
from ..models.params import ModelParams, State
from ..models.trajectory import AttractorVerdict, IntegratorConfig, Trajectory
from .equilibria import find_equilibrium
from .errors import StiffnessError
from .logging import get_logger
from .model import ModelFactory
from .normal_form.geometry import funnel_threshold, nf_rhs

logger = get_logger(__name__)

_XYZ_EVENTS = (TerminationEvent.EXTINCTION, TerminationEvent.NEGATIVE_POPULATION)
_UVW_EVENTS = (TerminationEvent.W_DIVERGENCE, TerminationEvent.W_ZERO_CROSSING, TerminationEvent.FUNNEL_ENTRY)

# Fate thresholds
Y_FLOOR = 1e-4
EXZ_DISTANCE = 1e-3
TAIL_FRACTION = 0.2
AMPLITUDE_BAND = 0.05


def _event(func: Callable, terminal: bool, direction: float) -> Callable:
    func.terminal = terminal
    func.direction = direction
    return func


def _xyz_events(config: IntegratorConfig) -> Dict[TerminationEvent, Callable]:
    floor = config.extinction_floor
    atol = config.atol
    return {
        TerminationEvent.EXTINCTION: _event(lambda t, s: s[1] - floor, True, -1.0),
        TerminationEvent.NEGATIVE_POPULATION: _event(lambda t, s: float(np.min(s)) + atol, True, -1.0),
    }


def _uvw_events(config: IntegratorConfig, coeffs: NormalFormCoeffs) -> Dict[TerminationEvent, Callable]:
    floor = config.divergence_floor
    return {
        TerminationEvent.W_DIVERGENCE: _event(lambda t, s: s[2] - floor, True, -1.0),
        TerminationEvent.W_ZERO_CROSSING: _event(lambda t, s: s[2], False, -1.0),
        TerminationEvent.FUNNEL_ENTRY: _event(
            lambda t, s: s[2] - float(funnel_threshold(s[0], s[1], coeffs)), False, 1.0),
    }


def _solve(rhs: Callable, y0: np.ndarray, config: IntegratorConfig,
           events: Dict[TerminationEvent, Callable], coordinates: CoordinateSystem,
           time_unit: TimeUnit) -> Trajectory:
    active = list(events.items())
    t_eval = None
    if config.sample_step is not None:
        t_eval = np.arange(0.0, config.t_final + 0.5 * config.sample_step, config.sample_step)
        t_eval = t_eval[t_eval <= config.t_final]

    start = time.perf_counter()
    result = solve_ivp(
        rhs,
        (0.0, config.t_final),
        y0,
        method=config.method,
        t_eval=t_eval,
        dense_output=config.dense_output,
        events=[f for _, f in active] or None,
        rtol=config.rtol,
        atol=config.atol,
        max_step=config.max_step,
    )
    if result.status == -1:
        raise StiffnessError(
            f"Integration failed: {result.message}",
            suggestion="Loosen tolerances or use method=DOP853",
            t_reached=float(result.t[-1]) if result.t.size else 0.0,
        )

    event_times: Dict[str, List[float]] = {}
    terminated_by: Optional[TerminationEvent] = None
    if result.t_events is not None:
        for (name, func), times in zip(active, result.t_events):
            if len(times):
                event_times[name.value] = [float(t) for t in times]
                if func.terminal and result.status == 1:
                    terminated_by = name

    trajectory = Trajectory(
        t=result.t,
        states=result.y.T,
        coordinates=coordinates,
        time_unit=time_unit,
        nfev=int(result.nfev),
        n_steps=int(result.t.size),
        status=int(result.status),
        message=str(result.message),
        event_times=event_times,
        terminated_by=terminated_by,
        sol=result.sol,
    )
    logger.log_integration(coordinates.value, config.t_final, trajectory.nfev, trajectory.status,
                           terminated_by.value if terminated_by else None, time.perf_counter() - start)
    return trajectory


def _select(all_events: Dict[TerminationEvent, Callable], config: IntegratorConfig,
            defaults: Sequence[TerminationEvent]) -> Dict[TerminationEvent, Callable]:
    wanted = defaults if config.events is None else config.events
    return {name: all_events[name] for name in wanted if name in all_events}


def integrate_model(initial: State, params: ModelParams, config: Optional[IntegratorConfig] = None,
                    model_type: ModelType = ModelType.PREDATOR_PREY) -> Trajectory:
    """
    Integrate the population model in slow time s.

    Raises:
        StiffnessError: If the step size underflows
    """
    config = config or IntegratorConfig()
    model = ModelFactory.create_model(model_type, params)
    y0 = model.check_finite(initial.as_array())
    events = _select(_xyz_events(config), config, _XYZ_EVENTS)
    return _solve(model.rhs_unchecked, y0, config, events, CoordinateSystem.XYZ, TimeUnit.SLOW)


def integrate_nf(initial: NFState, coeffs: NormalFormCoeffs, alpha: float,
                 config: Optional[IntegratorConfig] = None) -> Trajectory:
    """Integrate the truncated normal form in tau; ``config.t_final`` is in tau."""
    config = config or IntegratorConfig()
    events = _select(_uvw_events(config, coeffs), config, _UVW_EVENTS)
    return _solve(nf_rhs(coeffs, alpha), initial.as_array(), config, events,
                  CoordinateSystem.UVW, TimeUnit.TAU)


def _tail_amplitudes(t: np.ndarray, values: np.ndarray) -> Optional[Tuple[float, float, int]]:
    """Peak-to-peak amplitude in both halves of the trailing window and its peak count."""
    start = t[0] + (1.0 - TAIL_FRACTION) * (t[-1] - t[0])
    mask = t >= start
    tail_t, tail = t[mask], values[mask]
    if tail.size < 8:
        return None
    mid = tail_t[0] + 0.5 * (tail_t[-1] - tail_t[0])
    first, second = tail[tail_t < mid], tail[tail_t >= mid]
    peaks, _ = find_peaks(tail)
    if first.size < 4 or second.size < 4:
        return None
    return float(np.ptp(first)), float(np.ptp(second)), int(peaks.size)


def _limit_cycle(traj: Trajectory, channel: str) -> Optional[AttractorVerdict]:
    amps = _tail_amplitudes(traj.t, traj.channel(channel))
    if amps is None:
        return None
    a1, a2, n_peaks = amps
    scale = max(a1, a2)
    if n_peaks < 4 or scale <= 1e-8:
        return None
    spread = abs(a1 - a2) / scale
    if spread > AMPLITUDE_BAND:
        return None
    return AttractorVerdict(
        kind=AttractorKind.LIMIT_CYCLE,
        decision_time=float(traj.t[0] + (1.0 - TAIL_FRACTION) * traj.span),
        evidence={"amplitude_first": a1, "amplitude_second": a2, "relative_spread": spread,
                  "tail_peaks": float(n_peaks)},
    )


def classify_attractor(traj: Trajectory, params: Optional[ModelParams] = None,
                       e_xz: Optional[Equilibrium] = None,
                       divergence_floor: float = -5.0) -> AttractorVerdict:
    """
    Asymptotic fate of a trajectory.

    Args:
        traj: Trajectory in (x, y, z) or (u, v, w) coordinates
        params: Model parameters; needed in (x, y, z) mode unless ``e_xz`` is given
        e_xz: Boundary equilibrium to test convergence against
        divergence_floor: w level counted as divergence in (u, v, w) mode
    """
    if traj.coordinates == CoordinateSystem.XYZ:
        y = traj.channel("y")
        if e_xz is None and params is not None:
            e_xz = find_equilibrium(params, EquilibriumKind.BOUNDARY_XZ)
        final = traj.final_state()
        if final[1] < Y_FLOOR and e_xz is not None:
            target = e_xz.state.as_array()
            distance = float(np.hypot(final[0] - target[0], final[2] - target[2]))
            if distance <= EXZ_DISTANCE:
                below = np.nonzero(y < Y_FLOOR)[0]
                return AttractorVerdict(
                    kind=AttractorKind.BOUNDARY_XZ,
                    decision_time=float(traj.t[below[0]]),
                    evidence={"final_y": float(final[1]), "distance_to_exz": distance},
                )
        verdict = _limit_cycle(traj, "y")
        if verdict is not None and float(np.min(y[traj.t >= verdict.decision_time])) > Y_FLOOR:
            return verdict
        return AttractorVerdict(kind=AttractorKind.UNDECIDED)

    w = traj.channel("w")
    if traj.terminated_by == TerminationEvent.W_DIVERGENCE or float(np.min(w)) <= divergence_floor:
        hit = traj.event_times.get(TerminationEvent.W_DIVERGENCE.value)
        when = hit[0] if hit else float(traj.t[np.argmax(w <= divergence_floor)])
        return AttractorVerdict(kind=AttractorKind.W_DIVERGENCE, decision_time=when,
                                evidence={"min_w": float(np.min(w))})
    verdict = _limit_cycle(traj, "u")
    if verdict is not None and float(np.min(w[traj.t >= verdict.decision_time])) > 0.0:
        return verdict
    return AttractorVerdict(kind=AttractorKind.UNDECIDED)
