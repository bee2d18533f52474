"""Natural-parameter continuation of equilibrium branches in h with Hopf and transcritical detection."""

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import brentq, linear_sum_assignment

from ..config import get_settings
from ..models.bifurcation import BifurcationEvent, Branch, BranchPoint, SweepResult
from ..models.enums import BifurcationKind, EquilibriumKind, ModelType
from ..models.equilibrium import Equilibrium
from ..models.params import ModelParams
from .equilibria import equilibrium_at, newton_equilibrium
from .errors import ConvergenceError, DomainError
from .logging import get_logger
from .model import ModelFactory

logger = get_logger(__name__)

MIN_STEP = 1e-6
SWEEP_KINDS = (EquilibriumKind.COEXISTENCE, EquilibriumKind.BOUNDARY_XZ, EquilibriumKind.BOUNDARY_XY)

# Coordinates held at zero on each branch; their rate is the eigenvalue transverse to the branch.
_MISSING = {
    EquilibriumKind.AXIAL: (1, 2),
    EquilibriumKind.BOUNDARY_XY: (2,),
    EquilibriumKind.BOUNDARY_XZ: (1,),
}
_POSITIVE = {
    EquilibriumKind.AXIAL: (0,),
    EquilibriumKind.BOUNDARY_XY: (0, 1),
    EquilibriumKind.BOUNDARY_XZ: (0, 2),
    EquilibriumKind.COEXISTENCE: (0, 1, 2),
}
_BRENT_XTOL = 1e-12


def _solve(params: ModelParams, kind: EquilibriumKind, h: float, guess: Optional[Sequence[float]],
           model_type: ModelType, enforce_kind: bool = True) -> Equilibrium:
    model = ModelFactory.create_model(model_type, params.with_h(h))
    start = model.initial_guess(kind) if guess is None else np.asarray(guess, dtype=float)
    state, iterations, residual = newton_equilibrium(model, kind, start, enforce_kind=enforce_kind)
    return equilibrium_at(model, kind, state, iterations, residual)


def continue_branch(
    kind: EquilibriumKind,
    h_min: float,
    h_max: float,
    step: float,
    params: ModelParams,
    initial_guess: Optional[Sequence[float]] = None,
    model_type: ModelType = ModelType.PREDATOR_PREY,
) -> Branch:
    """
    Continue an equilibrium branch from h_min to h_max with warm-started Newton solves.

    The branch is sampled on the grid h_min + n*step. When a solve fails the step
    toward the next grid point is halved; below MIN_STEP the branch terminates and
    the failing h is reported.

    Args:
        kind: Equilibrium kind to follow
        h_min: Lower end of the range, where continuation starts
        h_max: Upper end of the range
        step: Grid spacing in h
        params: Model parameters (h is overridden)
        initial_guess: Starting state at the first converged grid point
        model_type: Model implementation

    Returns:
        Branch with its termination report
    """
    if step <= 0:
        raise ValueError("step must be positive")
    if h_max <= h_min:
        return Branch(kind=kind, params=params)

    n = int(np.floor((h_max - h_min) / step + 1e-9))
    grid = [h_min + i * step for i in range(n + 1)]
    if grid[-1] < h_max - 1e-12:
        grid.append(h_max)

    points: List[BranchPoint] = []
    start = None
    for index, h in enumerate(grid):
        try:
            eq = _solve(params, kind, h, initial_guess, model_type)
        except (ConvergenceError, DomainError):
            continue
        points.append(BranchPoint(h=h, equilibrium=eq))
        start = index
        break
    if start is None:
        message = f"No {kind.value} equilibrium found on [{h_min}, {h_max}]"
        logger.log_branch_termination(kind.value, h_min, message)
        return Branch(kind=kind, terminated=True, termination_h=h_min, message=message, params=params)
    if start > 0:
        logger.logger.info("branch start", branch=kind.value, h=grid[start], skipped=start)

    h = grid[start]
    state = points[-1].equilibrium.state.as_array()
    for target in grid[start + 1:]:
        sub = target - h
        while h < target - 1e-14:
            trial_h = min(h + sub, target)
            try:
                eq = _solve(params, kind, trial_h, state, model_type)
            except (ConvergenceError, DomainError) as e:
                sub *= 0.5
                if sub < MIN_STEP:
                    message = f"{type(e).__name__} at h={trial_h:.8f}: {e}"
                    logger.log_branch_termination(kind.value, trial_h, message)
                    return Branch(kind=kind, points=points, terminated=True, termination_h=trial_h,
                                  message=message, params=params)
                continue
            h, state = trial_h, eq.state.as_array()
            sub = min(2.0 * sub, step)
            if abs(h - target) <= 1e-14:
                points.append(BranchPoint(h=target, equilibrium=eq))
    return Branch(kind=kind, points=points, params=params)


def match_eigenvalues(previous: Sequence[complex], current: Sequence[complex]) -> np.ndarray:
    """Reorder ``current`` to the minimal-distance assignment against ``previous``."""
    prev = np.asarray(previous, dtype=complex)
    curr = np.asarray(current, dtype=complex)
    cost = np.abs(prev[:, None] - curr[None, :])
    _, columns = linear_sum_assignment(cost)
    return curr[columns]


def eigenvalue_jumps(branch: Branch) -> List[float]:
    """Largest matched eigenvalue change between successive branch points."""
    jumps = []
    for a, b in zip(branch.points[:-1], branch.points[1:]):
        prev = a.equilibrium.eigenvalues_complex()
        matched = match_eigenvalues(prev, b.equilibrium.eigenvalues_complex())
        jumps.append(float(np.max(np.abs(matched - np.asarray(prev)))))
    return jumps


class _BranchSolver:
    """Warm-started solves on one branch, used to refine event locations."""

    def __init__(self, branch: Branch, model_type: ModelType):
        if branch.params is None:
            raise ValueError("branch carries no parameters")
        self.kind = branch.kind
        self.params = branch.params
        self.model_type = model_type
        self.last: Optional[np.ndarray] = None

    def seed(self, point: BranchPoint) -> None:
        self.last = point.equilibrium.state.as_array()

    def solve(self, h: float, enforce_kind: bool = True) -> Equilibrium:
        eq = _solve(self.params, self.kind, h, self.last, self.model_type, enforce_kind=enforce_kind)
        self.last = eq.state.as_array()
        return eq

    def rates(self, eq: Equilibrium) -> np.ndarray:
        model = ModelFactory.create_model(self.model_type, self.params.with_h(eq.h))
        return np.asarray(model.rates(*eq.state.as_array()), dtype=float)


def _pair_real(eq: Equilibrium) -> Optional[float]:
    pair = eq.complex_pair()
    return None if pair is None else pair.real


def _refine(func: Callable[[float], float], solver: _BranchSolver, left: BranchPoint, right: BranchPoint) -> float:
    solver.seed(left)
    return brentq(func, left.h, right.h, xtol=_BRENT_XTOL, maxiter=200)


def _hopf_events(branch: Branch, solver: _BranchSolver) -> List[BifurcationEvent]:
    events = []

    def pair_real(h: float) -> float:
        value = _pair_real(solver.solve(h))
        if value is None:
            raise ConvergenceError("Complex pair lost while refining a Hopf point", h=h)
        return value

    for left, right in zip(branch.points[:-1], branch.points[1:]):
        a, b = _pair_real(left.equilibrium), _pair_real(right.equilibrium)
        if a is None or b is None or a * b > 0.0 or a == b:
            continue
        try:
            h_star = _refine(pair_real, solver, left, right)
            pair = solver.solve(h_star).complex_pair()
        except (ConvergenceError, DomainError, ValueError) as e:
            logger.logger.warning("hopf refinement failed", branch=branch.branch_id, h0=left.h, h1=right.h,
                                  error=str(e))
            continue
        evidence = {"re_pair": pair.real, "im_pair": pair.imag, "re_left": a, "re_right": b}
        logger.log_bifurcation(BifurcationKind.HOPF.value, branch.branch_id, h_star, evidence)
        events.append(BifurcationEvent(kind=BifurcationKind.HOPF, h=h_star, branch=branch.kind,
                                       bracket=[left.h, right.h], evidence=evidence))
    return events


def _boundary_transcriticals(branch: Branch, solver: _BranchSolver) -> List[BifurcationEvent]:
    """Sign changes of the rate transverse to a boundary branch."""
    events = []
    for index in _MISSING.get(branch.kind, ()):
        def transverse(h: float) -> float:
            return float(solver.rates(solver.solve(h))[index])

        values = [float(solver.rates(p.equilibrium)[index]) for p in branch.points]
        for (left, a), (right, b) in zip(zip(branch.points, values), zip(branch.points[1:], values[1:])):
            if a * b > 0.0 or a == b:
                continue
            try:
                h_star = _refine(transverse, solver, left, right)
            except (ConvergenceError, DomainError, ValueError):
                continue
            evidence = {"transverse_rate": transverse(h_star), "coordinate": float(index),
                        "rate_left": a, "rate_right": b}
            logger.log_bifurcation(BifurcationKind.TRANSCRITICAL.value, branch.branch_id, h_star, evidence)
            events.append(BifurcationEvent(kind=BifurcationKind.TRANSCRITICAL, h=h_star, branch=branch.kind,
                                           bracket=[left.h, right.h], evidence=evidence))
    return events


def _exit_transcritical(branch: Branch, solver: _BranchSolver) -> List[BifurcationEvent]:
    """A branch that terminates because a population coordinate reaches zero."""
    if not branch.terminated or not branch.points or branch.termination_h is None:
        return []
    positive = _POSITIVE.get(branch.kind, ())
    if not positive:
        return []
    last = branch.points[-1]
    h_left, h_right = last.h, branch.termination_h
    solver.seed(last)
    try:
        beyond = solver.solve(h_right, enforce_kind=False).state.as_array()
    except (ConvergenceError, DomainError):
        return []
    index = min(positive, key=lambda i: beyond[i])
    if beyond[index] > 0.0:
        return []

    def coordinate(h: float) -> float:
        return float(solver.solve(h, enforce_kind=False).state.as_array()[index])

    solver.seed(last)
    try:
        h_star = brentq(coordinate, h_left, h_right, xtol=_BRENT_XTOL, maxiter=200)
        at = solver.solve(h_star, enforce_kind=False)
    except (ConvergenceError, DomainError, ValueError):
        return []
    eigs = at.eigenvalues_complex()
    evidence = {"coordinate": float(index), "value": float(at.state.as_array()[index]),
                "min_abs_eigenvalue": float(min(abs(v) for v in eigs))}
    logger.log_bifurcation(BifurcationKind.TRANSCRITICAL.value, branch.branch_id, h_star, evidence)
    return [BifurcationEvent(kind=BifurcationKind.TRANSCRITICAL, h=h_star, branch=branch.kind,
                             bracket=[h_left, h_right], evidence=evidence)]


def detect_events(branch: Branch, model_type: ModelType = ModelType.PREDATOR_PREY) -> List[BifurcationEvent]:
    """
    Hopf and transcritical points on a continued branch, ordered by h.

    Hopf points are sign changes of the real part of the complex pair. On a
    boundary branch a transcritical point is a sign change of the transverse rate;
    on an interior branch it is the end of the branch where a coordinate reaches 0.
    """
    if len(branch) < 3:
        return []
    solver = _BranchSolver(branch, model_type)
    events = _hopf_events(branch, solver) + _boundary_transcriticals(branch, solver) + _exit_transcritical(branch, solver)
    return sorted(events, key=lambda e: e.h)


def _branch_with_events(kind: EquilibriumKind, h_min: float, h_max: float, step: float,
                        params: ModelParams, model_type: ModelType) -> Tuple[Branch, List[BifurcationEvent]]:
    branch = continue_branch(kind, h_min, h_max, step, params, model_type=model_type)
    return branch, detect_events(branch, model_type)


def sweep(
    params: ModelParams,
    h_min: Optional[float] = None,
    h_max: Optional[float] = None,
    step: Optional[float] = None,
    kinds: Sequence[EquilibriumKind] = SWEEP_KINDS,
    workers: Optional[int] = None,
    model_type: ModelType = ModelType.PREDATOR_PREY,
) -> SweepResult:
    """
    Continue several branches concurrently and collect their events.

    Results are merged in the order of ``kinds``, independent of completion order.
    """
    settings = get_settings()
    h_min = settings.sweep_h_min if h_min is None else h_min
    h_max = settings.sweep_h_max if h_max is None else h_max
    step = settings.sweep_h_step if step is None else step
    workers = workers or settings.sweep_workers
    if h_max <= h_min or not kinds:
        return SweepResult()

    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(_branch_with_events, kind, h_min, h_max, step, params, model_type) for kind in kinds]
        results = [f.result() for f in futures]

    branches = [branch for branch, _ in results]
    events = [event for _, found in results for event in found]
    logger.logger.info("sweep complete", h_min=h_min, h_max=h_max, step=step,
                       branches=len(branches), events=len(events))
    return SweepResult(branches=branches, events=events)
