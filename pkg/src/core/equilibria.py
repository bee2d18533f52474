"""Equilibria, eigenstructure, FSN II location and structural condition checks."""

from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import brentq

from ..config import get_settings
from ..models.enums import ConditionStatus, EquilibriumKind, ModelType, StabilityTag, TimeScale
from ..models.equilibrium import ConditionCheck, ConditionReport, Eigenvalue, Equilibrium
from ..models.params import ModelParams, State
from .errors import ConvergenceError, DegenerateError, DomainError, KindMismatchError, NotFoundError
from .logging import get_logger
from .model import ModelFactory, SlowFastModel

logger = get_logger(__name__)

# Active coordinates and the rate equations solved for each equilibrium kind.
_ACTIVE = {
    EquilibriumKind.ORIGIN: ((), ()),
    EquilibriumKind.AXIAL: ((0,), ("phi",)),
    EquilibriumKind.BOUNDARY_XY: ((0, 1), ("phi", "chi")),
    EquilibriumKind.BOUNDARY_XZ: ((0, 2), ("phi", "psi")),
    EquilibriumKind.COEXISTENCE: ((0, 1, 2), ("phi", "chi", "psi")),
}
_RATE_INDEX = {"phi": 0, "chi": 1, "psi": 2}
_VARS = ("x", "y", "z")

_INNER_TOL = 1e-14
_MIN_STEP = 1e-15


def eigenvalues_of(matrix: np.ndarray) -> List[complex]:
    """Eigenvalues with round-off imaginary parts removed, sorted by real then imaginary part."""
    values = np.linalg.eigvals(matrix)
    scale = max(1.0, float(np.max(np.abs(values))))
    cleaned = [complex(v.real, 0.0) if abs(v.imag) <= 1e-12 * scale else complex(v) for v in values]
    return sorted(cleaned, key=lambda v: (v.real, -v.imag))


def classify_stability(eigenvalues: Sequence[complex], tol: float = 1e-10) -> StabilityTag:
    """Stability tag as a pure function of eigenvalue real and imaginary parts."""
    scale = max(1.0, max(abs(v) for v in eigenvalues))
    threshold = tol * scale
    reals = [v.real for v in eigenvalues]
    if any(abs(r) <= threshold for r in reals):
        return StabilityTag.NON_HYPERBOLIC
    if all(r < 0 for r in reals):
        return StabilityTag.STABLE
    if all(r > 0 for r in reals):
        return StabilityTag.UNSTABLE
    if any(abs(v.imag) > threshold for v in eigenvalues):
        return StabilityTag.SADDLE_FOCUS
    return StabilityTag.SADDLE


def _reduced_system(model: SlowFastModel, kind: EquilibriumKind, s: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    idx, eqs = _ACTIVE[kind]
    rates = model.rates(*s)
    table = model.partials(s, order=1)
    F = np.array([rates[_RATE_INDEX[e]] for e in eqs])
    J = np.array([[table[f"{e}_{_VARS[i]}"] for i in idx] for e in eqs])
    return F, J


def newton_equilibrium(
    model: SlowFastModel,
    kind: EquilibriumKind,
    guess: Sequence[float],
    tol: Optional[float] = None,
    max_iter: Optional[int] = None,
    enforce_kind: bool = True,
) -> Tuple[np.ndarray, int, float]:
    """
    Damped Newton iteration on the reduced rate equations of ``kind``.

    Returns:
        (state, iterations, residual) with the residual of (x*phi, y*chi, z*psi)

    Raises:
        ConvergenceError: If the residual stays above ``tol``
        KindMismatchError: If a coordinate that must be positive is not
    """
    settings = get_settings()
    tol = settings.newton_tol if tol is None else tol
    max_iter = settings.newton_max_iter if max_iter is None else max_iter
    idx, _ = _ACTIVE[kind]

    s = np.asarray(guess, dtype=float).copy()
    inactive = [i for i in range(3) if i not in idx]
    s[inactive] = 0.0
    if kind == EquilibriumKind.AXIAL:
        s[0] = s[0] if s[0] > 0 else 1.0

    iterations = 0
    if idx:
        F, J = _reduced_system(model, kind, s)
        norm = float(np.max(np.abs(F)))
        for iterations in range(1, max_iter + 1):
            if norm <= _INNER_TOL:
                break
            try:
                step = np.linalg.solve(J, -F)
            except np.linalg.LinAlgError as e:
                raise ConvergenceError(f"Singular Jacobian while solving for {kind.value}",
                                       kind=kind.value, h=model.params.h) from e
            damping = 1.0
            while True:
                trial = s.copy()
                trial[list(idx)] += damping * step
                try:
                    F_trial, J_trial = _reduced_system(model, kind, trial)
                    trial_norm = float(np.max(np.abs(F_trial)))
                except DomainError:
                    trial_norm = np.inf
                if trial_norm < norm or damping < 1e-4:
                    break
                damping *= 0.5
            if not trial_norm < norm:
                # stalled at round-off
                break
            s, F, J, norm = trial, F_trial, J_trial, trial_norm
            if damping * float(np.max(np.abs(step))) <= _MIN_STEP:
                break

    residual = model.equilibrium_residual(s)
    converged = residual <= tol
    logger.log_newton(kind.value, model.params.h, iterations, residual, converged)
    if not converged:
        raise ConvergenceError(
            f"Equilibrium solver did not converge for {kind.value} (residual {residual:.3e})",
            suggestion="Try a closer initial guess",
            kind=kind.value, h=model.params.h, residual=residual,
        )
    if enforce_kind and any(s[i] <= 0.0 for i in idx):
        raise KindMismatchError(
            f"Solver converged to {tuple(s)}, not a {kind.value} equilibrium",
            kind=kind.value, h=model.params.h,
        )
    return s, iterations, residual


def equilibrium_at(model: SlowFastModel, kind: EquilibriumKind, state: np.ndarray,
                   iterations: int = 0, residual: float = 0.0) -> Equilibrium:
    """Wrap a converged state with its eigenvalues and stability tag."""
    eigs = eigenvalues_of(model.jacobian(state, TimeScale.SLOW))
    return Equilibrium(
        state=State.from_array(state),
        kind=kind,
        h=model.params.h,
        eigenvalues=[Eigenvalue.from_complex(v) for v in eigs],
        stability=classify_stability(eigs),
        residual=residual,
        iterations=iterations,
    )


def find_equilibrium(
    params: ModelParams,
    kind: EquilibriumKind,
    initial_guess: Optional[Sequence[float]] = None,
    model_type: ModelType = ModelType.PREDATOR_PREY,
) -> Equilibrium:
    """
    Converged equilibrium of the given kind with eigenvalues attached.

    Args:
        params: Model parameters
        kind: Support of the equilibrium
        initial_guess: Starting point; a model-specific guess when omitted
        model_type: Model implementation

    Raises:
        ConvergenceError, KindMismatchError
    """
    model = ModelFactory.create_model(model_type, params)
    if isinstance(initial_guess, State):
        initial_guess = initial_guess.as_array()
    guess = model.initial_guess(kind) if initial_guess is None else np.asarray(initial_guess, dtype=float)
    state, iterations, residual = newton_equilibrium(model, kind, guess)
    return equilibrium_at(model, kind, state, iterations, residual)


class _CoexistenceTracker:
    """phi_x along the coexistence branch with warm-started solves."""

    def __init__(self, params: ModelParams, model_type: ModelType):
        self.params = params
        self.model_type = model_type
        self.last: Optional[np.ndarray] = None

    def solve(self, h: float) -> Tuple[SlowFastModel, np.ndarray, int, float]:
        model = ModelFactory.create_model(self.model_type, self.params.with_h(h))
        guess = self.last if self.last is not None else model.initial_guess(EquilibriumKind.COEXISTENCE)
        try:
            state, it, res = newton_equilibrium(model, EquilibriumKind.COEXISTENCE, guess)
        except (ConvergenceError, DomainError):
            if self.last is None:
                raise
            fresh = model.initial_guess(EquilibriumKind.COEXISTENCE, hint=self.last)
            state, it, res = newton_equilibrium(model, EquilibriumKind.COEXISTENCE, fresh)
        self.last = state
        return model, state, it, res

    def phi_x(self, h: float) -> float:
        model, state, _, _ = self.solve(h)
        return model.partials(state, order=1)["phi_x"]


def find_fsn2(
    params: ModelParams,
    h_bracket: Tuple[float, float] = (0.2, 0.3),
    n_grid: int = 21,
    model_type: ModelType = ModelType.PREDATOR_PREY,
) -> Tuple[float, Equilibrium]:
    """
    Locate the FSN II point: h where the coexistence equilibrium sits on the fold (phi_x = 0).

    Returns:
        (h_bar, coexistence equilibrium at h_bar)

    Raises:
        NotFoundError: If phi_x does not change sign along the branch in the bracket
    """
    lo, hi = sorted(h_bracket)
    tracker = _CoexistenceTracker(params, model_type)
    samples: List[Tuple[float, float]] = []
    for h in np.linspace(lo, hi, n_grid):
        try:
            samples.append((float(h), tracker.phi_x(float(h))))
        except (ConvergenceError, DomainError):
            tracker.last = None

    for (h0, g0), (h1, g1) in zip(samples[:-1], samples[1:]):
        if g0 == 0.0:
            h_bar = h0
            break
        if g0 * g1 < 0.0:
            tracker.solve(h0)
            h_bar = brentq(tracker.phi_x, h0, h1, xtol=1e-15, maxiter=200)
            break
    else:
        raise NotFoundError(
            f"No FSN II point for h in [{lo}, {hi}]",
            suggestion="Widen the h bracket around the coexistence fold",
            h_min=lo, h_max=hi, n_valid=len(samples),
        )

    model, state, it, res = tracker.solve(h_bar)
    return h_bar, equilibrium_at(model, EquilibriumKind.COEXISTENCE, state, it, res)


def _check(name: str, ok: bool, evidence: Dict[str, float], note: Optional[str] = None) -> ConditionCheck:
    status = ConditionStatus.PASSED if ok else ConditionStatus.FAILED
    return ConditionCheck(name=name, status=status, evidence={k: float(v) for k, v in evidence.items()}, note=note)


def p5_bracket(model: SlowFastModel, state: Sequence[float]) -> float:
    """Transversality quantity -(f1_xx, f1_xy, f1_xz) J^-1 (f_p) + f1_xp."""
    t = model.partials(state, order=2)
    J = np.array([
        [t["f1_x"], t["f1_y"], t["f1_z"]],
        [t["f2_x"], t["f2_y"], t["f2_z"]],
        [t["f3_x"], t["f3_y"], t["f3_z"]],
    ])
    if abs(np.linalg.det(J)) < 1e-14:
        raise DegenerateError("det J vanishes at the fold point")
    row = np.array([t["f1_xx"], t["f1_xy"], t["f1_xz"]])
    fp = np.array([t["f1_p"], t["f2_p"], t["f3_p"]])
    return float(-row @ np.linalg.solve(J, fp) + t["f1_xp"])


def check_conditions(
    params: ModelParams,
    fsn_point: Equilibrium,
    e_xz: Equilibrium,
    model_type: ModelType = ModelType.PREDATOR_PREY,
    tol: float = 1e-8,
) -> ConditionReport:
    """Sign conditions on the rates, at the FSN II point and at the boundary equilibrium."""
    model = ModelFactory.create_model(model_type, params.with_h(fsn_point.h))
    checks: List[ConditionCheck] = []

    phi0, chi0, psi0 = model.rates(0.0, 0.0, 0.0)
    phi1, chi1, psi1 = model.rates(1.0, 0.0, 0.0)
    phi1_x = model.partials((1.0, 0.0, 0.0), order=1)["phi_x"]
    checks.append(_check(
        "H1",
        phi0 > 0 and chi0 < 0 and psi0 < 0 and abs(phi1) <= tol and chi1 > 0 and psi1 > 0 and phi1_x < 0,
        {"phi_origin": phi0, "chi_origin": chi0, "psi_origin": psi0,
         "phi_axial": phi1, "chi_axial": chi1, "psi_axial": psi1, "phi_x_axial": phi1_x},
    ))

    ys = np.linspace(0.0, params.beta1, 50)
    zs = model.transcritical_curve(ys)
    checks.append(_check(
        "H2",
        bool(np.all(zs >= -tol)) and params.beta1 > 0 and params.beta2 > 0,
        {"y_intercept": params.beta1, "z_intercept": params.beta2},
        note="phi(0, y, z) = 0 is the segment y/beta1 + z/beta2 = 1",
    ))

    fold_xx = []
    for x in np.linspace(0.01, 0.99, 99):
        pt = model.fold_point(float(x))
        if pt is not None and pt[1] >= 0 and pt[2] >= 0:
            fold_xx.append(model.partials(pt, order=2)["phi_xx"])
    min_xx = min((abs(v) for v in fold_xx), default=0.0)
    checks.append(_check("H3", bool(fold_xx) and min_xx > tol,
                         {"fold_samples": len(fold_xx), "min_abs_phi_xx": min_xx}))

    s = fsn_point.state.as_array()
    t = model.partials(s, order=2)
    checks.append(_check("P1", max(abs(t["phi"]), abs(t["chi"]), abs(t["psi"])) <= tol,
                         {"phi": t["phi"], "chi": t["chi"], "psi": t["psi"]}))
    J = np.array([
        [t["f1_x"], t["f1_y"], t["f1_z"]],
        [t["f2_x"], t["f2_y"], t["f2_z"]],
        [t["f3_x"], t["f3_y"], t["f3_z"]],
    ])
    det_j = float(np.linalg.det(J))
    checks.append(_check("P2", abs(det_j) > tol, {"det_J": det_j}))
    checks.append(_check("P3", abs(t["phi_x"]) <= tol and abs(t["phi_xx"]) > tol,
                         {"phi_x": t["phi_x"], "phi_xx": t["phi_xx"]}))
    product = t["f1_y"] * t["f2_x"] + t["f1_z"] * t["f3_x"]
    checks.append(_check("P4", product < 0, {"product": product}))
    bracket = p5_bracket(model, s) if abs(det_j) > tol else 0.0
    checks.append(ConditionCheck(
        name="P5", status=ConditionStatus.CHECKED_ELSEWHERE, evidence={"bracket": bracket},
        note="nonzero bracket; enters the normal form as the slope of alpha(h)",
    ))

    xz_model = model.with_params(params.with_h(e_xz.h))
    q = xz_model.partials(e_xz.state.as_array(), order=1)
    checks.append(_check(
        "Q1",
        q["chi"] < 0 and q["phi_x"] < 0 and q["psi_x"] > 0 and q["psi_z"] < 0 and q["phi_z"] < 0,
        {"chi": q["chi"], "phi_x": q["phi_x"], "psi_x": q["psi_x"], "psi_z": q["psi_z"], "phi_z": q["phi_z"]},
    ))
    for name, note in (
        ("Q2", "criticality from the first Lyapunov coefficient"),
        ("Q3", "cycle stabilisation observed in simulation only"),
        ("Q4", "separation by the stable-manifold tangent plane, observed in simulation"),
        ("Q5", "basin structure observed in simulation"),
    ):
        checks.append(ConditionCheck(name=name, status=ConditionStatus.EMPIRICAL, note=note))
    return ConditionReport(checks=checks)
