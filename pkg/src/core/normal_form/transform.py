"""Coordinate change from populations (x, y, z) to normal-form variables (u, v, w)."""

import math
from typing import Optional, Tuple

import numpy as np

from ...models.enums import CoordinateSystem, EquilibriumKind, ModelType, TimeUnit
from ...models.equilibrium import Equilibrium
from ...models.normal_form import NFState, NormalFormCoeffs
from ...models.params import ModelParams, State
from ...models.trajectory import Trajectory
from ..equilibria import find_equilibrium
from .coefficients import alpha_correction, fold_table

# |X|, |Y|, |Z| beyond this leave the region where the expansion is trusted.
VALIDITY_BOX = 10.0


class NormalFormTransform:
    """
    Pointwise map (x, y, z) -> (u, v, w) about the coexistence equilibrium E*(h).

    Derivatives are frozen at the FSN II point; the shift is the equilibrium at
    the current h, so E*(h) maps to the origin.
    """

    def __init__(self, fsn_point: Equilibrium, coeffs: NormalFormCoeffs, params: ModelParams,
                 equilibrium: Optional[Equilibrium] = None, leading_order: bool = False,
                 model_type: ModelType = ModelType.PREDATOR_PREY):
        self.coeffs = coeffs
        self.params = params
        self.leading_order = leading_order
        if equilibrium is None:
            equilibrium = find_equilibrium(params, EquilibriumKind.COEXISTENCE,
                                           fsn_point.state.as_array(), model_type)
        self.origin = equilibrium.state.as_array()
        self.t = fold_table(fsn_point, params, model_type)
        self.K = alpha_correction(self.t, coeffs.omega ** 2)

    def scaled(self, x, y, z) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        zeta = self.params.zeta
        x0, y0, z0 = self.origin
        return ((np.asarray(x, dtype=float) - x0) / math.sqrt(zeta),
                (np.asarray(y, dtype=float) - y0) / zeta,
                (np.asarray(z, dtype=float) - z0) / zeta)

    def apply(self, x, y, z):
        """(u, v, w, extrapolated) for scalars or arrays."""
        t = self.t
        w2 = self.coeffs.omega ** 2
        omega = self.coeffs.omega
        delta = self.coeffs.delta
        X, Y, Z = self.scaled(x, y, z)
        extrapolated = (np.abs(X) > VALIDITY_BOX) | (np.abs(Y) > VALIDITY_BOX) | (np.abs(Z) > VALIDITY_BOX)

        f1y, f1z, f1xx = t["f1_y"], t["f1_z"], t["f1_xx"]
        f2x, f2y, f2z, f2xx = t["f2_x"], t["f2_y"], t["f2_z"], t["f2_xx"]
        f3x, f3y, f3z, f3xx = t["f3_x"], t["f3_y"], t["f3_z"], t["f3_xx"]

        V = f1y * Y + f1z * Z
        v = (f1xx / w2) * V

        b_y, b_z = 1.0 + f2x * f1y / w2, f2x * f1z / w2
        c_y, c_z = f3x * f1y / w2, 1.0 + f3x * f1z / w2
        s2 = f2y * f2x + f2z * f3x
        s3 = f3y * f2x + f3z * f3x
        Wb = b_y * Y + b_z * Z
        Wc = c_y * Y + c_z * Z
        if not self.leading_order:
            Wb = Wb + delta * (b_y * s2 + b_z * s3) * X / omega
            Wc = Wc + delta * (c_y * s2 + c_z * s3) * X / omega
        w = -(f1xx * f1y / (w2 * f1z)) * Wb

        u = (f1xx / omega) * X
        # Second-order part: B1, B2 include the X^2 curvature of f2 and f3, the cubic
        # correction is u^2 (v - 1)/2 + v^2 and c_uv takes f2_xx, f3_xx. With these forms
        # the transformed flow stays within delta^2 of the normal form over one period.
        if not self.leading_order:
            B1 = (-(f1xx / w2 ** 2) * V * s2 + (f1xx * f2xx / (2.0 * w2)) * X ** 2
                  + (f2y * f1xx / w2) * Wb + (f2z * f1xx / w2) * Wc)
            B2 = (-(f1xx / w2 ** 2) * V * s3 + (f1xx * f3xx / (2.0 * w2)) * X ** 2
                  + (f3y * f1xx / w2) * Wb + (f3z * f1xx / w2) * Wc)
            u = u - delta * (f1y * B1 + f1z * B2)
            c_uv = -self.K - (t["f1_xy"] * f2x + t["f1_xz"] * f3x + f1y * f2xx + f1z * f3xx) / f1xx
            u = u + (delta / 3.0) * c_uv * (u * u * (-0.5 + v / 2.0) + v * v)
        return u, v, w, extrapolated

    def __call__(self, state: State) -> NFState:
        u, v, w, extrapolated = self.apply(state.x, state.y, state.z)
        return NFState(u=float(u), v=float(v), w=float(w), extrapolated=bool(extrapolated))


def to_normal_form(state: State, fsn_point: Equilibrium, coeffs: NormalFormCoeffs, params: ModelParams,
                   leading_order: bool = False) -> NFState:
    """Normal-form coordinates of one population state."""
    return NormalFormTransform(fsn_point, coeffs, params, leading_order=leading_order)(state)


def to_normal_form_trajectory(traj: Trajectory, fsn_point: Equilibrium, coeffs: NormalFormCoeffs,
                              params: ModelParams, leading_order: bool = False,
                              transform: Optional[NormalFormTransform] = None) -> Trajectory:
    """
    Pointwise transform of an (x, y, z) trajectory; time becomes tau = s / delta.

    Extrapolated samples are kept; their count is reported in ``message``.
    """
    if traj.coordinates != CoordinateSystem.XYZ:
        raise ValueError("expected an (x, y, z) trajectory")
    transform = transform or NormalFormTransform(fsn_point, coeffs, params, leading_order=leading_order)
    u, v, w, extrapolated = transform.apply(traj.states[:, 0], traj.states[:, 1], traj.states[:, 2])
    return Trajectory(
        t=traj.t / coeffs.delta,
        states=np.column_stack([u, v, w]),
        coordinates=CoordinateSystem.UVW,
        time_unit=TimeUnit.TAU,
        nfev=traj.nfev,
        n_steps=traj.n_steps,
        status=traj.status,
        message=f"transformed; {int(np.count_nonzero(extrapolated))} samples outside the validity box",
        event_times={k: [s / coeffs.delta for s in v_] for k, v_ in traj.event_times.items()},
        terminated_by=traj.terminated_by,
    )

