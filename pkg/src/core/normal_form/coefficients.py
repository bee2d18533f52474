"""Normal-form constants at the FSN II point, Hopf location and criticality."""

import math
from typing import Dict, Tuple, Union

import numpy as np

from ...models.enums import Criticality, ModelType
from ...models.equilibrium import Equilibrium
from ...models.normal_form import HopfLocation, LyapunovResult, NormalFormCoeffs
from ...models.params import ModelParams
from ..errors import DegenerateError
from ..logging import get_logger
from ..model import ModelFactory

logger = get_logger(__name__)

# l1 value reported alongside the bracket in published tables
_PUBLISHED_L1 = 0.0934


def fold_table(fsn_point: Equilibrium, params: ModelParams,
               model_type: ModelType = ModelType.PREDATOR_PREY) -> Dict[str, float]:
    """Third-order derivative table at the fold point, evaluated at h_fsn."""
    model = ModelFactory.create_model(model_type, params.with_h(fsn_point.h))
    return model.partials(fsn_point.state.as_array(), order=3)


def omega_squared(t: Dict[str, float]) -> float:
    """-(f1_y f2_x + f1_z f3_x); positive exactly when the fold has singular imaginary parts."""
    return -(t["f1_y"] * t["f2_x"] + t["f1_z"] * t["f3_x"])


def alpha_correction(t: Dict[str, float], w2: float) -> float:
    """Order-one shift of alpha at h = h_fsn."""
    return (t["f1_y"] * (t["f2_y"] * t["f2_x"] + t["f2_z"] * t["f3_x"])
            + t["f1_z"] * (t["f3_y"] * t["f2_x"] + t["f3_z"] * t["f3_x"])) / w2


def transversality(t: Dict[str, float]) -> float:
    """-(f1_xx, f1_xy, f1_xz) J^-1 f_p + f1_xp; the slope of alpha in (h - h_fsn)/zeta."""
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


def _f13(t: Dict[str, float], x: float, y: float, z: float, w2: float) -> float:
    return (x * t["phi_z"] * (z * t["psi_z"] - y * t["chi_y"])
            + (x / t["phi_y"]) * (y * t["phi_y"] ** 2 * t["chi_z"] - z * t["phi_z"] ** 2 * t["psi_y"])
            + w2 / (t["phi_xx"] * t["phi_y"]) * (t["phi_xz"] * t["phi_y"] - t["phi_xy"] * t["phi_z"]))


def _f111(t: Dict[str, float], x: float, y: float, z: float, w2: float) -> float:
    first = w2 / (x ** 2 * t["phi_xx"] ** 2) * (3.0 * t["phi_xx"] + x * t["phi_xxx"])
    second = (x / w2) * (
        y * t["chi_x"] * (y * t["phi_y"] * t["chi_y"] + z * t["phi_z"] * t["psi_y"])
        + z * t["psi_x"] * (y * t["phi_y"] * t["chi_z"] + z * t["phi_z"] * t["psi_z"]))
    third = (1.0 / (x * t["phi_xx"])) * (
        y * t["chi_x"] * (t["phi_y"] + x * t["phi_xy"])
        + z * t["psi_x"] * (t["phi_z"] + x * t["phi_xz"])
        + x * (y * t["phi_y"] * t["chi_xx"] + z * t["phi_z"] * t["psi_xx"]))
    return first + second + third


def _h3_h11(t: Dict[str, float], w2: float) -> Tuple[float, float]:
    P = t["f3_x"] * t["f2_y"] - t["f2_x"] * t["f3_y"]
    Q = t["f3_x"] * t["f2_z"] - t["f2_x"] * t["f3_z"]
    H3 = (Q * t["f1_y"] - P * t["f1_z"]) / w2
    H11 = (t["f1_y"] * (t["f3_x"] * t["f2_xx"] - t["f2_x"] * t["f3_xx"]) / (w2 * t["f1_xx"])
           + t["f1_y"] / w2 ** 2 * (P * t["f2_x"] + Q * t["f3_x"]))
    return H3, H11


def compute_coeffs(fsn_point: Equilibrium, params: ModelParams,
                   model_type: ModelType = ModelType.PREDATOR_PREY) -> NormalFormCoeffs:
    """
    Normal-form constants at the FSN II point.

    Args:
        fsn_point: Coexistence equilibrium on the fold, as returned by find_fsn2
        params: Model parameters (h is taken from ``fsn_point``)

    Raises:
        DegenerateError: If omega is undefined, det J vanishes or phi_xx is zero
    """
    t = fold_table(fsn_point, params, model_type)
    x, y, z = fsn_point.state.as_array()
    w2 = omega_squared(t)
    if w2 <= 0.0:
        raise DegenerateError("(f1_y, f1_z).(f2_x, f3_x) must be negative for a singular Hopf point",
                              product=-w2)
    if abs(t["phi_xx"]) < 1e-14 or abs(t["f1_xx"]) < 1e-14:
        raise DegenerateError("phi_xx vanishes at the fold point")
    slope_scaled = transversality(t)
    omega = math.sqrt(w2)
    zeta = params.zeta
    H3, H11 = _h3_h11(t, w2)
    slope = slope_scaled / zeta
    coeffs = NormalFormCoeffs(
        omega=omega,
        delta=math.sqrt(zeta) / omega,
        F13=_f13(t, x, y, z, w2),
        F111=_f111(t, x, y, z, w2),
        H3=H3,
        H11=H11,
        alpha_slope=slope,
        alpha_intercept=-slope * fsn_point.h - alpha_correction(t, w2),
        h_fsn=fsn_point.h,
        x_fsn=x,
        y_fsn=y,
        z_fsn=z,
        zeta=zeta,
    )
    if not coeffs.sign_regime_ok:
        logger.log_discrepancy("sign_regime", "F13>0, F111<0, H3>0, H11<0",
                               {"F13": coeffs.F13, "F111": coeffs.F111, "H3": coeffs.H3, "H11": coeffs.H11})
    return coeffs


def alpha_of(coeffs: NormalFormCoeffs, h: float) -> float:
    return coeffs.alpha(h)


def hopf_location(coeffs: NormalFormCoeffs) -> HopfLocation:
    """Root h_H of alpha(h) and the shift A with h_H = h_fsn + zeta*A."""
    if coeffs.alpha_slope == 0.0:
        raise DegenerateError("alpha(h) has zero slope")
    h_hopf = -coeffs.alpha_intercept / coeffs.alpha_slope
    return HopfLocation(h_hopf=h_hopf, A=(h_hopf - coeffs.h_fsn) / coeffs.zeta)


def lyapunov_l1(coeffs: NormalFormCoeffs) -> LyapunovResult:
    """First Lyapunov coefficient (delta/4)*(F111/2 - F13*H11/H3)."""
    if coeffs.H3 == 0.0:
        raise DegenerateError("H3 vanishes; first Lyapunov coefficient undefined")
    bracket = coeffs.F111 / 2.0 - coeffs.F13 * coeffs.H11 / coeffs.H3
    l1 = coeffs.delta / 4.0 * bracket
    if l1 > 0:
        criticality = Criticality.SUBCRITICAL
    elif l1 < 0:
        criticality = Criticality.SUPERCRITICAL
    else:
        criticality = Criticality.DEGENERATE
    logger.log_discrepancy("lyapunov_l1", _PUBLISHED_L1, {"l1": l1, "bracket": bracket},
                           note="published value matches the bracket, not (delta/4)*bracket", level="debug")
    return LyapunovResult(l1=l1, bracket=bracket, criticality=criticality)


def coefficients_json(coeffs: NormalFormCoeffs, hopf: HopfLocation = None,
                      lyapunov: LyapunovResult = None) -> Dict[str, Union[float, str]]:
    """Flat export of the coefficients, optionally with Hopf and criticality data."""
    payload: Dict[str, Union[float, str]] = dict(coeffs.to_export_dict())
    if hopf is not None:
        payload["h_hopf"] = hopf.h_hopf
        payload["hopf_shift_A"] = hopf.A
    if lyapunov is not None:
        payload["lyapunov_l1"] = lyapunov.l1
        payload["lyapunov_bracket"] = lyapunov.bracket
        payload["criticality"] = lyapunov.criticality.value
    return payload
