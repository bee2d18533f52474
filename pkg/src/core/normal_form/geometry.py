"""Local geometry of the truncated normal form near the origin."""

import cmath
import math
from typing import Callable

import numpy as np

from ...models.normal_form import (
    EigenTriple,
    LinearFlowModel,
    NFState,
    NormalFormCoeffs,
    ParametrizedSpectrum,
    StableManifoldGraph,
)
from ..errors import DegenerateError, OscillatoryRegimeError
from ..logging import get_logger

logger = get_logger(__name__)


def nf_rhs(coeffs: NormalFormCoeffs, alpha: float) -> Callable[[float, np.ndarray], np.ndarray]:
    """Truncated normal-form vector field in solve_ivp's signature."""
    d, F13, F111 = coeffs.delta, coeffs.F13, coeffs.F111
    H3, H11 = coeffs.H3, coeffs.H11

    def rhs(tau: float, s: np.ndarray) -> np.ndarray:
        u, v, w = s
        return np.array([
            v + 0.5 * u * u + d * (alpha * u + F13 * u * w + F111 * u ** 3 / 6.0),
            -u,
            d * (H3 * w + 0.5 * H11 * u * u),
        ])

    return rhs


def eigenvalues_qe(coeffs: NormalFormCoeffs, alpha: float) -> EigenTriple:
    """rho1 = delta*H3 and rho2,3 = (alpha*delta +- sqrt(alpha^2 delta^2 - 4))/2."""
    ad = alpha * coeffs.delta
    root = cmath.sqrt(ad * ad - 4.0)
    if coeffs.delta > 0 and alpha < -1.0 / coeffs.delta:
        logger.log_discrepancy("pair_stability_range", -1.0 / coeffs.delta, alpha,
                               note="leading-order pair stays stable; published range ends near -1/delta")
    return EigenTriple(
        rho1=complex(coeffs.delta * coeffs.H3, 0.0),
        rho2=(ad + root) / 2.0,
        rho3=(ad - root) / 2.0,
        pair_stable=ad < 0.0,
    )


def linear_flow(initial: NFState, coeffs: NormalFormCoeffs, alpha: float) -> LinearFlowModel:
    """
    Closed-form first-order flow from ``initial``.

    Raises:
        OscillatoryRegimeError: If 1 - alpha^2 delta^2 / 4 <= 0
        DegenerateError: If alpha equals H3
    """
    d = coeffs.delta
    ad = alpha * d
    theta_sq = 1.0 - ad * ad / 4.0
    if theta_sq <= 0.0:
        raise OscillatoryRegimeError(f"alpha*delta = {ad:.4g} leaves the oscillatory regime", alpha=alpha)
    if alpha == coeffs.H3:
        raise DegenerateError("alpha equals H3; the forced response is resonant", alpha=alpha)
    theta = math.sqrt(theta_sq)
    u0, v0, w0 = initial.u, initial.v, initial.w
    A = math.sqrt(max(u0 * u0 + ad * u0 * v0 + v0 * v0, 0.0)) / theta
    phi1 = math.atan2(2.0 * theta * u0, 2.0 * v0 + ad * u0)
    phi2 = math.atan2(2.0 * theta * v0, -(2.0 * u0 + ad * v0))

    a = d * (alpha - coeffs.H3)
    b = 2.0 * theta
    P = -0.5 * A * A * math.cos(2.0 * phi1)
    Q = 0.5 * A * A * math.sin(2.0 * phi1)
    denom = a * a + b * b
    return LinearFlowModel(
        A=A, theta=theta, phi1=phi1, phi2=phi2,
        Cc=(a * P - b * Q) / denom,
        Dd=(a * Q + b * P) / denom,
        K=A * A / (2.0 * a),
        alpha=alpha, delta=d, H3=coeffs.H3, H11=coeffs.H11,
        u0=u0, v0=v0, w0=w0,
    )


def stable_manifold(coeffs: NormalFormCoeffs, alpha: float) -> StableManifoldGraph:
    """Quadratic graph of the local stable manifold of the origin."""
    gap = alpha - coeffs.H3
    if gap == 0.0:
        raise DegenerateError("alpha equals H3; stable-manifold graph undefined", alpha=alpha)
    second = coeffs.H11 / (2.0 * gap)
    return StableManifoldGraph(
        theta_uu=second,
        theta_vv=second,
        theta_uv=coeffs.delta * coeffs.H3 * coeffs.H11 / (4.0 * gap),
        alpha=alpha,
        delta=coeffs.delta,
    )


def funnel_threshold(u, v, coeffs: NormalFormCoeffs):
    """-(H11 / (2 H3)) (u^2 + v^2)."""
    return -(coeffs.H11 / (2.0 * coeffs.H3)) * (np.asarray(u) ** 2 + np.asarray(v) ** 2)


def in_funnel(nf: NFState, coeffs: NormalFormCoeffs) -> bool:
    return bool(nf.w >= funnel_threshold(nf.u, nf.v, coeffs))


def lambda_hopf(coeffs: NormalFormCoeffs, alpha: float) -> ParametrizedSpectrum:
    """Hopf value -alpha/F13 of the (u, v) subsystem with w frozen, plus its spectrum."""
    if coeffs.F13 == 0.0:
        raise DegenerateError("F13 vanishes; the frozen-w subsystem has no Hopf point")
    return ParametrizedSpectrum(lambda_hopf=-alpha / coeffs.F13, alpha=alpha,
                                delta=coeffs.delta, F13=coeffs.F13)


def parametrized_subsystem_rhs(coeffs: NormalFormCoeffs, alpha: float,
                               lam: float) -> Callable[[float, np.ndarray], np.ndarray]:
    """(u, v) field with w frozen at ``lam``."""
    d, F13, F111 = coeffs.delta, coeffs.F13, coeffs.F111

    def rhs(tau: float, s: np.ndarray) -> np.ndarray:
        u, v = s
        return np.array([v + 0.5 * u * u + d * (alpha * u + F13 * u * lam + F111 * u ** 3 / 6.0), -u])

    return rhs
