"""Normal-form coefficient and geometry models."""

from typing import Dict, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from .enums import Criticality

ArrayLike = Union[float, np.ndarray]


class NormalFormCoeffs(BaseModel):
    """Constants of the reduced (u, v, w) system at the FSN II point."""

    model_config = ConfigDict(frozen=True)

    omega: float = Field(..., gt=0.0, description="Frequency scale")
    delta: float = Field(..., ge=0.0, description="sqrt(zeta) / omega")
    F13: float
    F111: float
    H3: float
    H11: float
    alpha_slope: float = Field(..., description="d alpha / d h")
    alpha_intercept: float = Field(..., description="alpha at h = 0 of the affine map")
    h_fsn: float
    x_fsn: float
    y_fsn: float
    z_fsn: float
    zeta: float = Field(..., gt=0.0)

    def alpha(self, h: float) -> float:
        """Unfolding parameter alpha of the affine map h -> alpha."""
        return self.alpha_slope * h + self.alpha_intercept

    @property
    def sign_regime_ok(self) -> bool:
        """True in the bistable regime F13 > 0, F111 < 0, H3 > 0, H11 < 0."""
        return self.F13 > 0 and self.F111 < 0 and self.H3 > 0 and self.H11 < 0

    def to_export_dict(self) -> Dict[str, float]:
        keys = ("omega", "delta", "F13", "F111", "H3", "H11", "alpha_slope",
                "alpha_intercept", "h_fsn", "x_fsn", "y_fsn", "z_fsn")
        return {k: getattr(self, k) for k in keys}


class HopfLocation(BaseModel):
    """Root of alpha(h) and the order-zeta shift A from the fold point."""

    model_config = ConfigDict(frozen=True)

    h_hopf: float
    A: float


class LyapunovResult(BaseModel):
    """First Lyapunov coefficient of the singular Hopf point."""

    model_config = ConfigDict(frozen=True)

    l1: float
    bracket: float = Field(..., description="F111/2 - F13*H11/H3")
    criticality: Criticality


class NFState(BaseModel):
    """A point in normal-form coordinates."""

    model_config = ConfigDict(frozen=True)

    u: float
    v: float
    w: float
    tau: float = 0.0
    extrapolated: bool = Field(default=False, description="Source point outside the validity box")

    def as_array(self) -> np.ndarray:
        return np.array([self.u, self.v, self.w], dtype=float)


class EigenTriple(BaseModel):
    """Leading-order eigenvalues of the normal form at the origin."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    rho1: complex
    rho2: complex
    rho3: complex
    pair_stable: bool

    def as_tuple(self) -> Tuple[complex, complex, complex]:
        return self.rho1, self.rho2, self.rho3


class LinearFlowModel(BaseModel):
    """Closed-form first-order flow of the normal form."""

    model_config = ConfigDict(frozen=True)

    A: float = Field(..., ge=0.0)
    theta: float = Field(..., gt=0.0, le=1.0)
    phi1: float
    phi2: float
    Cc: float
    Dd: float
    K: float
    alpha: float
    delta: float
    H3: float
    H11: float
    u0: float
    v0: float
    w0: float

    def envelope(self, tau: ArrayLike) -> ArrayLike:
        return self.A * np.exp(self.alpha * self.delta * np.asarray(tau) / 2.0)

    def evaluate(self, tau: ArrayLike) -> Tuple[ArrayLike, ArrayLike, ArrayLike]:
        """(u, v, w) at normal-form time tau."""
        tau = np.asarray(tau, dtype=float)
        env = self.envelope(tau)
        u = env * np.sin(self.theta * tau + self.phi1)
        v = env * np.sin(self.theta * tau + self.phi2)
        half = 0.5 * self.delta * self.H11
        two = 2.0 * self.theta * tau
        w = (np.exp(self.delta * self.H3 * tau) * (self.w0 - half * (self.Cc + self.K))
             + half * np.exp(self.alpha * self.delta * tau)
             * (self.Cc * np.cos(two) + self.Dd * np.sin(two) + self.K))
        return u, v, w


class StableManifoldGraph(BaseModel):
    """Quadratic graph w = Theta(u, v) of the local stable manifold of the origin."""

    model_config = ConfigDict(frozen=True)

    theta_uu: float = Field(..., description="Second derivative in u")
    theta_vv: float = Field(..., description="Second derivative in v")
    theta_uv: float = Field(..., description="Coefficient of the uv cross term")
    alpha: float
    delta: float

    def evaluate(self, u: ArrayLike, v: ArrayLike) -> ArrayLike:
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        return 0.5 * self.theta_uu * u * u + 0.5 * self.theta_vv * v * v + self.theta_uv * u * v


class ParametrizedSpectrum(BaseModel):
    """The (u, v) subsystem with w frozen at lambda."""

    model_config = ConfigDict(frozen=True)

    lambda_hopf: float
    alpha: float
    delta: float
    F13: float

    def sigma(self, lam: float) -> Tuple[complex, complex]:
        trace = self.delta * (self.alpha + self.F13 * lam)
        root = complex(trace * trace - 4.0) ** 0.5
        return (trace + root) / 2.0, (trace - root) / 2.0

    def is_stable(self, lam: float) -> bool:
        return 0.0 < lam < self.lambda_hopf
