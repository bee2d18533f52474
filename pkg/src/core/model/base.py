"""Abstract slow-fast model interface.

A model supplies the per-capita rates phi, chi, psi and their partial
derivatives. Everything assembled from them (the f-partials, Jacobians,
right-hand sides) is shared here.
"""

import math
from abc import ABC, abstractmethod
from typing import Dict, Optional, Sequence

import numpy as np

from ...models.enums import EquilibriumKind, TimeScale
from ...models.params import ModelParams
from ..errors import DomainError

# Partials of phi, chi, psi a model must provide, by order. Missing keys are zero.
PARTIAL_KEYS = {
    1: ("phi_x", "phi_y", "phi_z", "chi_x", "chi_y", "chi_z", "psi_x", "psi_y", "psi_z"),
    2: ("phi_xx", "phi_xy", "phi_xz", "phi_yy", "phi_yz", "phi_zz",
        "chi_xx", "chi_xy", "chi_xz", "psi_xx", "psi_xy", "psi_xz"),
    3: ("phi_xxx", "phi_xxy", "phi_xxz", "chi_xxx", "psi_xxx"),
}


class SlowFastModel(ABC):
    """x' = x*phi/zeta, y' = y*chi, z' = z*psi in slow time."""

    def __init__(self, params: ModelParams):
        self.params = params

    @property
    def zeta(self) -> float:
        return self.params.zeta

    @abstractmethod
    def rates(self, x, y, z):
        """(phi, chi, psi); accepts scalars or equally shaped arrays."""

    @abstractmethod
    def rate_partials(self, x: float, y: float, z: float, order: int = 3) -> Dict[str, float]:
        """Closed-form partials of phi, chi, psi up to ``order``."""

    @abstractmethod
    def parameter_partials(self, x: float, y: float, z: float) -> Dict[str, float]:
        """Derivatives with respect to the bifurcation parameter: phi_p, chi_p, psi_p, phi_xp."""

    @abstractmethod
    def initial_guess(self, kind: EquilibriumKind, hint: Optional[Sequence[float]] = None) -> np.ndarray:
        """A starting point for the equilibrium solver."""

    def with_params(self, params: ModelParams) -> "SlowFastModel":
        return type(self)(params)

    @staticmethod
    def check_finite(state: Sequence[float]) -> np.ndarray:
        values = np.asarray(state, dtype=float)
        if values.shape != (3,) or not np.all(np.isfinite(values)):
            raise DomainError(f"State must be three finite numbers, got {state!r}")
        return values

    def rhs(self, state: Sequence[float], timescale: TimeScale = TimeScale.SLOW) -> np.ndarray:
        """Vector field in slow time (x*phi/zeta, y*chi, z*psi) or fast time (x*phi, zeta*y*chi, zeta*z*psi)."""
        x, y, z = self.check_finite(state)
        phi, chi, psi = self.rates(x, y, z)
        if timescale == TimeScale.SLOW:
            return np.array([x * phi / self.zeta, y * chi, z * psi])
        return np.array([x * phi, self.zeta * y * chi, self.zeta * z * psi])

    def rhs_unchecked(self, t: float, s: np.ndarray) -> np.ndarray:
        """Slow-time field in solve_ivp's signature."""
        phi, chi, psi = self.rates(s[0], s[1], s[2])
        return np.array([s[0] * phi / self.zeta, s[1] * chi, s[2] * psi])

    def partials(self, state: Sequence[float], order: int = 3) -> Dict[str, float]:
        """Partials of phi, chi, psi plus those of f1 = x*phi, f2 = y*chi, f3 = z*psi."""
        if order not in (1, 2, 3):
            raise ValueError(f"order must be 1, 2 or 3, got {order}")
        x, y, z = self.check_finite(state)
        phi, chi, psi = self.rates(x, y, z)
        raw = self.rate_partials(x, y, z, order)
        table = {"phi": phi, "chi": chi, "psi": psi}
        for level in range(1, order + 1):
            for key in PARTIAL_KEYS[level]:
                table[key] = float(raw.get(key, 0.0))
        g = table.get

        table.update({
            "f1_x": phi + x * g("phi_x"),
            "f1_y": x * g("phi_y"),
            "f1_z": x * g("phi_z"),
            "f2_x": y * g("chi_x"),
            "f2_y": chi + y * g("chi_y"),
            "f2_z": y * g("chi_z"),
            "f3_x": z * g("psi_x"),
            "f3_y": z * g("psi_y"),
            "f3_z": psi + z * g("psi_z"),
        })
        if order >= 2:
            table.update({
                "f1_xx": 2.0 * g("phi_x") + x * g("phi_xx"),
                "f1_xy": g("phi_y") + x * g("phi_xy"),
                "f1_xz": g("phi_z") + x * g("phi_xz"),
                "f2_xx": y * g("chi_xx"),
                "f2_xy": g("chi_x") + y * g("chi_xy"),
                "f2_xz": y * g("chi_xz"),
                "f3_xx": z * g("psi_xx"),
                "f3_xy": z * g("psi_xy"),
                "f3_xz": g("psi_x") + z * g("psi_xz"),
            })
        if order >= 3:
            table["f1_xxx"] = 3.0 * g("phi_xx") + x * g("phi_xxx")

        p = self.parameter_partials(x, y, z)
        table.update({
            "f1_p": x * p.get("phi_p", 0.0),
            "f2_p": y * p.get("chi_p", 0.0),
            "f3_p": z * p.get("psi_p", 0.0),
            "f1_xp": p.get("phi_p", 0.0) + x * p.get("phi_xp", 0.0),
        })
        for key, value in table.items():
            if not math.isfinite(value):
                raise DomainError(f"Partial '{key}' is not finite at {(x, y, z)}")
        return table

    def jacobian(self, state: Sequence[float], timescale: TimeScale = TimeScale.SLOW) -> np.ndarray:
        """Jacobian of ``rhs`` in the requested time scale."""
        t = self.partials(state, order=1)
        J = np.array([
            [t["f1_x"], t["f1_y"], t["f1_z"]],
            [t["f2_x"], t["f2_y"], t["f2_z"]],
            [t["f3_x"], t["f3_y"], t["f3_z"]],
        ])
        if timescale == TimeScale.SLOW:
            J[0] /= self.zeta
        else:
            J[1:] *= self.zeta
        return J

    def equilibrium_residual(self, state: Sequence[float]) -> float:
        """Max-norm of (x*phi, y*chi, z*psi)."""
        x, y, z = self.check_finite(state)
        phi, chi, psi = self.rates(x, y, z)
        return float(max(abs(x * phi), abs(y * chi), abs(z * psi)))
