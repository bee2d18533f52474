"""Two predators competing for one fast prey with Holling type II responses."""

from typing import Dict, List, Optional, Sequence

import numpy as np
from scipy.optimize import brentq

from ...models.enums import EquilibriumKind
from ..errors import DomainError
from .base import SlowFastModel

# Grid used to bracket roots of the one-dimensional reductions.
_SCAN_POINTS = 400

_FALLBACK_GUESSES = {
    EquilibriumKind.COEXISTENCE: (0.3, 0.12, 0.42),
    EquilibriumKind.BOUNDARY_XZ: (0.35, 0.0, 0.6),
    EquilibriumKind.BOUNDARY_XY: (0.13, 0.28, 0.0),
}


class PredatorPreyModel(SlowFastModel):
    """
    phi = 1 - x - y/(beta1 + x) - z/(beta2 + x)
    chi = x/(beta1 + x) - c - a12*z
    psi = x/(beta2 + x) - d - a21*y - h*z
    """

    def _denominators(self, x):
        p1 = self.params.beta1 + x
        p2 = self.params.beta2 + x
        if np.any(np.asarray(p1) <= 0) or np.any(np.asarray(p2) <= 0):
            raise DomainError("Holling denominator beta + x must be positive", x=float(np.min(x)))
        return p1, p2

    def rates(self, x, y, z):
        p = self.params
        p1, p2 = self._denominators(x)
        phi = 1.0 - x - y / p1 - z / p2
        chi = x / p1 - p.c - p.a12 * z
        psi = x / p2 - p.d - p.a21 * y - p.h * z
        return phi, chi, psi

    def rate_partials(self, x: float, y: float, z: float, order: int = 3) -> Dict[str, float]:
        p = self.params
        p1, p2 = self._denominators(x)
        b1, b2 = p.beta1, p.beta2
        table = {
            "phi_x": -1.0 + y / p1 ** 2 + z / p2 ** 2,
            "phi_y": -1.0 / p1,
            "phi_z": -1.0 / p2,
            "chi_x": b1 / p1 ** 2,
            "chi_y": 0.0,
            "chi_z": -p.a12,
            "psi_x": b2 / p2 ** 2,
            "psi_y": -p.a21,
            "psi_z": -p.h,
        }
        if order >= 2:
            table.update({
                "phi_xx": -2.0 * y / p1 ** 3 - 2.0 * z / p2 ** 3,
                "phi_xy": 1.0 / p1 ** 2,
                "phi_xz": 1.0 / p2 ** 2,
                "chi_xx": -2.0 * b1 / p1 ** 3,
                "psi_xx": -2.0 * b2 / p2 ** 3,
            })
        if order >= 3:
            table.update({
                "phi_xxx": 6.0 * y / p1 ** 4 + 6.0 * z / p2 ** 4,
                "phi_xxy": -2.0 / p1 ** 3,
                "phi_xxz": -2.0 / p2 ** 3,
                "chi_xxx": 6.0 * b1 / p1 ** 4,
                "psi_xxx": 6.0 * b2 / p2 ** 4,
            })
        return table

    def parameter_partials(self, x: float, y: float, z: float) -> Dict[str, float]:
        # h enters psi only
        return {"phi_p": 0.0, "chi_p": 0.0, "psi_p": -z, "phi_xp": 0.0}

    def fold_point(self, x: float) -> Optional[np.ndarray]:
        """The point of the fold curve (phi = 0, phi_x = 0) above ``x``, if nondegenerate."""
        p1, p2 = self._denominators(x)
        A = np.array([[1.0 / p1, 1.0 / p2], [1.0 / p1 ** 2, 1.0 / p2 ** 2]])
        if abs(np.linalg.det(A)) < 1e-14:
            return None
        y, z = np.linalg.solve(A, np.array([1.0 - x, 1.0]))
        return np.array([x, y, z])

    def transcritical_curve(self, y: np.ndarray) -> np.ndarray:
        """z on the curve phi(0, y, z) = 0 of the yz-plane."""
        return self.params.beta2 * (1.0 - np.asarray(y, dtype=float) / self.params.beta1)

    def _coexistence_candidates(self) -> List[np.ndarray]:
        p = self.params
        x_lo = p.c * p.beta1 / (1.0 - p.c)

        def reduced(x):
            z = (x / (p.beta1 + x) - p.c) / p.a12
            y = (p.beta1 + x) * (1.0 - x - z / (p.beta2 + x))
            return y, z

        def psi_of(x):
            y, z = reduced(x)
            return x / (p.beta2 + x) - p.d - p.a21 * y - p.h * z

        return _scan_roots(psi_of, x_lo, 1.0, lambda x: np.array([x, *reduced(x)]))

    def _xz_candidates(self) -> List[np.ndarray]:
        p = self.params

        def psi_of(x):
            z = (1.0 - x) * (p.beta2 + x)
            return x / (p.beta2 + x) - p.d - p.h * z

        return _scan_roots(psi_of, 0.0, 1.0, lambda x: np.array([x, 0.0, (1.0 - x) * (p.beta2 + x)]))

    def initial_guess(self, kind: EquilibriumKind, hint: Optional[Sequence[float]] = None) -> np.ndarray:
        p = self.params
        if kind == EquilibriumKind.ORIGIN:
            return np.zeros(3)
        if kind == EquilibriumKind.AXIAL:
            return np.array([1.0, 0.0, 0.0])
        if kind == EquilibriumKind.BOUNDARY_XY:
            x = p.c * p.beta1 / (1.0 - p.c)
            return np.array([x, (1.0 - x) * (p.beta1 + x), 0.0])

        if kind == EquilibriumKind.COEXISTENCE:
            candidates = [c for c in self._coexistence_candidates() if c[1] > 0 and c[2] > 0]
        else:
            candidates = [c for c in self._xz_candidates() if c[2] > 0]
        if not candidates:
            return np.array(_FALLBACK_GUESSES[kind], dtype=float)
        if hint is None:
            return candidates[0]
        hint = np.asarray(hint, dtype=float)
        return min(candidates, key=lambda c: float(np.linalg.norm(c - hint)))


def _scan_roots(func, lo: float, hi: float, lift) -> List[np.ndarray]:
    """Roots of ``func`` on (lo, hi) bracketed on a uniform grid, lifted to states."""
    grid = np.linspace(lo, hi, _SCAN_POINTS + 2)[1:-1]
    values = np.array([func(x) for x in grid])
    roots = []
    for a, b, fa, fb in zip(grid[:-1], grid[1:], values[:-1], values[1:]):
        if fa == 0.0:
            roots.append(lift(a))
        elif fa * fb < 0.0:
            roots.append(lift(brentq(func, a, b, xtol=1e-14, rtol=1e-14)))
    return roots
