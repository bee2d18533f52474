"""Parameter-level entry points to the shipped model."""

from typing import Dict, Optional, Sequence, Union

import numpy as np

from ...models.enums import TimeScale
from ...models.params import ModelParams, State
from .factory import ModelFactory

StateLike = Union[State, Sequence[float], np.ndarray]


def _as_array(state: StateLike) -> np.ndarray:
    if isinstance(state, State):
        return state.as_array()
    return np.asarray(state, dtype=float)


def eval_rhs(state: StateLike, params: ModelParams, timescale: TimeScale = TimeScale.SLOW) -> np.ndarray:
    """Vector field of the predator-prey model at ``state``."""
    return ModelFactory.create_model(params=params).rhs(_as_array(state), timescale)


def partials(state: StateLike, params: ModelParams, order: int = 3) -> Dict[str, float]:
    """Analytic partials of phi, chi, psi and f1, f2, f3 up to ``order``."""
    return ModelFactory.create_model(params=params).partials(_as_array(state), order)


def jacobian(state: StateLike, params: ModelParams, timescale: TimeScale = TimeScale.SLOW) -> np.ndarray:
    return ModelFactory.create_model(params=params).jacobian(_as_array(state), timescale)


def fold_curve(params: ModelParams, xs: Optional[Sequence[float]] = None) -> np.ndarray:
    """
    Samples (x, y, z) of the fold curve phi = phi_x = 0 inside the positive octant.

    Args:
        params: Model parameters
        xs: Prey values to sample at; 200 points on (0, 1) by default

    Returns:
        Array of shape (n, 3); rows outside the octant are dropped
    """
    model = ModelFactory.create_model(params=params)
    xs = np.linspace(0.0, 1.0, 202)[1:-1] if xs is None else np.asarray(xs, dtype=float)
    rows = [pt for pt in (model.fold_point(float(x)) for x in xs)
            if pt is not None and pt[1] >= 0.0 and pt[2] >= 0.0]
    return np.array(rows).reshape(-1, 3)
