"""Slow-fast model implementations behind a common interface."""

from .base import PARTIAL_KEYS, SlowFastModel
from .factory import ModelFactory
from .predator_prey import PredatorPreyModel
from .vector_field import eval_rhs, fold_curve, jacobian, partials

__all__ = [
    "PARTIAL_KEYS",
    "SlowFastModel",
    "PredatorPreyModel",
    "ModelFactory",
    "eval_rhs",
    "fold_curve",
    "jacobian",
    "partials",
]
