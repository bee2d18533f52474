"""Normal form of the singular Hopf point: coefficients, coordinates and local geometry."""

from .coefficients import (
    alpha_of,
    coefficients_json,
    compute_coeffs,
    hopf_location,
    lyapunov_l1,
    omega_squared,
    transversality,
)
from .geometry import (
    eigenvalues_qe,
    funnel_threshold,
    in_funnel,
    lambda_hopf,
    linear_flow,
    nf_rhs,
    parametrized_subsystem_rhs,
    stable_manifold,
)
from .transform import VALIDITY_BOX, NormalFormTransform, to_normal_form, to_normal_form_trajectory

__all__ = [
    "alpha_of",
    "coefficients_json",
    "compute_coeffs",
    "eigenvalues_qe",
    "funnel_threshold",
    "hopf_location",
    "in_funnel",
    "lambda_hopf",
    "linear_flow",
    "lyapunov_l1",
    "nf_rhs",
    "NormalFormTransform",
    "omega_squared",
    "parametrized_subsystem_rhs",
    "stable_manifold",
    "to_normal_form",
    "to_normal_form_trajectory",
    "transversality",
    "VALIDITY_BOX",
]
