"""Hybrid Euler–Hadamard model: kernel, phase function F_X and the matrix model."""

from .fx import HybridParams, closed_form_series, f_x_derivative, f_x_eval, s_m_closed_form, s_m_numeric
from .kernel import SmoothingKernel
from .model import (
    FisherHartwigExponents,
    FourierPhase,
    assembled_theorem13,
    ehrhardt_silbermann_asymptotic,
    hybrid_exact_toeplitz,
    hybrid_moment_mc,
    theorem13_prediction,
    z_nx_prime_at_eigenvalue,
)

__all__ = [
    "HybridParams",
    "SmoothingKernel",
    "FourierPhase",
    "FisherHartwigExponents",
    "f_x_eval",
    "f_x_derivative",
    "s_m_closed_form",
    "s_m_numeric",
    "closed_form_series",
    "hybrid_moment_mc",
    "hybrid_exact_toeplitz",
    "theorem13_prediction",
    "assembled_theorem13",
    "ehrhardt_silbermann_asymptotic",
    "z_nx_prime_at_eigenvalue",
]
