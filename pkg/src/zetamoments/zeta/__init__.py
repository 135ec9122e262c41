"""Zeta side: evaluation, zero datasets and discrete sums over zeros."""

from .cache import ResultCache
from .evaluate import ZetaEvalConfig, critical_line_derivatives, riemann_siegel_theta, siegel_z, zeta_derivative, zeta_eval
from .moments import (
    DiscreteMomentReport,
    PXSumReport,
    conjecture6_prediction,
    conjecture_prediction,
    discrete_moment,
    discrete_moment_checkpoints,
    discrete_power_moment,
    landau_empirical,
    p_x_sum_over_zeros,
)
from .zeros import ZeroDataset, ZeroFileError, generate_zeros, load_zeros, n_of_t, n_of_t_formula

__all__ = [
    "ZetaEvalConfig",
    "zeta_eval",
    "zeta_derivative",
    "siegel_z",
    "riemann_siegel_theta",
    "critical_line_derivatives",
    "ZeroDataset",
    "ZeroFileError",
    "load_zeros",
    "generate_zeros",
    "n_of_t",
    "n_of_t_formula",
    "DiscreteMomentReport",
    "PXSumReport",
    "conjecture_prediction",
    "conjecture6_prediction",
    "discrete_moment",
    "discrete_moment_checkpoints",
    "discrete_power_moment",
    "p_x_sum_over_zeros",
    "landau_empirical",
    "ResultCache",
]
