"""Moments of derivatives at zeros: CUE characteristic polynomials, a hybrid model and zeta data."""

__version__ = "0.1.0"

from .exact import MixedMomentSpec, derivative_moment, exact_derivative_moment, theorem3_prediction
from .numerics import AccuracyError
from .rmt import RngSeed, mixed_moment_mc, sample_cue

__all__ = [
    "__version__",
    "AccuracyError",
    "MixedMomentSpec",
    "RngSeed",
    "derivative_moment",
    "exact_derivative_moment",
    "mixed_moment_mc",
    "sample_cue",
    "theorem3_prediction",
]
