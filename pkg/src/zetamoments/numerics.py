"""Small numeric helpers shared across modules."""

from __future__ import annotations

import math

import numpy as np


class AccuracyError(ArithmeticError):
    """A computation could not reach its accuracy budget."""


def fsum_complex(values) -> complex:
    """Correctly rounded sum of complex values, independent of ordering tricks."""
    v = np.asarray(values, complex).ravel()
    return complex(math.fsum(v.real.tolist()), math.fsum(v.imag.tolist()))


def combine_estimate(values) -> tuple[complex, float]:
    """Mean and standard error of complex samples (real/imag SEs in quadrature)."""
    v = np.asarray(values, complex).ravel()
    n = v.size
    mean = fsum_complex(v) / n
    if n < 2:
        return mean, float("inf")
    dr = v.real - mean.real
    di = v.imag - mean.imag
    var = (math.fsum((dr * dr).tolist()) + math.fsum((di * di).tolist())) / (n - 1)
    return mean, math.sqrt(var / n)
