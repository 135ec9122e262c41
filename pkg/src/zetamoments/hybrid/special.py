"""Exponential integral E_1 and the Barnes G-function for complex arguments."""

from __future__ import annotations

import math

import numpy as np
from scipy.special import rgamma

__all__ = ["EULER_GAMMA", "exp_integral_e1", "e1_entire_part", "barnes_g", "log_barnes_g"]

EULER_GAMMA = 0.57721566490153286061
ZETA_PRIME_MINUS_ONE = -0.16542114370045092921
_SERIES_RADIUS = 4.0
_ASYMPTOTIC_RADIUS = 40.0


def e1_entire_part(z, terms: int = 60):
    """Ein(z) = Σ_{m≥1} (−1)^{m+1} z^m/(m·m!), so E_1(z) = −γ − log z + Ein(z)."""
    z = np.asarray(z, complex)
    term = np.array(z, copy=True)
    total = np.array(z, copy=True)
    for m in range(2, terms + 1):
        term = term * (-z) * (m - 1) / (m * m)
        total = total + term
    return total


def _e1_continued_fraction(z: np.ndarray) -> np.ndarray:
    # E_1(z) = e^{−z} / (z + 1 − 1²/(z + 3 − 2²/(z + 5 − …))), modified Lentz.
    tiny = 1e-300
    b = z + 1.0
    f = np.where(b == 0, tiny, b)
    c = f.copy()
    d = np.zeros_like(z)
    active = np.ones(z.shape, bool)
    for n in range(1, 400):
        a = -float(n * n)
        b = b + 2.0
        d = b + a * d
        d = np.where(d == 0, tiny, d)
        c = b + a / c
        c = np.where(c == 0, tiny, c)
        d = 1.0 / d
        delta = c * d
        f = np.where(active, f * delta, f)
        active &= np.abs(delta - 1.0) > 1e-16
        if not active.any():
            break
    return np.exp(-z) / f


def _e1_asymptotic(z: np.ndarray) -> np.ndarray:
    # e^{−z}/z Σ (−1)^n n!/z^n, truncated before the terms turn upward.
    inv = 1.0 / z
    term = np.ones_like(z)
    total = np.ones_like(z)
    for n in range(1, 40):
        term = term * (-n) * inv
        total = total + term
    return np.exp(-z) * inv * total


def exp_integral_e1(z):
    """Principal-branch E_1(z) = ∫_z^∞ e^{−t}/t dt for complex z (vectorized).

    Power series for |z| ≤ 4, continued fraction for 4 < |z| < 40, asymptotic
    series beyond.  On the left half-plane near the negative axis the series is
    used further out, where E_1 grows and the series does not cancel.
    """
    z = np.asarray(z, complex)
    if np.any(z == 0):
        raise ValueError("E1 has a logarithmic singularity at 0")
    if np.any((z.imag == 0) & (z.real < 0)):
        raise ValueError("E1 is evaluated off its branch cut (negative real axis)")
    out = np.empty(z.shape, complex)
    r = np.abs(z)
    use_series = (r <= _SERIES_RADIUS) | ((z.real < 0) & (np.abs(z.imag) < 0.5 * r) & (r <= 30))
    use_asym = (~use_series) & (r >= _ASYMPTOTIC_RADIUS) & (z.real > -0.5 * r)
    use_cf = ~(use_series | use_asym)
    if use_series.any():
        zs = z[use_series]
        terms = int(min(160, max(30, 2.5 * np.max(np.abs(zs)) + 30)))
        out[use_series] = -EULER_GAMMA - np.log(zs) + e1_entire_part(zs, terms)
    if use_asym.any():
        out[use_asym] = _e1_asymptotic(z[use_asym])
    if use_cf.any():
        out[use_cf] = _e1_continued_fraction(z[use_cf])
    return out if out.ndim else complex(out)


# ------------------------------------------------------------------ Barnes G

_BERNOULLI = [1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730, 7 / 6, -3617 / 510, 43867 / 798]


def _log_g_asymptotic(w: np.ndarray) -> np.ndarray:
    """log G(w+1) for large |w| (|arg w| < π)."""
    lw = np.log(w)
    s = 0.5 * w * w * lw - 0.75 * w * w + 0.5 * w * math.log(2 * math.pi) - lw / 12.0 + ZETA_PRIME_MINUS_ONE
    wp = w * w
    for kk, b in enumerate(_BERNOULLI[1:], start=1):
        s = s + b / (4 * kk * (kk + 1) * wp)
        wp = wp * w * w
    return s


def log_barnes_g(z, shift: int = 20):
    """log G(z) (one continuous branch) for z away from the non-positive integers."""
    z = np.asarray(z, complex)
    acc = np.zeros_like(z)
    for j in range(shift):
        acc = acc - np.log(rgamma(z + j))
    return _log_g_asymptotic(z + shift - 1) - acc


def barnes_g(z, shift: int = 20):
    """Barnes G(z) via G(z) = G(z+n) Π_{j<n} 1/Γ(z+j) and the Stirling-type expansion.

    The reciprocal gamma factors vanish at non-positive integers, so the zeros
    of G come out as exact zeros.
    """
    z = np.asarray(z, complex)
    prod = np.ones_like(z)
    for j in range(shift):
        prod = prod * rgamma(z + j)
    out = np.exp(_log_g_asymptotic(z + shift - 1)) * prod
    real_int = (z.imag == 0) & (z.real == np.round(z.real)) & (z.real >= 1) & (z.real <= 40)
    if np.any(real_int):
        out = np.where(real_int, _g_integer(z.real), out)
    return out if out.ndim else complex(out)


def _g_integer(x: np.ndarray) -> np.ndarray:
    def g(n: int) -> float:
        return float(math.prod(math.factorial(j) for j in range(1, n - 1)))

    return np.vectorize(lambda v: g(int(round(v))) if 1 <= v <= 40 and v == round(v) else np.nan)(x)
