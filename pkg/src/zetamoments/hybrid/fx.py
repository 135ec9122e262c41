"""The regularized phase function F_X and its Fourier coefficients s_m.

    F_X(ϑ) = −log(1 − e^{−iϑ}) − Σ_j U(i(ϑ + 2πj) log X)

is 2π-periodic and smooth.  Its Fourier coefficients have the closed form

    s_m(k) = k/m · (1 − ∫_1^{e^{m/log X}} u(y) dy)   for 1 ≤ m < log X,

and vanish otherwise; ``s_m_numeric`` recovers them by trapezoidal quadrature
of the definition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .kernel import SmoothingKernel


__all__ = [
    "HybridParams",
    "f_x_eval",
    "f_x_derivative",
    "f_x_grid",
    "s_m_closed_form",
    "s_m_numeric",
    "closed_form_series",
    "log_series_coefficient",
]

SMALL_THETA = 1e-3
TAIL_TOL = 1e-15
_J_BLOCK = 24


@dataclass(frozen=True)
class HybridParams:
    """Cutoff X (given through log X), matrix size N and smoothing kernel."""

    log_x: float
    kernel: SmoothingKernel
    N: int = 1

    def __post_init__(self):
        if self.log_x < math.log(2.0) - 1e-12:
            raise ValueError("X must be at least 2")
        if self.N < 1:
            raise ValueError("N must be positive")

    @classmethod
    def from_x(cls, X: float, kernel: SmoothingKernel, N: int = 1) -> "HybridParams":
        return cls(math.log(X), kernel, N)

    @property
    def X(self) -> float:
        return math.exp(self.log_x)

    @property
    def max_mode(self) -> int:
        """Largest m with possibly non-zero s_m (m < log X)."""
        return int(math.ceil(self.log_x)) - 1


def _wrap(theta) -> np.ndarray:
    t = np.asarray(theta, float)
    return t - 2.0 * math.pi * np.floor((t + math.pi) / (2.0 * math.pi))


def _one_minus_exp_over(theta: np.ndarray) -> np.ndarray:
    """(1 − e^{−iϑ})/(iϑ), accurate at small ϑ."""
    w = -1j * theta
    series = 1 + w / 2 + w * w / 6 + w**3 / 24 + w**4 / 120
    with np.errstate(divide="ignore", invalid="ignore"):
        direct = -np.expm1(w) / (1j * theta)
    return np.where(np.abs(theta) < SMALL_THETA, series, direct)


def _image_sum(params: HybridParams, theta: np.ndarray, fn) -> np.ndarray:
    """Σ_{j≠0} fn((ϑ + 2πj) log X), truncated once a block of j adds < TAIL_TOL.

    ``fn`` takes the real ordinate t and returns the term at z = it.
    """
    L = params.log_x
    total = np.zeros(theta.shape, complex)
    j0 = 1
    while True:
        js = np.arange(j0, j0 + _J_BLOCK)
        shifts = 2.0 * math.pi * np.concatenate([js, -js])
        block = fn(L * (theta[..., None] + shifts)).sum(axis=-1)
        total = total + block
        if np.max(np.abs(block), initial=0.0) < TAIL_TOL or j0 > 20000:
            return total
        j0 += _J_BLOCK


def f_x_eval(params: HybridParams, theta):
    """F_X(ϑ), vectorized over ϑ."""
    th = _wrap(theta)
    K = params.kernel
    L = params.log_x
    small = np.abs(th) < SMALL_THETA
    out = np.empty(th.shape, complex)
    if np.any(small):
        ts = th[small]
        # −log(1 − e^{−iϑ}) − U(z) = −log((1 − e^{−iϑ})/z) − W(z),  z = iϑ log X.
        out[small] = -np.log(_one_minus_exp_over(ts) / L) - K.big_u_regular(1j * ts * L)
    if np.any(~small):
        tb = th[~small]
        out[~small] = -np.log(-np.expm1(-1j * tb)) - K.big_u_imag(tb * L)
    out = out - _image_sum(params, th, K.big_u_imag)
    return out if out.ndim else complex(out)


def f_x_derivative(params: HybridParams, theta):
    """F_X'(ϑ), using U'(z) = −(1/z)∫ f e^{−zℓ} dx."""
    th = _wrap(theta)
    K = params.kernel
    L = params.log_x
    small = np.abs(th) < SMALL_THETA
    out = np.empty(th.shape, complex)
    if np.any(small):
        ts = th[small]
        z = 1j * ts * L
        # d/dϑ of −log((1 − e^{−iϑ})/(iϑ)) is −(i/(e^{iϑ} − 1) − 1/ϑ).
        near = 0.5j + ts / 12.0 - ts**3 / 720.0
        ell, w = K._nodes(K.nodes)
        # W'(z) = U'(z) + 1/z = (1/z)∫ f (1 − e^{−zℓ}) dx, via expm1.
        wprime = np.where(
            z == 0,
            ell @ w,
            (-np.expm1(-np.multiply.outer(z, ell)) @ w) / np.where(z == 0, 1, z),
        )
        out[small] = near - 1j * L * wprime
    if np.any(~small):
        tb = th[~small]
        e = np.exp(-1j * tb)
        out[~small] = -1j * e / (1.0 - e) - 1j * L * K.big_u_prime(1j * tb * L)
    out = out - 1j * L * _image_sum(params, th, lambda t: K.big_u_prime(1j * t))
    return out if out.ndim else complex(out)


# ------------------------------------------------------------- coefficients


def s_m_closed_form(params: HybridParams, k: complex, m: int) -> complex:
    """k/m (1 − ∫_1^{e^{m/log X}} u) for 1 ≤ m < log X, else 0."""
    if m <= 0 or m >= params.log_x:
        return 0j
    return k / m * (1.0 - params.kernel.mass(1.0, math.exp(m / params.log_x)))


def closed_form_series(params: HybridParams, k: complex = 1.0) -> np.ndarray:
    """[s_1, …, s_M] with M = params.max_mode (closed form)."""
    return np.array([s_m_closed_form(params, k, m) for m in range(1, params.max_mode + 1)], complex)


_GRID_CACHE: dict = {}


def f_x_grid(params: HybridParams, nodes: int = 4096) -> np.ndarray:
    """F_X at ϑ_l = 2πl/n, l = 0..n−1 (conjugate symmetry halves the work)."""
    key = (params.log_x, params.kernel.Y, params.kernel.nodes, nodes)
    if key not in _GRID_CACHE:
        half = np.arange(nodes // 2 + 1) * (2.0 * math.pi / nodes)
        vals = f_x_eval(params, half)
        full = np.empty(nodes, complex)
        full[: half.size] = vals
        full[half.size :] = np.conj(vals[1 : nodes - half.size + 1][::-1])
        _GRID_CACHE[key] = full
    return _GRID_CACHE[key]


def s_m_numeric(params: HybridParams, k: complex, m, nodes: int = 4096):
    """(1/2π)∫ kF_X(−ϑ) e^{−imϑ} dϑ by the periodic trapezoid rule."""
    grid = f_x_grid(params, nodes)
    # Σ_l F_X(−ϑ_l) e^{−imϑ_l} = Σ_q F_X(ϑ_q) e^{imϑ_q}: an inverse DFT.
    coeffs = np.fft.ifft(grid)
    ms = np.asarray(m)
    out = k * coeffs[ms % nodes]
    return out if out.ndim else complex(out)


def log_series_coefficient(k: complex, m: int) -> complex:
    """(1/2π)∫_0^{2π} −k log(1 − e^{iϑ}) e^{−imϑ} dϑ by adaptive quadrature."""

    def integrand(t, part):
        v = -np.log(1.0 - np.exp(1j * t)) * np.exp(-1j * m * t)
        return v.real if part == 0 else v.imag

    re = quad(integrand, 0.0, 2 * math.pi, args=(0,), limit=400, epsabs=1e-13)[0]
    im = quad(integrand, 0.0, 2 * math.pi, args=(1,), limit=400, epsabs=1e-13)[0]
    return k * complex(re, im) / (2 * math.pi)
