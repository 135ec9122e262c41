"""Smoothing kernel u and the exponential-integral kernel U(z) = ∫ u(y) E_1(z log y) dy.

The base bump is f(x) = c·exp(−1/(x(1−x))) on (0, 1).  With x = Y log(y/e) + 1
the induced u(y) = Y f(x)/y has mass 1 on [e^{1−1/Y}, e], and

    U(z) = ∫_0^1 f(x) E_1(z ℓ(x)) dx,   ℓ(x) = log y = 1 + (x − 1)/Y.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.integrate import quad
from scipy.special import sici

from .special import EULER_GAMMA, e1_entire_part, exp_integral_e1

__all__ = ["SmoothingKernel", "bump_normalization"]


def _raw_bump(x):
    x = np.asarray(x, float)
    out = np.zeros_like(x)
    inside = (x > 0) & (x < 1)
    xi = x[inside]
    out[inside] = np.exp(-1.0 / (xi * (1.0 - xi)))
    return out


@lru_cache(maxsize=None)
def bump_normalization() -> float:
    """1 / ∫_0^1 exp(−1/(x(1−x))) dx."""
    val, _ = quad(lambda x: float(_raw_bump(x)), 0.0, 1.0, epsabs=1e-16, epsrel=1e-14, limit=200)
    return 1.0 / val


@dataclass(frozen=True)
class SmoothingKernel:
    """Bump of scale ``Y`` (Y ≥ 2); ``nodes`` is the base midpoint count for U."""

    Y: float
    nodes: int = 96
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self):
        if self.Y < 2:
            raise ValueError("Y must be at least 2")

    # --- the bump and u -------------------------------------------------

    def f(self, x):
        return bump_normalization() * _raw_bump(x)

    @property
    def support(self) -> tuple[float, float]:
        return math.exp(1.0 - 1.0 / self.Y), math.e

    def u(self, y):
        """u(y) = Y f(Y log(y/e) + 1)/y, zero off [e^{1−1/Y}, e]."""
        y = np.asarray(y, float)
        with np.errstate(divide="ignore", invalid="ignore"):
            x = self.Y * (np.log(y) - 1.0) + 1.0
            out = np.where(y > 0, self.Y * self.f(x) / y, 0.0)
        return out

    def mass(self, a: float, b: float) -> float:
        """∫_a^b u(y) dy by adaptive quadrature in y (b ≥ a ≥ 1)."""
        if not (b >= a >= 1):
            raise ValueError("need b >= a >= 1")
        lo, hi = self.support
        a, b = max(a, lo), min(b, hi)
        if b <= a:
            return 0.0
        val, _ = quad(lambda y: float(self.u(y)), a, b, epsabs=1e-13, epsrel=1e-12, limit=400)
        return val

    # --- quadrature nodes in x -------------------------------------------

    def _nodes(self, n: int) -> tuple[np.ndarray, np.ndarray]:
        key = ("mid", n)
        if key not in self._cache:
            x = (np.arange(n) + 0.5) / n
            w = self.f(x) / n
            keep = w > 1e-300
            ell = 1.0 + (x[keep] - 1.0) / self.Y
            self._cache[key] = (ell, w[keep])
        return self._cache[key]

    def nodes_for(self, zmax: float) -> int:
        # Phase z·ℓ(x) turns |z|/Y radians across the support.
        return int(self.nodes + math.ceil(zmax / (2.0 * math.pi * self.Y)) * 2)

    @property
    def log_moment(self) -> float:
        """∫ f(x) log ℓ(x) dx = ∫ u(y) log log y dy."""
        if "logm" not in self._cache:
            ell, w = self._nodes(256)
            self._cache["logm"] = math.fsum((w * np.log(ell)).tolist())
        return self._cache["logm"]

    # --- U and its regular part ------------------------------------------

    def big_u(self, z, n: int | None = None):
        """U(z) for complex z ≠ 0 (vectorized)."""
        z = np.asarray(z, complex)
        if np.any(z == 0):
            raise ValueError("U has a logarithmic singularity at 0")
        if z.size == 0:
            return z.copy()
        n = n or self.nodes_for(float(np.max(np.abs(z))))
        ell, w = self._nodes(n)
        flat = z.ravel()
        out = np.empty(flat.shape, complex)
        step = max(1, 4_000_000 // ell.size)
        for s in range(0, flat.size, step):
            zz = flat[s : s + step]
            out[s : s + step] = exp_integral_e1(np.multiply.outer(zz, ell)) @ w
        return out.reshape(z.shape) if z.ndim else complex(out[0])

    def big_u_imag(self, t, n: int | None = None):
        """U(it) for real t ≠ 0, using E_1(iy) = −Ci(|y|) + i·sgn(y)(Si(|y|) − π/2)."""
        t = np.asarray(t, float)
        if np.any(t == 0):
            raise ValueError("U has a logarithmic singularity at 0")
        if t.size == 0:
            return np.zeros(t.shape, complex)
        n = n or self.nodes_for(float(np.max(np.abs(t))))
        ell, w = self._nodes(n)
        flat = t.ravel()
        out = np.empty(flat.shape, complex)
        step = max(1, 4_000_000 // ell.size)
        for s in range(0, flat.size, step):
            tt = flat[s : s + step]
            si, ci = sici(np.multiply.outer(np.abs(tt), ell))
            out[s : s + step] = -(ci @ w) + 1j * np.sign(tt) * ((si - 0.5 * math.pi) @ w)
        return out.reshape(t.shape) if t.ndim else complex(out[0])

    def big_u_regular(self, z, n: int | None = None):
        """W(z) = U(z) + log z, an entire function, via the series split of E_1."""
        z = np.asarray(z, complex)
        n = n or self.nodes_for(float(np.max(np.abs(z))) if z.size else 0.0)
        ell, w = self._nodes(n)
        ein = e1_entire_part(np.multiply.outer(z, ell), 60) @ w
        return -EULER_GAMMA - self.log_moment + ein

    def big_u_prime(self, z, n: int | None = None):
        """U'(z) = −(1/z) ∫ f(x) e^{−zℓ(x)} dx."""
        z = np.asarray(z, complex)
        n = n or self.nodes_for(float(np.max(np.abs(z))) if z.size else 0.0)
        ell, w = self._nodes(n)
        return -(np.exp(-np.multiply.outer(z, ell)) @ w) / z

    @property
    def small_z_constant(self) -> float:
        """C with exp(−U(z)) ~ C z as z → 0, i.e. C = exp(γ + ∫ f log ℓ)."""
        return math.exp(EULER_GAMMA + self.log_moment)
