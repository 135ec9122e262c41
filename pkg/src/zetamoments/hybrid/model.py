"""Random-matrix model Z_{N,X} of the zero product and its first-derivative moments.

At an eigenvalue,

    Z'_{N,X}(θ_n) = i e^{F_X(0)} Π_{m≠n} (1 − e^{−i(θ_n−θ_m)}) e^{F_X(θ_n−θ_m)},

and complex powers are taken as exp(k·log) with each factor's principal
logarithm, which is the continuous branch of (1 − e^{iϑ}e^{−ε})^k as ε → 0⁺.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import rgamma

from ..exact import LaurentSymbol, toeplitz_determinant
from ..numerics import combine_estimate
from ..rmt import CueSample, MomentEstimate, RngSeed, sample_cue_batch
from .fx import HybridParams, closed_form_series, f_x_eval, s_m_numeric
from .special import barnes_g

__all__ = [
    "FisherHartwigExponents",
    "FisherHartwigAsymptotic",
    "FourierPhase",
    "z_nx_prime_at_eigenvalue",
    "log_z_nx_prime",
    "hybrid_moment_mc",
    "theorem13_prediction",
    "ehrhardt_silbermann_asymptotic",
    "assembled_theorem13",
    "hybrid_exact_toeplitz",
]


class FourierPhase:
    """F_X(ϑ) = Σ_{m=1}^{M} σ_m e^{−imϑ} from k = 1 coefficients σ_m."""

    def __init__(self, sigma: np.ndarray):
        self.sigma = np.asarray(sigma, complex)
        self.modes = np.arange(1, self.sigma.size + 1)

    @classmethod
    def closed_form(cls, params: HybridParams) -> "FourierPhase":
        return cls(closed_form_series(params, 1.0))

    @classmethod
    def numeric(cls, params: HybridParams, nodes: int = 4096) -> "FourierPhase":
        # Modes outside 1..M are zero to quadrature accuracy and are dropped.
        return cls(s_m_numeric(params, 1.0, np.arange(1, params.max_mode + 1), nodes))

    def __call__(self, theta):
        th = np.asarray(theta, float)
        out = np.zeros(th.shape, complex)
        for m, s in zip(self.modes, self.sigma):
            out = out + s * np.exp(-1j * m * th)
        return out

    @property
    def at_zero(self) -> complex:
        return complex(self.sigma.sum())


def _phase_fn(params: HybridParams, fx) -> Callable:
    if fx is None or fx == "exact":
        return lambda t: f_x_eval(params, t)
    if fx == "closed":
        return FourierPhase.closed_form(params)
    if fx == "numeric":
        return FourierPhase.numeric(params)
    return fx


def log_z_nx_prime(angles: np.ndarray, phase: Callable, f0: complex) -> np.ndarray:
    """log Z'_{N,X}(θ_n) at every eigenangle of each row of ``angles`` (S, N)."""
    angles = np.atleast_2d(angles)
    n = angles.shape[-1]
    if isinstance(phase, FourierPhase):
        return _log_z_fourier(angles, phase, f0)
    diff = angles[:, :, None] - angles[:, None, :]  # θ_n − θ_m
    off = ~np.eye(n, dtype=bool)
    d = diff[:, off].reshape(angles.shape[0], n, n - 1)
    if np.any(np.abs(np.sin(0.5 * d)) < 5e-13):
        raise ValueError("degenerate eigenangle collision")
    terms = np.log(-np.expm1(-1j * d)) + phase(d)
    return 0.5j * math.pi + f0 + terms.sum(axis=-1)


def _log_z_fourier(angles: np.ndarray, phase: "FourierPhase", f0: complex) -> np.ndarray:
    # w = e^{−i(θ_n−θ_m)} from unit-modulus products; w = 0 on the diagonal adds nothing.
    z = np.exp(1j * angles)
    w = np.conj(z)[:, :, None] * z[:, None, :]
    idx = np.arange(angles.shape[-1])
    w[:, idx, idx] = 0.0
    one_minus = 1.0 - w
    one_minus[:, idx, idx] = 1.0
    if np.any(np.abs(one_minus) < 1e-12):
        raise ValueError("degenerate eigenangle collision")
    total = np.log(one_minus).sum(axis=-1)
    if phase.sigma.size:
        # Σ_m σ_m w^m by Horner.
        acc = np.full(w.shape, phase.sigma[-1])
        for s in phase.sigma[-2::-1]:
            acc = acc * w + s
        total = total + (acc * w).sum(axis=-1)
    return 0.5j * math.pi + f0 + total


def z_nx_prime_at_eigenvalue(sample: CueSample, params: HybridParams, fx=None) -> complex:
    """Z'_{N,X}(θ_N) for the last eigenangle of ``sample``."""
    phase = _phase_fn(params, fx)
    f0 = complex(phase(np.array(0.0)))
    theta = sample.eigenangles
    if sample.dimension == 1:
        return complex(1j * np.exp(f0))
    d = theta[-1] - theta[:-1]
    if np.any(np.abs(np.sin(0.5 * d)) < 5e-13):
        raise ValueError("degenerate eigenangle collision")
    logv = 0.5j * math.pi + f0 + np.sum(np.log(-np.expm1(-1j * d)) + phase(d))
    return complex(np.exp(logv))


def hybrid_moment_mc(
    params: HybridParams,
    k: complex,
    samples: int,
    seed: RngSeed | int,
    fx="closed",
    method: str = "cmv",
    chunk: int = 256,
) -> MomentEstimate:
    """Monte Carlo estimate of E_N[(1/N) Σ_n Z'_{N,X}(θ_n)^k].

    Each sample averages over all N eigenvalues (equal in law to using θ_N
    alone, with smaller variance).
    """
    if samples < 1:
        raise ValueError("samples must be positive")
    if k == 0:
        return MomentEstimate(1.0 + 0j, 0.0, samples)
    master = seed.seed if isinstance(seed, RngSeed) else int(seed)
    N = params.N
    phase = _phase_fn(params, fx)
    f0 = complex(phase(np.array(0.0)))
    vals = np.empty(samples, complex)
    for s in range(0, samples, chunk):
        c = min(chunk, samples - s)
        angles = sample_cue_batch(N, master, s, c, method)
        if N == 1:
            logz = np.full((c, 1), 0.5j * math.pi + f0)
        else:
            logz = log_z_nx_prime(angles, phase, f0)
        vals[s : s + c] = np.exp(k * logz).mean(axis=-1)
    mean, se = combine_estimate(vals)
    if np.real(k) < 0:
        _heavy_tail_check(vals)
    return MomentEstimate(mean, se, samples)


def _heavy_tail_check(vals: np.ndarray, batches: int = 10) -> None:
    parts = np.array_split(np.abs(vals) ** 2, batches)
    second = np.array([p.mean() for p in parts if p.size])
    if second.size > 1 and (second.max() > 10.0 * np.median(second)):
        warnings.warn(
            "sample second moment is not stable across batches; the standard error is unreliable",
            RuntimeWarning,
            stacklevel=3,
        )


def theorem13_prediction(k: complex, N: int) -> complex:
    """e^{ikπ/2} N^k / Γ(k+2)."""
    kc = complex(k)
    if kc.imag == 0 and kc.real <= -3 and kc.real == round(kc.real):
        raise ValueError("k must avoid -3, -4, -5, ...")
    return complex(cmath.exp(0.5j * math.pi * kc) * cmath.exp(kc * math.log(N)) * rgamma(kc + 2))


# ------------------------------------------------- Fisher–Hartwig asymptotic


@dataclass(frozen=True)
class FisherHartwigExponents:
    """Singularity exponents γ, δ and log-Fourier coefficients of the smooth part.

    ``s_pos[m-1] = s_m`` and ``s_neg[m-1] = s_{−m}`` for m ≥ 1.
    """

    gamma: complex
    delta: complex
    s_pos: np.ndarray
    s_neg: np.ndarray
    s0: complex = 0j

    def __post_init__(self):
        g = complex(self.gamma) + complex(self.delta)
        if g.imag == 0 and g.real <= -1 and g.real == round(g.real):
            raise ValueError("gamma + delta must not be a negative integer")


@dataclass(frozen=True)
class FisherHartwigAsymptotic:
    C1: complex
    C2: complex
    value: complex


def ehrhardt_silbermann_asymptotic(exps: FisherHartwigExponents, N: int) -> FisherHartwigAsymptotic:
    """D_{N−1}[f] ≈ C_1 N^{γδ} C_2^{N−1} for a single Fisher–Hartwig singularity."""
    g, d = complex(exps.gamma), complex(exps.delta)
    sp = np.asarray(exps.s_pos, complex)
    sn = np.asarray(exps.s_neg, complex)
    M = max(sp.size, sn.size)
    sp = np.pad(sp, (0, M - sp.size))
    sn = np.pad(sn, (0, M - sn.size))
    m = np.arange(1, M + 1)
    gfac = complex(barnes_g(1 + g) * barnes_g(1 + d) / barnes_g(1 + g + d))
    c1 = gfac * cmath.exp(np.sum(m * sp * sn) - d * sp.sum() - g * sn.sum())
    c2 = cmath.exp(complex(exps.s0))
    value = c1 * cmath.exp(g * d * math.log(N)) * c2 ** (N - 1)
    return FisherHartwigAsymptotic(c1, c2, value)


def assembled_theorem13(params: HybridParams, k: complex, N: int, s_source: str = "closed") -> complex:
    """e^{ikπ/2} e^{kF_X(0)} (1/N) · D, with D from the Fisher–Hartwig asymptotic.

    The symbol is |1 − e^{iϑ}|²(1 − e^{iϑ})^k e^{kF_X(−ϑ)}, so γ = k+1, δ = 1
    and the smooth part has log-coefficients s_m(k).  F_X(0) is evaluated from
    its definition, independently of the s_m.
    """
    k = complex(k)
    if s_source == "closed":
        s = closed_form_series(params, k)
    elif s_source == "numeric":
        s = s_m_numeric(params, k, np.arange(1, params.max_mode + 1))
    else:
        raise ValueError(f"unknown s_m source {s_source!r}")
    exps = FisherHartwigExponents(k + 1, 1.0, s, np.zeros_like(s), 0j)
    d = ehrhardt_silbermann_asymptotic(exps, N).value
    f0 = complex(f_x_eval(params, 0.0))
    return complex(cmath.exp(0.5j * math.pi * k) * cmath.exp(k * f0) * d / N)


def hybrid_exact_toeplitz(params: HybridParams, k: int, N: int, nodes: int = 4096) -> complex:
    """Exact E_N[Z'_{N,X}(θ_N)^k] for integer k ≥ 0 as a Toeplitz determinant.

    Integrating out θ_N leaves D_{N−1} of |1 − e^{iϑ}|²(1 − e^{iϑ})^k e^{kF_X(−ϑ)},
    whose Fourier coefficients come from an FFT of the band-limited symbol.
    """
    if int(k) != k or k < 0:
        raise ValueError("k must be a non-negative integer")
    if N < 2:
        raise ValueError("N must be at least 2")
    k = int(k)
    ph = FourierPhase.closed_form(params)
    if nodes < 2 * (N + k + ph.sigma.size * k + 8):
        raise ValueError("too few nodes for the symbol bandwidth")
    th = 2.0 * math.pi * np.arange(nodes) / nodes
    e = np.exp(1j * th)
    f = np.abs(1.0 - e) ** 2 * (1.0 - e) ** k * np.exp(k * ph(-th))
    c = np.fft.fft(f) / nodes
    lo = -(N + 5)
    coeffs = np.array([c[j % nodes] for j in range(lo, N + 6)])
    D = toeplitz_determinant(LaurentSymbol(lo, coeffs), N - 1)
    return complex(cmath.exp(0.5j * math.pi * k) * cmath.exp(k * ph.at_zero) * D / N)
