"""Haar (CUE) sampling and the characteristic polynomial Z(θ) = det(I − U e^{−iθ}).

Two samplers are provided.  ``sample_cue`` unitarizes a complex Gaussian matrix
(QR with the diagonal phase correction) and is the reference definition.
``sample_cue_batch(method="cmv")`` draws the same eigenvalue law through the
Killip–Nenciu five-diagonal (CMV) model, which is an order of magnitude faster
and is what the large Monte Carlo runs use.  Both are seeded per sample index,
so a sample never depends on how work was scheduled.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.linalg

from .numerics import combine_estimate

__all__ = [
    "RngSeed",
    "CueSample",
    "CharPolyCoefficients",
    "MomentEstimate",
    "sample_cue",
    "sample_cue_batch",
    "char_poly_coefficients",
    "char_poly_eval",
    "char_poly_derivative",
    "derivatives_at_eigenangles",
    "eigenvalue_moment_values",
    "mixed_moment_mc",
]

TWO_PI = 2.0 * math.pi
LOG_FORM_THRESHOLD = 256


@dataclass(frozen=True)
class RngSeed:
    """Master seed plus a stream index; ``(seed, index)`` fixes one sample."""

    seed: int
    index: int = 0

    def __post_init__(self):
        if not (0 <= self.seed < 2**64) or self.index < 0:
            raise ValueError("seed must be a 64-bit unsigned integer and index >= 0")

    def generator(self) -> np.random.Generator:
        key = np.array([self.seed, self.index], dtype=np.uint64)
        return np.random.Generator(np.random.Philox(key=key))

    def at(self, index: int) -> "RngSeed":
        return RngSeed(self.seed, index)


@dataclass(frozen=True)
class CueSample:
    dimension: int
    eigenangles: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.eigenangles, dtype=float)
        if a.shape != (self.dimension,):
            raise ValueError("need exactly N eigenangles")
        if np.any(a < 0) or np.any(a >= TWO_PI):
            raise ValueError("eigenangles must lie in [0, 2pi)")
        object.__setattr__(self, "eigenangles", a)


@dataclass(frozen=True)
class CharPolyCoefficients:
    """c_j with Z(θ) = Σ_j c_j e^{−ijθ}, j = 0..N."""

    coefficients: np.ndarray

    @property
    def degree(self) -> int:
        return self.coefficients.shape[-1] - 1


@dataclass(frozen=True)
class MomentEstimate:
    mean: complex
    stderr: float
    samples: int


def _reduce_angles(theta: np.ndarray) -> np.ndarray:
    theta = np.mod(theta, TWO_PI)
    theta[theta >= TWO_PI] = 0.0
    return theta


# ---------------------------------------------------------------- sampling


def _haar_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def sample_cue(N: int, seed: RngSeed) -> CueSample:
    """Eigenangles of a Haar unitary built from QR of a complex Ginibre matrix."""
    if N < 1:
        raise ValueError("N must be positive")
    u = _haar_unitary(seed.generator(), N)
    theta = _reduce_angles(np.angle(np.linalg.eigvals(u)))
    return CueSample(N, theta)


def _verblunsky(rng: np.random.Generator, n: int) -> np.ndarray:
    # |α_k|^2 has CDF 1 − (1 − t)^{n−k−1}; the last coefficient is unimodular.
    u = rng.random(n)
    phase = np.exp(TWO_PI * 1j * rng.random(n))
    expo = np.arange(n - 1, 0, -1, dtype=float)
    r2 = np.empty(n)
    r2[:-1] = -np.expm1(np.log(u[:-1]) / expo)
    r2[-1] = 1.0
    return np.sqrt(r2) * phase


def _cmv_hermitian_band(alpha: np.ndarray) -> np.ndarray:
    """Lower band storage of (C + C*)/2 for CMV matrices C = LM, batched.

    ``alpha`` has shape (B, n); the result has shape (B, 3, n) with
    ``band[b, d, i] = H[i+d, i]``.
    """
    b, n = alpha.shape
    rho = np.sqrt(np.maximum(0.0, 1.0 - np.abs(alpha) ** 2))
    # L = Θ_0 ⊕ Θ_2 ⊕ …, M = 1 ⊕ Θ_1 ⊕ …, both symmetric tridiagonal.
    ld = np.conj(alpha).copy()
    ld[:, 1::2] = -alpha[:, 0 : n - 1 : 2]
    lu = np.zeros((b, n - 1), complex)
    lu[:, 0::2] = rho[:, 0 : n - 1 : 2]
    md = np.conj(alpha).copy()
    md[:, 0] = 1.0
    md[:, 2::2] = -alpha[:, 1 : n - 1 : 2]
    mu = np.zeros((b, n - 1), complex)
    mu[:, 1::2] = rho[:, 1 : n - 1 : 2]
    diag = ld * md
    diag[:, :-1] += lu * mu
    diag[:, 1:] += lu * mu
    sup1 = ld[:, :-1] * mu + lu * md[:, 1:]  # C[i, i+1]
    sub1 = lu * md[:, :-1] + ld[:, 1:] * mu  # C[i+1, i]
    band = np.zeros((b, 3, n), complex)
    band[:, 0] = diag.real
    band[:, 1, :-1] = 0.5 * (sub1 + np.conj(sup1))
    if n > 2:
        sup2 = lu[:, :-1] * mu[:, 1:]  # C[i, i+2]
        sub2 = lu[:, 1:] * mu[:, :-1]  # C[i+2, i]
        band[:, 2, :-2] = 0.5 * (sub2 + np.conj(sup2))
    return band


def _szego_coefficients(alpha: np.ndarray) -> np.ndarray:
    """Monomial coefficients of Φ_N from Φ_{k+1} = zΦ_k − conj(α_k)Φ_k^*.

    ``alpha`` has shape (B, n); column j of the result multiplies z^j.
    """
    b, n = alpha.shape
    p = np.zeros((b, n + 1), complex)
    p[:, 0] = 1.0
    for k in range(n):
        old = p[:, : k + 1].copy()
        p[:, 1 : k + 2] = old
        p[:, 0] = 0.0
        p[:, : k + 1] -= np.conj(alpha[:, k : k + 1]) * np.conj(old[:, ::-1])
    return p


def _horner(p: np.ndarray, z: np.ndarray, derivative: bool = False):
    acc = np.repeat(p[:, -1:], z.shape[1], axis=1)
    dacc = np.zeros_like(acc)
    for j in range(p.shape[1] - 2, -1, -1):
        if derivative:
            dacc = dacc * z + acc
        acc = acc * z + p[:, j : j + 1]
    return (acc, dacc) if derivative else acc


def _cmv_angles(alpha: np.ndarray) -> np.ndarray:
    """Eigenangles of the CMV matrices with Verblunsky rows ``alpha`` (B, n)."""
    b, n = alpha.shape
    if n == 1:
        return _reduce_angles(np.angle(np.conj(alpha)))
    band = _cmv_hermitian_band(alpha)
    cos_t = np.empty((b, n))
    for i in range(b):
        cos_t[i] = scipy.linalg.eig_banded(
            band[i], lower=True, eigvals_only=True, check_finite=False
        )
    base = np.arccos(np.clip(cos_t, -1.0, 1.0))
    poly = _szego_coefficients(alpha)
    mag = np.abs(_horner(poly, np.exp(1j * np.concatenate([base, -base], axis=1))))
    theta = np.where(mag[:, :n] <= mag[:, n:], base, -base)
    # cos θ is sorted ascending; a near-equal pair must take opposite signs.
    rows, cols = np.nonzero(np.diff(cos_t, axis=1) < 1e-7)
    for r, c in zip(rows, cols):
        if theta[r, c] == theta[r, c + 1]:
            theta[r, c + 1] = -theta[r, c]
    # One Newton step on Φ_N(e^{iθ}) repairs arccos loss near θ = 0, π.
    z = np.exp(1j * theta)
    p, dp = _horner(poly, z, derivative=True)
    with np.errstate(all="ignore"):
        step = (p / (1j * z * dp)).real
    ok = np.isfinite(step) & (np.abs(step) < 1e-3)
    theta = theta - np.where(ok, step, 0.0)
    return _reduce_angles(theta)


def sample_cue_batch(N: int, seed: int, start: int, count: int, method: str = "cmv") -> np.ndarray:
    """Eigenangles for sample indices ``start .. start+count-1``, shape (count, N)."""
    if N < 1:
        raise ValueError("N must be positive")
    gens = (RngSeed(seed, start + i).generator() for i in range(count))
    if method == "qr":
        out = np.empty((count, N))
        for i, rng in enumerate(gens):
            out[i] = np.angle(np.linalg.eigvals(_haar_unitary(rng, N)))
        return _reduce_angles(out)
    if method == "cmv":
        alpha = np.array([_verblunsky(rng, N) for rng in gens]).reshape(count, N)
        return _cmv_angles(alpha)
    raise ValueError(f"unknown sampler {method!r}")


# ----------------------------------------------------- characteristic poly


def char_poly_coefficients(sample: CueSample | np.ndarray) -> CharPolyCoefficients:
    """Signed elementary symmetric functions of the eigenvalues.

    Accepts a sample or an array of eigenangles with shape (..., N).
    """
    theta = sample.eigenangles if isinstance(sample, CueSample) else np.asarray(sample, float)
    w = np.exp(1j * theta)
    n = w.shape[-1]
    c = np.zeros(w.shape[:-1] + (n + 1,), complex)
    c[..., 0] = 1.0
    for m in range(n):
        wm = w[..., m : m + 1]
        c[..., 1 : m + 2] = c[..., 1 : m + 2] - wm * c[..., 0 : m + 1]
    return CharPolyCoefficients(c)


def char_poly_derivative(coeffs: CharPolyCoefficients, theta, n: int = 0):
    """Z^{(n)}(θ) = Σ_j c_j (−ij)^n e^{−ijθ}, vectorized over θ."""
    if n < 0:
        raise ValueError("n must be non-negative")
    c = coeffs.coefficients
    j = np.arange(c.shape[-1])
    weights = c * (-1j * j) ** n if n else c
    th = np.asarray(theta, float)
    return np.exp(-1j * np.multiply.outer(th, j)) @ weights


def char_poly_eval(coeffs: CharPolyCoefficients, theta):
    return char_poly_derivative(coeffs, theta, 0)


def derivatives_at_eigenangles(angles: np.ndarray, max_order: int, log_form: bool | None = None):
    """Z^{(n)}(θ_m) for n = 0..max_order at every eigenangle of each sample.

    Returns an array of shape (max_order+1, ..., N).  The coefficient form is
    used for N ≤ 256.  Beyond that the polynomial is factored at each
    eigenvalue as (1 − e^{i(θ_m−θ)})·R(θ) and R is carried as exp(log R),
    which avoids the huge elementary symmetric functions; in that case the
    function returns ``(log_r, poly)`` with Z^{(n)} = exp(log_r)·poly[n].
    """
    angles = np.asarray(angles, float)
    n = angles.shape[-1]
    if log_form is None:
        log_form = n > LOG_FORM_THRESHOLD
    if not log_form:
        c = char_poly_coefficients(angles).coefficients
        j = np.arange(n + 1)
        e = np.exp(-1j * angles[..., :, None] * j)  # (..., N, N+1)
        out = np.empty((max_order + 1,) + angles.shape, complex)
        for q in range(max_order + 1):
            out[q] = np.einsum("...mj,...j->...m", e, c * (-1j * j) ** q)
        return out
    return _log_form_derivatives(angles, max_order)


def _log_form_derivatives(angles: np.ndarray, max_order: int):
    n = angles.shape[-1]
    diff = angles[..., None, :] - angles[..., :, None]  # θ_l − θ_m, row m
    w = np.exp(1j * diff)
    eye = np.eye(n, dtype=bool)
    one_minus = np.where(eye, 1.0, 1.0 - w)
    log_r = np.sum(np.log(one_minus), axis=-1)
    q = np.where(eye, 0.0, w / one_minus)
    # L_p = d^p/dθ^p log R at θ_m; q' = −i q(1+q).
    polys = [np.polynomial.Polynomial([0.0, 1.0])]
    for _ in range(max_order):
        p = polys[-1]
        polys.append(p.deriv() * np.polynomial.Polynomial([0.0, 1.0, 1.0]))
    lder = [None]
    for p in range(1, max_order + 1):
        vals = np.where(eye, 0.0, polys[p - 1](q))
        lder.append(1j * (-1j) ** (p - 1) * vals.sum(axis=-1))
    y = [np.ones(angles.shape, complex)]
    for m in range(1, max_order + 1):
        acc = np.zeros(angles.shape, complex)
        for j in range(m):
            acc = acc + math.comb(m - 1, j) * lder[j + 1] * y[m - 1 - j]
        y.append(acc)
    poly = np.zeros((max_order + 1,) + angles.shape, complex)
    for m in range(1, max_order + 1):
        for j in range(1, m + 1):
            poly[m] = poly[m] - math.comb(m, j) * (-1j) ** j * y[m - j]
    return log_r, poly


def eigenvalue_moment_values(angles: np.ndarray, orders: Sequence[int]) -> np.ndarray:
    """Per-sample (1/N) Σ_m Π_r Z^{(n_r)}(θ_m); ``angles`` has shape (S, N)."""
    angles = np.atleast_2d(angles)
    n = angles.shape[-1]
    top = max(orders)
    if n > LOG_FORM_THRESHOLD:
        log_r, poly = _log_form_derivatives(angles, top)
        log_prod = len(orders) * log_r
        prod = np.ones(angles.shape, complex)
        for o in orders:
            prod = prod * poly[o]
        return np.mean(np.exp(log_prod) * prod, axis=-1)
    d = derivatives_at_eigenangles(angles, top, log_form=False)
    prod = np.ones(angles.shape, complex)
    for o in orders:
        prod = prod * d[o]
    return prod.mean(axis=-1)


# ------------------------------------------------------------ Monte Carlo

_CHUNK = 512


def _chunk_values(args) -> np.ndarray:
    N, orders, seed, start, count, method = args
    angles = sample_cue_batch(N, seed, start, count, method)
    return eigenvalue_moment_values(angles, orders)


def moment_sample_values(
    N: int,
    orders: Sequence[int],
    samples: int,
    seed: int,
    method: str = "cmv",
    workers: int = 1,
) -> np.ndarray:
    """Per-sample statistic for indices 0..samples−1, in index order."""
    tasks = [
        (N, tuple(orders), seed, s, min(_CHUNK, samples - s), method)
        for s in range(0, samples, _CHUNK)
    ]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_chunk_values, tasks))
    else:
        parts = [_chunk_values(t) for t in tasks]
    return np.concatenate(parts) if parts else np.empty(0, complex)


def mixed_moment_mc(
    spec,
    samples: int,
    seed: RngSeed | int,
    method: str = "cmv",
    workers: int = 1,
) -> MomentEstimate:
    """Monte Carlo estimate of E_N[(1/N) Σ_m Π_r Z^{(n_r)}(θ_m)].

    ``spec`` is a :class:`~zetamoments.exact.MixedMomentSpec`.  Sample ``s``
    uses stream ``(seed, s)``; results do not depend on ``workers``.
    """
    if samples < 1:
        raise ValueError("samples must be positive")
    if any(o < 1 for o in spec.orders):
        raise ValueError("orders must be positive")
    master = seed.seed if isinstance(seed, RngSeed) else int(seed)
    vals = moment_sample_values(spec.N, spec.orders, samples, master, method, workers)
    mean, se = combine_estimate(vals)
    return MomentEstimate(mean, se, samples)
