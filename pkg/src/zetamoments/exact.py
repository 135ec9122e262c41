"""Exact finite-N moments of characteristic-polynomial derivatives at eigenvalues.

The shifted expectation

    E_N[(1/N) Σ_m Z(θ_m + α_1)…Z(θ_m + α_k)]

is evaluated three independent ways: a nested geometric sum, a Toeplitz
determinant of a Laurent-polynomial symbol, and a (k+2)×(k+2) Basor–Forrester
determinant.  Derivative moments are mixed Taylor coefficients in the shifts;
they are extracted numerically by Cauchy sums on small circles, and exactly from
a big-integer form of the nested sum.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np
import scipy.linalg

from .numerics import AccuracyError

__all__ = [
    "MixedMomentSpec",
    "LaurentSymbol",
    "ExactMoment",
    "shifted_expectation_sum",
    "symbol_coefficients",
    "toeplitz_determinant",
    "toeplitz_expectation",
    "basor_forrester",
    "basor_forrester_expectation",
    "coefficient_extract",
    "derivative_moment",
    "exact_derivative_moment",
    "simplex_integral",
    "simplex_integral_iterated",
    "simplex_integral_mc",
    "theorem3_prediction",
]

log = logging.getLogger(__name__)

NODE_COLLISION = 1e-6
PIVOT_RATIO_WARN = 1e12


@dataclass(frozen=True)
class MixedMomentSpec:
    """Matrix size N and derivative orders (n_1, …, n_k), all n_r ≥ 1."""

    N: int
    orders: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "orders", tuple(int(o) for o in self.orders))
        if self.N < 1:
            raise ValueError("N must be positive")
        if not self.orders:
            raise ValueError("need at least one derivative order")
        if any(o < 1 for o in self.orders):
            raise ValueError("derivative orders must be positive")

    @property
    def k(self) -> int:
        return len(self.orders)

    @property
    def total_order(self) -> int:
        return sum(self.orders)


@dataclass(frozen=True)
class LaurentSymbol:
    """Laurent polynomial Σ_j coeffs[j − low] z^j."""

    low: int
    coeffs: np.ndarray

    @property
    def high(self) -> int:
        return self.low + len(self.coeffs) - 1

    def __getitem__(self, j: int) -> complex:
        if j < self.low or j > self.high:
            return 0j
        return complex(self.coeffs[j - self.low])

    def as_dict(self) -> dict[int, complex]:
        return {self.low + i: complex(c) for i, c in enumerate(self.coeffs)}

    def __call__(self, z):
        z = np.asarray(z, complex)
        return np.polynomial.polynomial.polyval(z, self.coeffs) * z**self.low


@dataclass(frozen=True)
class ExactMoment:
    """(−i)^{i_power}·value with ``value`` rational."""

    value: Fraction
    i_power: int

    def __complex__(self) -> complex:
        return complex((-1j) ** (self.i_power % 4)) * float(self.value)


# ------------------------------------------------------------ nested sum


def _as_shift_array(shifts) -> np.ndarray:
    a = np.asarray(shifts, complex)
    if a.ndim == 0:
        a = a.reshape(1)
    return a


def shifted_expectation_sum(N: int, shifts) -> np.ndarray | complex:
    """Nested-sum value of the shifted expectation.

    ``shifts`` has shape (..., k); leading axes are evaluated independently.
    With B_r = e^{−iα_r}, G_{k+1}(b) = b+1 and G_r(b) = G_{r+1}(b) + B_r G_r(b−1),
    the value is (1/N) Π_r (1 − B_r) · G_1(N−1).  Cost O(kN) per point.
    """
    if N < 1:
        raise ValueError("N must be positive")
    a = _as_shift_array(shifts)
    k = a.shape[-1]
    if k < 1:
        raise ValueError("need at least one shift")
    lead = a.shape[:-1]
    b = np.exp(-1j * a)
    g = np.broadcast_to(np.arange(1, N + 1, dtype=float), lead + (N,)).astype(complex)
    for r in range(k - 1, -1, -1):
        br = b[..., r]
        new = np.empty_like(g)
        prev = g[..., 0]
        new[..., 0] = prev
        for j in range(1, N):
            prev = g[..., j] + br * prev
            new[..., j] = prev
        g = new
    pref = np.prod(-np.expm1(-1j * a), axis=-1)
    out = pref * g[..., N - 1] / N
    return complex(out) if out.ndim == 0 else out


# ---------------------------------------------------------- Toeplitz route


def symbol_coefficients(shifts=(), nodes: Sequence[complex] | None = None) -> LaurentSymbol:
    """Laurent coefficients of z^{−1}(z−1)² Π_r (z − e^{iα_r}).

    Passing ``nodes`` instead gives z^{−1} Π (z − A) for arbitrary nodes A.
    """
    if nodes is None:
        nodes = list(np.exp(1j * _as_shift_array(shifts))) + [1.0, 1.0]
    poly = np.array([1.0 + 0j])
    for node in nodes:
        poly = np.convolve(poly, np.array([-node, 1.0], complex))
    return LaurentSymbol(-1, poly)


def toeplitz_determinant(symbol: LaurentSymbol, size: int) -> complex:
    """det[f̂_{j−ℓ}]_{j,ℓ=1..size} by pivoted LU."""
    if size == 0:
        return 1.0 + 0j
    col = np.array([symbol[j] for j in range(size)])
    row = np.array([symbol[-j] for j in range(size)])
    t = scipy.linalg.toeplitz(col, row)
    lu, piv = scipy.linalg.lu_factor(t, check_finite=False)
    diag = np.diagonal(lu)
    mags = np.abs(diag)
    if mags.min() == 0.0:
        return 0j
    if mags.max() / mags.min() > PIVOT_RATIO_WARN:
        log.warning("Toeplitz determinant ill-conditioned: pivot ratio %.3g", mags.max() / mags.min())
    sign = -1.0 if np.count_nonzero(piv != np.arange(size)) % 2 else 1.0
    return complex(sign * np.prod(diag))


def toeplitz_expectation(N: int, shifts) -> complex:
    """Heine/Toeplitz value: (−1)^{(k+1)(N−1)}/N Π A_r^{−N}(A_r−1) · D_{N−1}[f]."""
    if N < 1:
        raise ValueError("N must be positive")
    a = _as_shift_array(shifts)
    k = a.size
    d = toeplitz_determinant(symbol_coefficients(a), N - 1)
    pref = np.prod(np.exp(-1j * N * a) * np.expm1(1j * a))
    sign = -1.0 if ((k + 1) * (N - 1)) % 2 else 1.0
    return complex(sign * pref * d / N)


# ---------------------------------------------------- Basor–Forrester route


def basor_forrester(N: int, nodes: Sequence[complex]) -> complex:
    """D_{N−1} of the symbol z^{−1}Π_{r=1}^{k+2}(z − A_r) as a (k+2)×(k+2) determinant.

    Rows are (A_r^{N−1}, A_r^N, …, A_r^{N−1+k}, (−A_r)^{−1}), with prefactor
    (−1)^{(k+1)(N−1)} Π(−A_r) / Π_{j<ℓ}(A_ℓ − A_j).
    """
    A = np.asarray(nodes, complex)
    m = A.size
    if m < 2:
        raise ValueError("need at least two nodes")
    k = m - 2
    gaps = np.abs(A[:, None] - A[None, :])[np.triu_indices(m, 1)]
    if gaps.min() < NODE_COLLISION:
        raise ValueError("Basor-Forrester nodes collide; use the nested-sum route")
    mat = np.empty((m, m), complex)
    for c in range(k + 1):
        mat[:, c] = A ** (N - 1 + c)
    mat[:, k + 1] = 1.0 / (-A)
    vander = np.prod([A[l] - A[j] for j in range(m) for l in range(j + 1, m)])
    sign = -1.0 if ((k + 1) * (N - 1)) % 2 else 1.0
    return complex(sign * np.prod(-A) / vander * np.linalg.det(mat))


def basor_forrester_expectation(N: int, shifts, offsets: tuple[float, float] = (1e-2, 1e-3)) -> complex:
    """Shifted expectation via Basor–Forrester with the two unit nodes split.

    The nodes 1 ± εu (u = e^{iπ/4}) make the determinant an even function of
    ε, so a single Richardson step in ε² removes the leading error.
    """
    a = _as_shift_array(shifts)
    k = a.size
    A = np.exp(1j * a)
    u = np.exp(0.25j * math.pi)
    vals = []
    for eps in offsets:
        nodes = np.concatenate([A, [1 + eps * u, 1 - eps * u]])
        vals.append(basor_forrester(N, nodes))
    e1, e2 = offsets
    d = (vals[1] * e1**2 - vals[0] * e2**2) / (e1**2 - e2**2)
    pref = np.prod(np.exp(-1j * N * a) * np.expm1(1j * a))
    sign = -1.0 if ((k + 1) * (N - 1)) % 2 else 1.0
    return complex(sign * pref * d / N)


# ------------------------------------------------- coefficient extraction


def _cauchy_coefficient(evaluator, orders, radius, nodes) -> complex:
    k = len(orders)
    grids = [radius * np.exp(2j * math.pi * np.arange(m) / m) for m in nodes]
    mesh = np.stack(np.meshgrid(*grids, indexing="ij"), axis=-1)
    vals = np.asarray(evaluator(mesh.reshape(-1, k)), complex).reshape(mesh.shape[:-1])
    coef = vals
    for r, (n, m) in enumerate(zip(orders, nodes)):
        w = np.exp(-2j * math.pi * n * np.arange(m) / m) / m
        coef = np.tensordot(coef, w, axes=([0], [0]))
    return complex(coef) / radius ** sum(orders)


def coefficient_extract(
    evaluator: Callable[[np.ndarray], np.ndarray],
    orders: Sequence[int],
    radius: float = 0.1,
    extra_nodes: int = 12,
    tol: float = 1e-8,
) -> complex:
    """Π n_r! · [α_1^{n_1}…α_k^{n_k}] of an entire function of the shifts.

    ``evaluator`` maps an array of shape (P, k) to P values.  The coefficient
    is a tensor-product Cauchy (DFT) sum with n_r + ``extra_nodes`` points
    per variable on circles of the given radius; the sum is repeated with four
    more points per variable and the two must agree to ``tol`` relative.
    """
    orders = tuple(int(n) for n in orders)
    if any(n < 0 for n in orders):
        raise ValueError("orders must be non-negative")
    first = _cauchy_coefficient(evaluator, orders, radius, [n + extra_nodes for n in orders])
    second = _cauchy_coefficient(evaluator, orders, radius, [n + extra_nodes + 4 for n in orders])
    scale = max(abs(first), abs(second))
    if scale > 0 and abs(first - second) > tol * scale:
        raise AccuracyError(f"coefficient extraction residual {abs(first - second) / scale:.3g} exceeds {tol:g}")
    fact = math.prod(math.factorial(n) for n in orders)
    return second * fact


def derivative_moment(spec: MixedMomentSpec, route: str = "sum") -> complex:
    """E_N[(1/N) Σ_m Π_r Z^{(n_r)}(θ_m)] by numerical coefficient extraction."""
    N = spec.N
    if route == "sum":
        ev = lambda pts: shifted_expectation_sum(N, pts)
    elif route == "toeplitz":
        ev = lambda pts: np.array([toeplitz_expectation(N, p) for p in pts])
    else:
        raise ValueError(f"unknown route {route!r}")
    radius = min(0.1, 1.0 / N)
    return coefficient_extract(ev, spec.orders, radius=radius)


# ------------------------------------------------------------ exact forms


def exact_derivative_moment(spec: MixedMomentSpec) -> ExactMoment:
    """Exact value (−i)^{Σn}/N · Σ_{Σj ≤ N−1} Π_r (j_r^{n_r} − (j_r+1)^{n_r}) (N − Σj).

    Expanding A^{−j} − A^{−j−1} = e^{−ijα} − e^{−i(j+1)α} in α turns the
    nested sum into integer convolutions.
    """
    N = spec.N
    conv = [1]
    for n in spec.orders:
        w = [j**n - (j + 1) ** n for j in range(N)]
        new = [0] * N
        for s, cs in enumerate(conv):
            if cs:
                for j in range(N - s):
                    new[s + j] += cs * w[j]
        conv = new
    total = sum(c * (N - s) for s, c in enumerate(conv))
    return ExactMoment(Fraction(total, N), spec.total_order)


def simplex_integral(orders: Sequence[int]) -> Fraction:
    """∫_{x_r ≥ 0, Σx ≤ 1} Π x_r^{n_r−1}(1 − Σx) dx = Π (n_r−1)! / (Σn + 1)!."""
    if not orders or any(n < 1 for n in orders):
        raise ValueError("orders must be positive")
    num = math.prod(math.factorial(n - 1) for n in orders)
    return Fraction(num, math.factorial(sum(orders) + 1))


def simplex_integral_iterated(orders: Sequence[int]) -> Fraction:
    """The same integral by iterated exact integration, one variable at a time.

    ∫_0^c x^a (c − x)^b dx = c^{a+b+1} Σ_j C(b, j)(−1)^j/(a + j + 1), so each
    step multiplies a rational constant and raises the power of (1 − Σ x).
    """
    if not orders or any(n < 1 for n in orders):
        raise ValueError("orders must be positive")
    coef = Fraction(1)
    b = 1
    for n in reversed(orders):
        a = n - 1
        coef *= sum(Fraction((-1) ** j * math.comb(b, j), a + j + 1) for j in range(b + 1))
        b = a + b + 1
    return coef


def simplex_integral_mc(orders: Sequence[int], samples: int, seed: int) -> tuple[float, float]:
    """Monte Carlo estimate and standard error with uniform points on the simplex."""
    k = len(orders)
    rng = np.random.Generator(np.random.Philox(key=np.array([seed, 0], dtype=np.uint64)))
    x = rng.dirichlet(np.ones(k + 1), size=samples)
    n = np.asarray(orders, float)
    f = np.prod(x[:, :k] ** (n - 1), axis=1) * x[:, k]
    vol = 1.0 / math.factorial(k)
    return vol * float(f.mean()), vol * float(f.std(ddof=1)) / math.sqrt(samples)


def theorem3_prediction(spec: MixedMomentSpec) -> complex:
    """Leading term (−1)^{Σn+k} i^{Σn} Π n_r! / (Σn+1)! · N^{Σn}."""
    s = spec.total_order
    c = Fraction(math.prod(math.factorial(n) for n in spec.orders), math.factorial(s + 1))
    phase = (-1) ** ((s + spec.k) % 2) * (1j) ** (s % 4)
    return complex(phase) * float(c) * float(spec.N) ** s


def _all_permutations_equal(N: int, shifts, tol: float = 1e-12) -> bool:
    a = _as_shift_array(shifts)
    ref = shifted_expectation_sum(N, a)
    for p in itertools.permutations(range(a.size)):
        if abs(shifted_expectation_sum(N, a[list(p)]) - ref) > tol * max(1.0, abs(ref)):
            return False
    return True
