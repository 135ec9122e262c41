"""Truncated Euler products P_X(s) = exp(Σ_{n≤X} Λ(n)/log n · n^{−s}) as Dirichlet series.

Coefficient arrays are indexed by m (index 0 unused).  Float arrays are the
default; ``exact=True`` switches to object arrays of ``Fraction`` for the
equality tests on small ranges.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy.special import exp1

__all__ = [
    "primes_up_to",
    "PrimeTable",
    "DerivativeSpec",
    "von_mangoldt",
    "DirichletPolynomial",
    "log_p_x_series",
    "dirichlet_exp",
    "dirichlet_convolve",
    "divisor_function",
    "p_x_eval",
    "p_x_power_eval",
    "p_x_log_derivatives",
    "p_x_derivatives",
    "derivative_series",
    "b_coefficients",
    "landau_main_term",
    "ErrorClass",
    "theorem8_prediction",
    "arithmetic_factor_a",
    "rankin_tail_bound",
]

EXACT_LIMIT = 10_000
DEFAULT_CUTOFF_CAP = 1_000_000


def primes_up_to(n: int) -> np.ndarray:
    """Primes ≤ n by the sieve of Eratosthenes."""
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    sieve[4::2] = False
    for p in range(3, math.isqrt(n) + 1, 2):
        if sieve[p]:
            sieve[p * p :: 2 * p] = False
    return np.nonzero(sieve)[0].astype(np.int64)


@dataclass(frozen=True)
class PrimeTable:
    """Prime powers p^j ≤ bound with their base primes; Λ(p^j) = log p."""

    bound: int
    powers: np.ndarray
    bases: np.ndarray
    exponents: np.ndarray

    @classmethod
    @lru_cache(maxsize=32)
    def build(cls, bound: int) -> "PrimeTable":
        ps, bs, es = [], [], []
        for p in primes_up_to(bound).tolist():
            q, j = p, 1
            while q <= bound:
                ps.append(q)
                bs.append(p)
                es.append(j)
                q *= p
                j += 1
        order = np.argsort(ps, kind="stable")
        return cls(
            bound,
            np.array(ps, dtype=np.int64)[order],
            np.array(bs, dtype=np.int64)[order],
            np.array(es, dtype=np.int64)[order],
        )

    def mangoldt(self) -> np.ndarray:
        return np.log(self.bases.astype(float))


def von_mangoldt(m: int) -> float:
    """Λ(m) = log p if m = p^j, else 0."""
    if m < 1:
        raise ValueError("m must be positive")
    if m == 1:
        return 0.0
    p = _smallest_prime_factor(m)
    while m % p == 0:
        m //= p
    return math.log(p) if m == 1 else 0.0


def _smallest_prime_factor(m: int) -> int:
    if m % 2 == 0:
        return 2
    for p in range(3, math.isqrt(m) + 1, 2):
        if m % p == 0:
            return p
    return m


@lru_cache(maxsize=8)
def _big_omega(M: int) -> np.ndarray:
    """Ω(m) for 0 ≤ m ≤ M (Ω(0) = Ω(1) = 0)."""
    om = np.zeros(M + 1, dtype=np.int64)
    for p in primes_up_to(M).tolist():
        q = p
        while q <= M:
            om[q::q] += 1
            q *= p
    return om


@dataclass(frozen=True)
class DerivativeSpec:
    """Orders (n_1, …, n_k) of P_X derivatives; zeros allowed, k ≥ 1."""

    orders: tuple[int, ...]

    def __post_init__(self):
        o = tuple(int(n) for n in self.orders)
        if not o:
            raise ValueError("need at least one order")
        if any(n < 0 for n in o) or any(int(n) != n for n in self.orders):
            raise ValueError("orders must be non-negative integers")
        object.__setattr__(self, "orders", o)

    @property
    def k(self) -> int:
        return len(self.orders)


def _orders(spec) -> tuple[int, ...]:
    return spec.orders if isinstance(spec, DerivativeSpec) else DerivativeSpec(tuple(spec)).orders


# ------------------------------------------------------- Dirichlet series


@dataclass(frozen=True)
class DirichletPolynomial:
    """Σ_{m=1}^{M} a(m) m^{−s}; ``coeffs[m] = a(m)`` and ``coeffs[0]`` is unused."""

    coeffs: np.ndarray

    @property
    def cutoff(self) -> int:
        return len(self.coeffs) - 1

    @property
    def exact(self) -> bool:
        return self.coeffs.dtype == object

    def __getitem__(self, m: int):
        if m < 1:
            raise IndexError("Dirichlet coefficients start at m = 1")
        if m > self.cutoff:
            return 0
        return self.coeffs[m]

    def as_float(self) -> np.ndarray:
        return np.array([complex(c) for c in self.coeffs]) if self.exact else self.coeffs

    def support(self) -> np.ndarray:
        c = self.as_float()
        return np.nonzero(c[1:])[0] + 1

    def evaluate(self, s):
        """Σ a(m) m^{−s}, vectorized over s."""
        s = np.asarray(s, complex)
        m = self.support()
        a = self.as_float()[m]
        logm = np.log(m.astype(float))
        out = np.exp(-np.multiply.outer(s, logm)) @ a
        return out if out.ndim else complex(out)

    def weighted(self, j: int) -> "DirichletPolynomial":
        """Elementwise (−log m)^j, i.e. the j-th formal derivative in s."""
        c = self.as_float().astype(complex)
        m = np.arange(len(c), dtype=float)
        with np.errstate(divide="ignore"):
            w = (-np.log(np.where(m > 0, m, 1.0))) ** j
        return DirichletPolynomial(c * w)


def _zeros(M: int, exact: bool) -> np.ndarray:
    if exact:
        out = np.empty(M + 1, dtype=object)
        out[:] = Fraction(0)
        return out
    return np.zeros(M + 1, dtype=complex)


def log_p_x_series(X: float, cutoff: int | None = None, exact: bool = False) -> DirichletPolynomial:
    """Coefficients Λ(n)/log n (= 1/j at n = p^j) for n ≤ X."""
    top = int(math.floor(X + 1e-9))
    if top < 2:
        raise ValueError("X must be at least 2")
    M = cutoff or top
    c = _zeros(M, exact)
    pt = PrimeTable.build(top)
    for q, j in zip(pt.powers.tolist(), pt.exponents.tolist()):
        if q <= M:
            c[q] = Fraction(1, j) if exact else 1.0 / j
    return DirichletPolynomial(c)


def dirichlet_convolve(a: DirichletPolynomial, b: DirichletPolynomial, cutoff: int) -> DirichletPolynomial:
    """(a*b)(m) = Σ_{d|m} a(d) b(m/d) for m ≤ cutoff."""
    exact = a.exact or b.exact
    out = _zeros(cutoff, exact)
    bc = b.coeffs
    for d in a.support().tolist():
        if d > cutoff:
            break
        ad = a.coeffs[d]
        top = min(cutoff // d, b.cutoff)
        if top < 1:
            continue
        out[d : d * top + 1 : d] += ad * bc[1 : top + 1]
    return DirichletPolynomial(out)


def _exp_by_recursion(series: DirichletPolynomial, k, M: int, exact: bool) -> np.ndarray:
    # Completely additive weight Ω: a(m)Ω(m) = k Σ_{d|m} c(d)Ω(d) a(m/d).
    om = _big_omega(M)
    src = series.coeffs
    ds = [d for d in series.support().tolist() if d <= M]
    cw = {d: k * src[d] * int(om[d]) for d in ds}
    a = _zeros(M, exact)
    a[1] = Fraction(1) if exact else 1.0
    lo = 2
    while lo <= M:
        hi = min(2 * lo - 1, M)  # every m/d with d ≥ 2 lies below lo
        acc = _zeros(hi - lo, exact)[: hi - lo + 1]
        for d in ds:
            q0 = -(-lo // d)
            q1 = hi // d
            if q1 < q0:
                continue
            acc[d * q0 - lo : d * q1 - lo + 1 : d] += cw[d] * a[q0 : q1 + 1]
        w = om[lo : hi + 1]
        if exact:
            a[lo : hi + 1] = [x / int(n) if n else Fraction(0) for x, n in zip(acc, w)]
        else:
            a[lo : hi + 1] = acc / np.maximum(w, 1)
        lo = hi + 1
    return a


def _exp_by_convolution(series: DirichletPolynomial, k, M: int, exact: bool) -> np.ndarray:
    # Σ_r (kS)^{*r}/r!; S has no constant term so r ≤ log2 M suffices.
    base = DirichletPolynomial(series.coeffs[: M + 1] * k if series.cutoff >= M else _resize(series, M).coeffs * k)
    total = _zeros(M, exact)
    total[1] = Fraction(1) if exact else 1.0
    term = DirichletPolynomial(total.copy())
    r = 1
    while (1 << r) <= M:
        term = dirichlet_convolve(term, base, M)
        scale = Fraction(1, r) if exact else 1.0 / r
        term = DirichletPolynomial(term.coeffs * scale)
        total = total + term.coeffs
        r += 1
    return total


def _resize(series: DirichletPolynomial, M: int) -> DirichletPolynomial:
    c = _zeros(M, series.exact)
    top = min(M, series.cutoff)
    c[: top + 1] = series.coeffs[: top + 1]
    return DirichletPolynomial(c)


def dirichlet_exp(series: DirichletPolynomial, k, cutoff: int, method: str = "recursion", X: float | None = None) -> DirichletPolynomial:
    """Coefficients of exp(k·series) under Dirichlet convolution, m ≤ cutoff.

    ``X`` is the prime-power cutoff of ``series`` (defaults to its largest
    support element); a cutoff below it would silently drop terms.
    """
    if series.cutoff >= 1 and series.coeffs[1] != 0:
        raise ValueError("series must have zero constant term")
    sup = series.support()
    top = X if X is not None else (int(sup.max()) if sup.size else 1)
    if cutoff < top:
        raise ValueError("cutoff must be at least X")
    exact = series.exact
    if exact:
        k = Fraction(k)
    s = _resize(series, cutoff)
    if method == "recursion":
        return DirichletPolynomial(_exp_by_recursion(s, k, cutoff, exact))
    if method == "convolution":
        return DirichletPolynomial(_exp_by_convolution(s, k, cutoff, exact))
    raise ValueError(f"unknown method {method!r}")


def divisor_function(k: int, M: int) -> np.ndarray:
    """d_k(m) for m ≤ M as Python ints (index 0 unused)."""
    d = [0] + [1] * M
    for _ in range(k - 1):
        new = [0] * (M + 1)
        for a in range(1, M + 1):
            for m in range(a, M + 1, a):
                new[m] += d[a]
        d = new
    return np.array(d, dtype=object)


# ------------------------------------------------------- P_X evaluation


def _log_px_terms(X: float):
    top = int(math.floor(X + 1e-9))
    pt = PrimeTable.build(top)
    n = pt.powers.astype(float)
    return np.log(n), 1.0 / pt.exponents.astype(float)


def p_x_log_derivatives(X: float, s, order: int) -> np.ndarray:
    """S^{(j)}(s) for j = 0..order, S(s) = Σ_{n≤X} Λ(n)/log n · n^{−s}."""
    s = np.asarray(s, complex)
    logn, coef = _log_px_terms(X)
    base = np.exp(-np.multiply.outer(s, logn)) * coef
    return np.stack([base @ (-logn) ** j for j in range(order + 1)])


def p_x_eval(X: float, s):
    out = np.exp(p_x_log_derivatives(X, s, 0)[0])
    return out if out.ndim else complex(out)


def p_x_power_eval(X: float, k, s):
    """P_X(s)^k = exp(k·log P_X(s)) with log P_X the finite prime-power sum."""
    out = np.exp(k * p_x_log_derivatives(X, s, 0)[0])
    return out if out.ndim else complex(out)


def p_x_derivatives(X: float, s, order: int) -> np.ndarray:
    """P_X^{(n)}(s) for n = 0..order via P^{(n)} = Σ_j C(n−1, j) S^{(j+1)} P^{(n−1−j)}."""
    S = p_x_log_derivatives(X, s, order)
    P = [np.exp(S[0])]
    for n in range(1, order + 1):
        acc = np.zeros_like(P[0])
        for j in range(n):
            acc = acc + math.comb(n - 1, j) * S[j + 1] * P[n - 1 - j]
        P.append(acc)
    return np.stack(P)


def derivative_series(X: float, j: int, cutoff: int | None = None) -> DirichletPolynomial:
    """Coefficients of P_X^{(j)}(s): a_1(m)(−log m)^j."""
    top = int(math.floor(X + 1e-9))
    M = cutoff or default_cutoff(X, (j,))
    a1 = dirichlet_exp(log_p_x_series(X, M), 1, M, X=top)
    return a1.weighted(j) if j else a1


def default_cutoff(X: float, orders: Sequence[int]) -> int:
    return int(min(X ** (sum(orders) + 1), DEFAULT_CUTOFF_CAP))


def b_coefficients(X: float, spec, cutoff: int | None = None) -> DirichletPolynomial:
    """Dirichlet convolution of derivative_series(n_1) … derivative_series(n_k)."""
    orders = _orders(spec)
    M = cutoff or default_cutoff(X, orders)
    out = derivative_series(X, orders[0], M)
    for n in orders[1:]:
        out = dirichlet_convolve(out, derivative_series(X, n, M), M)
    return out


def rankin_tail_bound(X: float, k: float, sigma: float, cutoff: int) -> float:
    """Bound on Σ_{m>M} |a_k(m)| m^{−σ} via Rankin's trick, minimized over η."""
    logn, coef = _log_px_terms(X)
    best = math.inf
    for eta in np.linspace(0.05, max(0.1, sigma - 0.05), 12):
        expo = abs(k) * float(np.sum(coef * np.exp(-(sigma - eta) * logn)))
        best = min(best, math.exp(expo - eta * math.log(cutoff)))
    return best


# ------------------------------------------------------------ predictions


def landau_main_term(m: int, T: float) -> float:
    """−(T/2π) Λ(m)/m."""
    if m < 2:
        raise ValueError("the main term is only defined for m >= 2")
    return -(T / (2 * math.pi)) * von_mangoldt(m) / m


class ErrorClass(enum.Enum):
    ALL_ZERO = "all_zero"
    ONE_NONZERO = "one_nonzero"
    MANY_NONZERO = "many_nonzero"


@dataclass(frozen=True)
class Theorem8Prediction:
    main: float
    error_class: ErrorClass
    log_log_exponent: int | None


def n_of_t_main(T: float) -> float:
    """(T/2π) log(T/2πe)."""
    return T / (2 * math.pi) * math.log(T / (2 * math.pi * math.e))


def theorem8_prediction(X: float, spec, T: float) -> Theorem8Prediction:
    """Main term and error class of Σ_{γ≤T} Π P_X^{(n_r)}(ρ)."""
    orders = _orders(spec)
    if T > math.e and X > 4.0 * math.log(T):
        warnings.warn("X is well beyond the X = O(log T) regime", RuntimeWarning, stacklevel=2)
    nonzero = [n for n in orders if n]
    if not nonzero:
        return Theorem8Prediction(n_of_t_main(T), ErrorClass.ALL_ZERO, 1)
    if len(nonzero) == 1:
        return Theorem8Prediction(0.0, ErrorClass.ONE_NONZERO, 1 + nonzero[0])
    return Theorem8Prediction(0.0, ErrorClass.MANY_NONZERO, None)


def _prime_bound_for(k: float, tol: float) -> int:
    # After the E_1 tail correction the residual is roughly c·P^{−3/2}.
    c = max(k * k * (k - 1) ** 2 / 4.0, 1e-300)
    P = 10_000
    while P < 10_000_000 and c * P**-1.5 > tol:
        P *= 10
    return P


def arithmetic_factor_a(k: float, tol: float = 1e-12, prime_bound: int | None = None) -> float:
    """a(k) = Π_p (1 − 1/p)^{k²} Σ_m (Γ(m+k)/(m!Γ(k)))² p^{−m}.

    The product runs over p ≤ P; the remaining primes contribute log-factors
    ≈ −k²(k−1)²/(4p²), summed as −k²(k−1)²/4 · E_1(log P).
    """
    if k <= -0.5:
        raise ValueError("k must exceed -1/2")
    if k == 0:
        return 1.0
    P = prime_bound or _prime_bound_for(k, tol)
    p = primes_up_to(P).astype(float)
    x = 1.0 / p
    term = np.ones_like(p)
    total = np.ones_like(p)
    m = 0
    while True:
        term = term * ((m + k) / (m + 1)) ** 2 * x
        total = total + term
        m += 1
        if np.max(np.abs(term)) < 1e-16 or m > 2000:
            break
    logs = k * k * np.log1p(-x) + np.log(total)
    tail = -(k * k * (k - 1) ** 2 / 4.0) * float(exp1(math.log(P)))
    return math.exp(math.fsum(logs.tolist()) + tail)
