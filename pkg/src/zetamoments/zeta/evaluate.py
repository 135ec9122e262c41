"""Riemann zeta evaluation: Euler–Maclaurin everywhere, Riemann–Siegel near the critical line.

Euler–Maclaurin with N terms and J Bernoulli corrections:

    ζ(s) = Σ_{n<N} n^{−s} + N^{1−s}/(s−1) + N^{−s}/2
           + Σ_{j=1}^{J} B_{2j}/(2j)! · s(s+1)…(s+2j−2) · N^{−s−2j+1}.

At large heights the Riemann–Siegel expansion with corrections C_0…C_4 is
evaluated as an analytic function of complex t = −i(s − 1/2), so Cauchy
contours in s can use it directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial import Chebyshev
from scipy.special import bernoulli, loggamma

__all__ = [
    "ZetaEvalConfig",
    "zeta_eval",
    "zeta_batch",
    "zeta_derivative",
    "riemann_siegel_theta",
    "siegel_z",
    "critical_line_derivatives",
]

MAX_DERIVATIVE = 8
_FLOAT_DIGITS = 16
_CHUNK = 2_000_000


@dataclass(frozen=True)
class ZetaEvalConfig:
    """Evaluator settings.

    ``terms`` fixes the Euler–Maclaurin truncation (default max(50, 2|Im s|));
    ``precision`` above 16 digits switches to an mpmath evaluation of the same
    formula.  Heights |t| ≥ ``rs_min_height`` on the strip |σ − 1/2| ≤ 1/2 use
    Riemann–Siegel, with ``rs_nodes`` contour nodes for derivatives.
    """

    terms: int | None = None
    bernoulli_terms: int = 12
    radius: float = 0.25
    precision: int = 15
    nodes: int = 256
    rs_min_height: float = 1000.0
    rs_nodes: int = 32

    def __post_init__(self):
        if not 0 < self.radius < 0.5:
            raise ValueError("contour radius must lie in (0, 0.5)")
        if self.precision < 15:
            raise ValueError("precision must be at least 15 digits")
        if self.bernoulli_terms < 1 or self.bernoulli_terms > 60:
            raise ValueError("bernoulli_terms must be in 1..60")
        if self.terms is not None and self.terms < 2:
            raise ValueError("terms must be at least 2")

    def em_terms(self, s: complex) -> int:
        return self.terms or max(50, int(math.ceil(2 * abs(complex(s).imag))))


DEFAULT = ZetaEvalConfig()


# --------------------------------------------------------- Euler–Maclaurin


@lru_cache(maxsize=8)
def _bernoulli_ratios(J: int) -> np.ndarray:
    b = bernoulli(2 * J)
    return np.array([b[2 * j] / math.factorial(2 * j) for j in range(1, J + 1)])


def _em(s: np.ndarray, N: int, J: int) -> np.ndarray:
    """Euler–Maclaurin ζ(s) for an array s sharing one truncation N."""
    out = np.empty(s.shape, complex)
    logn = np.log(np.arange(1, N, dtype=float))
    step = max(1, _CHUNK // max(N, 1))
    for a in range(0, s.size, step):
        ss = s[a : a + step]
        out[a : a + step] = np.exp(-np.multiply.outer(ss, logn)).sum(axis=-1)
    logN = math.log(N)
    nps = np.exp(-s * logN)
    out += N * nps / (s - 1.0) + 0.5 * nps
    rising = s.copy()
    power = nps / N
    for j, r in enumerate(_bernoulli_ratios(J), start=1):
        out += r * rising * power
        rising = rising * (s + 2 * j - 1) * (s + 2 * j)
        power = power / (N * N)
    return out


def _em_mp(s: complex, N: int, J: int, dps: int) -> complex:
    import mpmath

    with mpmath.workdps(dps + 5):
        sm = mpmath.mpc(s)
        total = mpmath.fsum(mpmath.power(n, -sm) for n in range(1, N))
        NN = mpmath.mpf(N)
        total += NN ** (1 - sm) / (sm - 1) + NN ** (-sm) / 2
        rising = sm
        for j in range(1, J + 1):
            total += mpmath.bernoulli(2 * j) / mpmath.factorial(2 * j) * rising * NN ** (-sm - 2 * j + 1)
            rising *= (sm + 2 * j - 1) * (sm + 2 * j)
        return complex(total)


def _reflect(s: np.ndarray, config: ZetaEvalConfig) -> np.ndarray:
    # ζ(s) = 2^s π^{s−1} sin(πs/2) Γ(1−s) ζ(1−s)
    z1 = zeta_batch(1.0 - s, config)
    lg = loggamma(1.0 - s)
    return np.exp(s * math.log(2) + (s - 1) * math.log(math.pi) + lg) * np.sin(0.5 * math.pi * s) * z1


# ---------------------------------------------------------- Riemann–Siegel


def riemann_siegel_theta(t):
    """θ(t) = arg Γ(1/4 + it/2) − (t/2) log π, analytic in t (complex allowed)."""
    t = np.asarray(t)
    tc = t.astype(complex)
    big = np.abs(tc) >= 100
    out = np.empty(tc.shape, complex)
    if np.any(big):
        x = tc[big]
        inv = 1.0 / x
        inv2 = inv * inv
        corr = inv * (1 / 48 + inv2 * (7 / 5760 + inv2 * (31 / 80640 + inv2 * (127 / 430080 + inv2 * 511 / 1216512))))
        out[big] = 0.5 * x * np.log(x / (2 * math.pi)) - 0.5 * x - math.pi / 8 + corr
    if np.any(~big):
        x = tc[~big]
        out[~big] = (loggamma(0.25 + 0.5j * x) - loggamma(0.25 - 0.5j * x)) / 2j - 0.5 * x * math.log(math.pi)
    if not np.iscomplexobj(t):
        out = out.real
    return out if out.ndim else out[()]


def _psi(p):
    return np.cos(2 * math.pi * (p * p - p - 1 / 16)) / np.cos(2 * math.pi * p)


def _psi_derivatives(p0: np.ndarray, top: int, radius: float = 0.5, m: int = 128) -> np.ndarray:
    """Ψ^{(n)}(p0) for n = 0..top by Cauchy sums; nodes avoid the real axis."""
    phi = 2 * math.pi * (np.arange(m) + 0.5) / m
    w = radius * np.exp(1j * phi)
    vals = _psi(p0[:, None] + w[None, :])
    n = np.arange(top + 1)
    coef = vals @ np.exp(-1j * np.outer(phi, n)) / m
    fact = np.array([math.factorial(k) for k in n], float)
    return (coef * fact / radius**n).real.T


def _rs_c(p: np.ndarray) -> np.ndarray:
    d = _psi_derivatives(p, 12)
    pi2 = math.pi**2
    return np.stack(
        [
            d[0],
            -d[3] / (96 * pi2),
            d[2] / (64 * pi2) + d[6] / (18432 * pi2**2),
            -d[1] / (64 * pi2) - d[5] / (3840 * pi2**2) - d[9] / (5308416 * pi2**3),
            d[0] / (128 * pi2)
            + 19 * d[4] / (24576 * pi2**2)
            + 11 * d[8] / (5898240 * pi2**3)
            + d[12] / (2038431744 * pi2**4),
        ]
    )


@lru_cache(maxsize=1)
def _rs_series() -> tuple[Chebyshev, ...]:
    # p can stray slightly outside [0, 1) on complex contours with a fixed N.
    domain = [-0.15, 1.15]
    return tuple(Chebyshev.interpolate(lambda p, j=j: _rs_c(np.asarray(p, float))[j], 48, domain=domain) for j in range(5))


def _rs_z(t: np.ndarray, nterms: np.ndarray) -> np.ndarray:
    """Riemann–Siegel Z(t) with the main sum cut at ``nterms`` (per point)."""
    t = np.asarray(t)
    real = not np.iscomplexobj(t)
    out = np.empty(t.shape, complex if not real else float)
    th = riemann_siegel_theta(t)
    series = _rs_series()
    for N in np.unique(nterms):
        sel = nterms == N
        tt, thh = t[sel], th[sel]
        n = np.arange(1, N + 1, dtype=float)
        logn, w = np.log(n), 2.0 / np.sqrt(n)
        main = np.empty(tt.shape, out.dtype)
        step = max(1, _CHUNK // int(N))
        for a in range(0, tt.size, step):
            arg = thh[a : a + step, None] - np.multiply.outer(tt[a : a + step], logn)
            main[a : a + step] = np.cos(arg) @ w
        x = tt / (2 * math.pi)
        p = np.sqrt(x) - N
        q = 1.0 / np.sqrt(x)
        corr = np.zeros(tt.shape, out.dtype)
        for c in reversed(series):
            corr = corr * q + c(p)
        sign = -1.0 if N % 2 == 0 else 1.0
        out[sel] = main + sign * np.sqrt(q) * corr
    return out


def _rs_nterms(t) -> np.ndarray:
    return np.floor(np.sqrt(np.abs(np.real(t)) / (2 * math.pi))).astype(np.int64)


def _zeta_rs(s: np.ndarray, nterms: np.ndarray | None = None) -> np.ndarray:
    # ζ(1/2 + it) = e^{−iθ(t)} Z(t), continued to complex t = −i(s − 1/2).
    t = -1j * (s - 0.5)
    neg = t.real < 0
    t = np.where(neg, np.conj(t), t)
    N = _rs_nterms(t) if nterms is None else nterms
    val = np.exp(-1j * riemann_siegel_theta(t)) * _rs_z(t, N)
    return np.where(neg, np.conj(val), val)


# ----------------------------------------------------------------- public


def _use_rs(s: np.ndarray, config: ZetaEvalConfig) -> np.ndarray:
    return (np.abs(s.imag) >= config.rs_min_height) & (np.abs(s.real - 0.5) <= 0.5) & (config.precision <= _FLOAT_DIGITS)


def zeta_batch(s, config: ZetaEvalConfig = DEFAULT, allow_rs: bool = False) -> np.ndarray:
    """ζ at an array of points; Euler–Maclaurin unless ``allow_rs`` and high on the strip."""
    s = np.asarray(s, complex)
    if np.any(s == 1):
        raise ZeroDivisionError("zeta has a pole at s = 1")
    flat = s.ravel()
    out = np.empty(flat.shape, complex)
    rs = _use_rs(flat, config) if allow_rs else np.zeros(flat.shape, bool)
    if rs.any():
        out[rs] = _zeta_rs(flat[rs])
    left = (~rs) & (flat.real < -0.5)
    if left.any():
        out[left] = _reflect(flat[left], config)
    rest = np.nonzero(~rs & ~left)[0]
    J = config.bernoulli_terms
    if config.precision > _FLOAT_DIGITS:
        for i in rest:
            out[i] = _em_mp(complex(flat[i]), config.em_terms(flat[i]), J, config.precision)
    elif rest.size:
        Ns = np.array([config.em_terms(v) for v in flat[rest]])
        for N in np.unique(Ns):
            idx = rest[Ns == N]
            out[idx] = _em(flat[idx], int(N), J)
    return out.reshape(s.shape)


def zeta_eval(s: complex, config: ZetaEvalConfig = DEFAULT) -> complex:
    """ζ(s) by Euler–Maclaurin (functional equation for Re s < −1/2)."""
    return complex(zeta_batch(np.array([s]), config)[0])


def _cauchy_weights(n: int, m: int, r: float) -> tuple[np.ndarray, np.ndarray]:
    phi = 2 * math.pi * np.arange(m) / m
    return r * np.exp(1j * phi), math.factorial(n) * np.exp(-1j * n * phi) / (m * r**n)


def zeta_derivative(s: complex, n: int, config: ZetaEvalConfig = DEFAULT) -> complex:
    """ζ^{(n)}(s) = n!/(2πi) ∮ ζ(w)/(w−s)^{n+1} dw by the trapezoid rule on a circle."""
    if n < 0 or int(n) != n:
        raise ValueError("n must be a non-negative integer")
    if n > MAX_DERIVATIVE and config.precision <= _FLOAT_DIGITS:
        raise ValueError(f"derivatives beyond order {MAX_DERIVATIVE} exceed the accuracy budget")
    if n == 0:
        return zeta_eval(s, config)
    s = complex(s)
    r = config.radius
    if abs(s - 1) <= r * 1.0000001:
        raise ValueError("the contour would enclose the pole at s = 1")
    if _use_rs(np.array([s]), config)[0]:
        off, wts = _cauchy_weights(n, config.rs_nodes, r)
        t0 = abs(s.imag)
        N = np.full(off.shape, int(math.floor(math.sqrt(t0 / (2 * math.pi)))))
        vals = _zeta_rs(s + off, N)
    else:
        off, wts = _cauchy_weights(n, config.nodes, r)
        vals = zeta_batch(s + off, config)
    return complex(vals @ wts)


def siegel_z(t, config: ZetaEvalConfig = DEFAULT):
    """Hardy's Z(t) = e^{iθ(t)} ζ(1/2 + it) for real t, vectorized."""
    t = np.asarray(t, float)
    flat = t.ravel()
    out = np.empty(flat.shape)
    high = np.abs(flat) >= config.rs_min_height
    if high.any():
        th = np.abs(flat[high])
        out[high] = _rs_z(th, _rs_nterms(th))
    if (~high).any():
        tl = flat[~high]
        z = zeta_batch(0.5 + 1j * tl, config)
        out[~high] = (np.exp(1j * riemann_siegel_theta(tl)) * z).real
    return out.reshape(t.shape) if t.ndim else float(out[0])


def critical_line_derivatives(gammas, max_order: int, config: ZetaEvalConfig = DEFAULT) -> np.ndarray:
    """ζ^{(j)}(1/2 + iγ) for j = 0..max_order; rows are orders, columns ordinates."""
    g = np.asarray(gammas, float)
    if max_order > MAX_DERIVATIVE and config.precision <= _FLOAT_DIGITS:
        raise ValueError(f"derivatives beyond order {MAX_DERIVATIVE} exceed the accuracy budget")
    out = np.empty((max_order + 1, g.size), complex)
    r = config.radius
    orders = np.arange(max_order + 1)
    high = np.nonzero(np.abs(g) >= config.rs_min_height)[0]
    if high.size:
        m = config.rs_nodes
        phi = 2 * math.pi * np.arange(m) / m
        off = r * np.exp(1j * phi)
        W = np.exp(-1j * np.outer(phi, orders)) / m
        fac = np.array([math.factorial(j) / r**j for j in orders])
        step = max(1, 20_000)
        for a in range(0, high.size, step):
            idx = high[a : a + step]
            pts = 0.5 + 1j * g[idx, None] + off[None, :]
            N = np.repeat(_rs_nterms(g[idx])[:, None], m, axis=1)
            vals = _zeta_rs(pts.ravel(), N.ravel()).reshape(pts.shape)
            out[:, idx] = ((vals @ W) * fac).T
    low = np.nonzero(np.abs(g) < config.rs_min_height)[0]
    if low.size:
        m = config.nodes
        phi = 2 * math.pi * np.arange(m) / m
        off = r * np.exp(1j * phi)
        W = np.exp(-1j * np.outer(phi, orders)) / m
        fac = np.array([math.factorial(j) / r**j for j in orders])
        for i in low:
            vals = zeta_batch(0.5 + 1j * g[i] + off, config)
            out[:, i] = (vals @ W) * fac
    return out
