"""Discrete sums over zeros: derivative moments, P_X products and the Landau sum."""

from __future__ import annotations

import cmath
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.special import rgamma

from ..euler import DerivativeSpec, Theorem8Prediction, landau_main_term, p_x_derivatives, p_x_power_eval, theorem8_prediction
from ..numerics import fsum_complex
from .evaluate import DEFAULT, MAX_DERIVATIVE, ZetaEvalConfig, critical_line_derivatives
from .zeros import ZeroDataset, n_of_t

__all__ = [
    "DiscreteMomentReport",
    "PXSumReport",
    "conjecture_prediction",
    "conjecture6_prediction",
    "derivative_table",
    "discrete_moment",
    "discrete_moment_checkpoints",
    "discrete_power_moment",
    "p_x_sum_over_zeros",
    "landau_empirical",
]

_ZERO_CHUNK = 4096


@dataclass(frozen=True)
class DiscreteMomentReport:
    """Sum over γ ≤ T with predictions in both log(T/2π) and log T normalizations."""

    T: float
    count: int
    sum: complex
    normalized: complex
    prediction: complex
    ratio: complex
    prediction_log_t: complex
    ratio_log_t: complex

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def _ratio(a: complex, b: complex) -> complex:
    return a / b if b != 0 else complex("nan")


def _check_orders(orders: Sequence[int]) -> tuple[int, ...]:
    o = tuple(int(n) for n in orders)
    if any(n < 0 for n in o) or any(int(n) != n for n in orders):
        raise ValueError("orders must be non-negative integers")
    if o and max(o) > MAX_DERIVATIVE:
        raise ValueError(f"orders above {MAX_DERIVATIVE} are not supported")
    return o


def conjecture_prediction(orders: Sequence[int], T: float, log_t: float | None = None) -> complex:
    """(−1)^{Σn+k} Π n_r!/(Σn+1)! · L^{Σn}, L = log(T/2π) unless ``log_t`` is given.

    An order of zero makes every summand ζ(ρ)·… vanish, so the prediction is 0.
    """
    o = _check_orders(orders)
    if not o:
        return 1.0 + 0j
    if 0 in o:
        return 0j
    L = math.log(T / (2 * math.pi)) if log_t is None else log_t
    total = sum(o)
    sign = -1 if (total + len(o)) % 2 else 1
    coef = math.prod(math.factorial(n) for n in o) / math.factorial(total + 1)
    return complex(sign * coef * L**total)


def conjecture6_prediction(k: complex, T: float, log_t: float | None = None) -> complex:
    """L^k / Γ(k+2) for the k-th moment of ζ′; Re k must exceed −3."""
    kc = complex(k)
    if kc.real <= -3:
        raise ValueError("Re k must exceed -3")
    L = math.log(T / (2 * math.pi)) if log_t is None else log_t
    return complex(rgamma(kc + 2) * cmath.exp(kc * math.log(L)))


def _derivs_chunk(args):
    gammas, top, config = args
    return critical_line_derivatives(gammas, top, config)


def derivative_table(gammas: np.ndarray, max_order: int, config: ZetaEvalConfig = DEFAULT, workers: int = 1) -> np.ndarray:
    """ζ^{(j)}(1/2 + iγ), j = 0..max_order, in fixed chunks (worker-count independent)."""
    g = np.asarray(gammas, float)
    chunks = [(g[a : a + _ZERO_CHUNK], max_order, config) for a in range(0, g.size, _ZERO_CHUNK)]
    if workers > 1 and len(chunks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_derivs_chunk, chunks))
    else:
        parts = [_derivs_chunk(c) for c in chunks]
    if not parts:
        return np.zeros((max_order + 1, 0), complex)
    return np.concatenate(parts, axis=1)


def _products(table: np.ndarray, orders: tuple[int, ...], count: int) -> np.ndarray:
    out = np.ones(count, complex)
    for n in orders:
        out = out * table[n, :count]
    return out


def _report(T: float, count: int, total: complex, orders: tuple[int, ...]) -> DiscreteMomentReport:
    normalized = total / count
    pred = conjecture_prediction(orders, T)
    pred_t = conjecture_prediction(orders, T, log_t=math.log(T))
    return DiscreteMomentReport(T, count, total, normalized, pred, _ratio(normalized, pred), pred_t, _ratio(normalized, pred_t))


def discrete_moment(
    dataset: ZeroDataset,
    orders: Sequence[int],
    T: float,
    config: ZetaEvalConfig = DEFAULT,
    table: np.ndarray | None = None,
    workers: int = 1,
) -> DiscreteMomentReport:
    """(1/N(T)) Σ_{γ≤T} Π_r ζ^{(n_r)}(1/2 + iγ) with N(T) the empirical count."""
    o = _check_orders(orders)
    if dataset.count and T > dataset.ordinates[-1] * (1 + 1e-12) + 1e-9:
        raise ValueError("T exceeds the largest ordinate in the dataset")
    count = n_of_t(dataset, T)
    if count == 0:
        raise ValueError("no ordinates up to T")
    if not o:
        return _report(T, count, complex(count), o)
    if table is None or table.shape[0] <= max(o) or table.shape[1] < count:
        table = derivative_table(dataset.ordinates[:count], max(o), config, workers)
    return _report(T, count, fsum_complex(_products(table, o, count)), o)


def discrete_moment_checkpoints(
    dataset: ZeroDataset,
    orders: Sequence[int],
    checkpoints: Sequence[int],
    config: ZetaEvalConfig = DEFAULT,
    table: np.ndarray | None = None,
    workers: int = 1,
) -> list[DiscreteMomentReport]:
    """Reports at zero-count checkpoints; T is the ordinate of the last counted zero."""
    o = _check_orders(orders)
    cps = sorted(int(c) for c in checkpoints)
    if not cps or cps[0] < 1 or cps[-1] > dataset.count:
        raise ValueError("checkpoints must lie in 1..dataset.count")
    top = max(o) if o else 0
    if o and (table is None or table.shape[0] <= top or table.shape[1] < cps[-1]):
        table = derivative_table(dataset.ordinates[: cps[-1]], top, config, workers)
    out = []
    for c in cps:
        T = float(dataset.ordinates[c - 1])
        total = complex(c) if not o else fsum_complex(_products(table, o, c))
        out.append(_report(T, c, total, o))
    return out


def discrete_power_moment(
    dataset: ZeroDataset, k: complex, T: float, config: ZetaEvalConfig = DEFAULT, table: np.ndarray | None = None
) -> DiscreteMomentReport:
    """(1/N(T)) Σ ζ′(ρ)^k with principal-branch powers, against L^k/Γ(k+2)."""
    count = n_of_t(dataset, T)
    if count == 0:
        raise ValueError("no ordinates up to T")
    if table is None or table.shape[0] < 2 or table.shape[1] < count:
        table = derivative_table(dataset.ordinates[:count], 1, config)
    total = fsum_complex(np.exp(complex(k) * np.log(table[1, :count])))
    normalized = total / count
    pred = conjecture6_prediction(k, T)
    pred_t = conjecture6_prediction(k, T, log_t=math.log(T))
    return DiscreteMomentReport(T, count, total, normalized, pred, _ratio(normalized, pred), pred_t, _ratio(normalized, pred_t))


@dataclass(frozen=True)
class PXSumReport:
    T: float
    X: float
    count: int
    sum: complex
    normalized: complex
    prediction: Theorem8Prediction


def p_x_sum_over_zeros(
    dataset: ZeroDataset,
    X: float | None,
    spec,
    T: float,
    k: float | None = None,
) -> PXSumReport:
    """Σ_{γ≤T} Π_r P_X^{(n_r)}(ρ); with ``k`` set and all orders zero, Σ P_X(ρ)^k.

    ``X=None`` selects X = log T.
    """
    spec = spec if isinstance(spec, DerivativeSpec) else DerivativeSpec(tuple(spec))
    X = math.log(T) if X is None else float(X)
    count = n_of_t(dataset, T)
    if count == 0:
        raise ValueError("no ordinates up to T")
    rho = 0.5 + 1j * dataset.ordinates[:count]
    if k is not None:
        if any(spec.orders):
            raise ValueError("real powers are only defined with all orders zero")
        # exp(k · log P_X) with log P_X the finite prime-power sum, not a principal log.
        vals = p_x_power_eval(X, float(k), rho)
        total = fsum_complex(vals)
        pred = theorem8_prediction(X, spec, T)
    else:
        P = p_x_derivatives(X, rho, max(spec.orders))
        vals = np.ones(count, complex)
        for n in spec.orders:
            vals = vals * P[n]
        total = fsum_complex(vals)
        pred = theorem8_prediction(X, spec, T)
    return PXSumReport(T, X, count, total, total / count, pred)


def landau_empirical(dataset: ZeroDataset, m: int, T: float) -> tuple[complex, float]:
    """(Σ_{γ≤T} m^{−1/2−iγ}, −(T/2π)Λ(m)/m)."""
    if m < 2:
        raise ValueError("the Landau formula needs m >= 2")
    count = n_of_t(dataset, T)
    g = dataset.ordinates[:count]
    vals = np.exp(-(0.5 + 1j * g) * math.log(m))
    return fsum_complex(vals), landau_main_term(m, T)
