"""Acceptance suite: one function per criterion, each returning a :class:`CriterionResult`.

``quick=True`` shrinks sample counts and ranges so the whole suite runs in
about a minute; verdicts in quick mode are indicative only.
"""

from __future__ import annotations

import itertools
import math
import os
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable

import numpy as np

from . import euler
from .exact import (
    MixedMomentSpec,
    basor_forrester_expectation,
    derivative_moment,
    exact_derivative_moment,
    shifted_expectation_sum,
    simplex_integral,
    simplex_integral_iterated,
    simplex_integral_mc,
    theorem3_prediction,
    toeplitz_expectation,
)
from .hybrid import HybridParams, SmoothingKernel, assembled_theorem13, hybrid_moment_mc, theorem13_prediction
from .hybrid.fx import s_m_closed_form, s_m_numeric
from .rmt import mixed_moment_mc
from .zeta import ZeroDataset, generate_zeros, load_zeros
from .zeta.moments import derivative_table, discrete_moment_checkpoints, landau_empirical, p_x_sum_over_zeros

__all__ = ["CriterionResult", "CRITERIA", "run_criterion", "run_suite", "default_zeros", "format_results"]

DEFAULT_SEED = 20240611
ZEROS_ENV = "ZETAMOMENTS_ZEROS"


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    metrics: dict = field(default_factory=dict)
    runtime: float = 0.0

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        parts = " ".join(f"{k}={_fmt(v)}" for k, v in self.metrics.items())
        return f"criterion {self.number:2d} {verdict} {self.title} | {parts}"


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, ".17g")
    if isinstance(v, complex):
        return f"{v.real:.17g}{v.imag:+.17g}j"
    if isinstance(v, (list, tuple)):
        return "[" + ",".join(_fmt(x) for x in v) + "]"
    return str(v)


def format_results(results: list[CriterionResult]) -> str:
    return "".join(r.line() + "\n" for r in results)


# ------------------------------------------------------------------ data


_ZEROS_CACHE: dict = {}


def default_zeros(path: str | os.PathLike | ZeroDataset | None = None, count: int = 100_000) -> ZeroDataset:
    """Zeros from ``path``, $ZETAMOMENTS_ZEROS or the bundled data file, else generated.

    An already loaded dataset is truncated to ``count`` and returned.
    """
    if isinstance(path, ZeroDataset):
        path.check_standard()
        return path if path.count <= count else path.truncated(count)
    candidates = [path, os.environ.get(ZEROS_ENV), Path(__file__).resolve().parents[2] / "data" / "zeros_100k.txt"]
    for c in candidates:
        if c and Path(c).is_file():
            key = (str(c), count)
            if key not in _ZEROS_CACHE:
                ds = load_zeros(c, limit=count)
                ds.check_standard()
                _ZEROS_CACHE[key] = ds
            return _ZEROS_CACHE[key]
    key = ("generated", count)
    if key not in _ZEROS_CACHE:
        _ZEROS_CACHE[key] = generate_zeros(count)
    return _ZEROS_CACHE[key]


def _rng(seed: int, stream: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=np.array([seed, stream], dtype=np.uint64)))


# -------------------------------------------------------------- criteria


def criterion_1(quick: bool = False, seed: int = DEFAULT_SEED, **_) -> CriterionResult:
    """Nested sum vs Toeplitz vs extrapolated Basor–Forrester."""
    rng = _rng(seed, 1)
    reps = 5 if quick else 20
    worst_t = worst_b = 0.0
    for N in range(2, 9):
        for k in (1, 2, 3):
            for _ in range(reps):
                a = 0.3 * np.sqrt(rng.random(k)) * np.exp(2j * math.pi * rng.random(k))
                s = shifted_expectation_sum(N, a)
                t = toeplitz_expectation(N, a)
                b = basor_forrester_expectation(N, a)
                worst_t = max(worst_t, abs(s - t) / abs(s))
                worst_b = max(worst_b, abs(s - b) / abs(s), abs(t - b) / abs(t))
    return CriterionResult(
        1,
        "route equivalence",
        worst_t <= 1e-9 and worst_b <= 1e-5,
        {"max_rel_sum_vs_toeplitz": worst_t, "max_rel_vs_basor_forrester": worst_b},
    )


CRITERION2_ORDERS = [(1,), (2,), (1, 1), (2, 1), (1, 1, 1)]


def criterion_2(quick: bool = False, **_) -> CriterionResult:
    """|ratio − 1| ≤ 5/N for the extracted moment against the leading term."""
    Ns = (25, 50) if quick else (25, 50, 100, 200)
    metrics = {}
    ok = True
    for o in CRITERION2_ORDERS:
        scaled = []
        for N in Ns:
            spec = MixedMomentSpec(N, o)
            r = derivative_moment(spec) / theorem3_prediction(spec)
            scaled.append(N * abs(r - 1))
        label = "".join(map(str, o))
        metrics[f"N_dev_{label}"] = [float(x) for x in scaled]
        good = all(x <= 5 for x in scaled)
        metrics[f"pass_{label}"] = good
        ok &= good
    return CriterionResult(2, "leading-order convergence, N|ratio-1| <= 5", ok, metrics)


def criterion_3(quick: bool = False, **_) -> CriterionResult:
    """k=1, n=1 extracted moment against i(N+1)/2, both extraction routes."""
    Ns = range(2, 51, 8 if quick else 1)
    worst_sum = worst_toep = 0.0
    for N in Ns:
        target = 0.5j * (N + 1)
        spec = MixedMomentSpec(N, (1,))
        worst_sum = max(worst_sum, abs(derivative_moment(spec) - target))
        worst_toep = max(worst_toep, abs(derivative_moment(spec, route="toeplitz") - target))
        if complex(exact_derivative_moment(spec)) != target:
            return CriterionResult(3, "first-derivative mean", False, {"exact_mismatch_N": N})
    return CriterionResult(
        3,
        "first-derivative mean i(N+1)/2",
        worst_sum <= 1e-10 and worst_toep <= 1e-10,
        {"max_abs_err_sum": worst_sum, "max_abs_err_toeplitz": worst_toep},
    )


def criterion_4(quick: bool = False, seed: int = DEFAULT_SEED, workers: int = 1, **_) -> CriterionResult:
    samples = 20_000 if quick else 200_000
    est = mixed_moment_mc(MixedMomentSpec(20, (1,)), samples, seed, workers=workers)
    z = abs(est.mean - 10.5j) / est.stderr
    return CriterionResult(
        4,
        "Monte Carlo concordance at N=20",
        z <= 3 and est.stderr <= 0.5,
        {"samples": samples, "mean": est.mean, "stderr": est.stderr, "z_score": z},
    )


def criterion_5(quick: bool = False, seed: int = DEFAULT_SEED, **_) -> CriterionResult:
    samples = 100_000 if quick else 1_000_000
    orders = [o for r in (1, 2, 3) for o in itertools.product((1, 2, 3), repeat=r)]
    identical = all(simplex_integral(o) == simplex_integral_iterated(o) for o in orders)
    worst_z = 0.0
    for i, o in enumerate(orders):
        est, se = simplex_integral_mc(o, samples, seed + i)
        worst_z = max(worst_z, abs(est - float(simplex_integral(o))) / se)
    return CriterionResult(
        5,
        "simplex integral",
        identical and worst_z <= 3,
        {"orders_checked": len(orders), "rational_routes_identical": identical, "max_z_score": worst_z},
    )


def criterion_6(quick: bool = False, **_) -> CriterionResult:
    log_x = 5.0
    Ys = (10.0,) if quick else (5.0, 10.0, 50.0)
    worst = 0.0
    top = 2 * math.ceil(log_x)
    for Y in Ys:
        params = HybridParams(log_x, SmoothingKernel(Y))
        for k in (1.0, 2.5):
            num = s_m_numeric(params, k, np.arange(0, top + 1))
            closed = np.array([s_m_closed_form(params, k, m) for m in range(0, top + 1)])
            worst = max(worst, float(np.max(np.abs(num - closed))))
    return CriterionResult(6, "Fourier coefficients closed vs numeric", worst <= 1e-6, {"max_abs_diff": worst})


def criterion_7(quick: bool = False, seed: int = DEFAULT_SEED, **_) -> CriterionResult:
    N = 100
    kernel = SmoothingKernel(10.0)
    spread = gap = 0.0
    for k in (1.0, 2.0, -1.0, 0.5):
        pred = theorem13_prediction(k, N)
        vals = [assembled_theorem13(HybridParams(lx, kernel), k, N) for lx in (3.0, 5.0, 8.0)]
        spread = max(spread, max(abs(v - vals[0]) / abs(vals[0]) for v in vals))
        gap = max(gap, max(abs(v - pred) / abs(pred) for v in vals))
    samples = 5_000 if quick else 100_000
    params = HybridParams(3.0, kernel, N)
    est = hybrid_moment_mc(params, 1, samples, seed)
    dev = abs(est.mean / (0.5j * N) - 1)
    return CriterionResult(
        7,
        "hybrid-model assembly and Monte Carlo",
        spread <= 1e-8 and gap <= 1e-8 and dev <= 0.15,
        {"max_x_spread": spread, "max_rel_vs_prediction": gap, "mc_samples": samples, "mc_ratio": est.mean / (0.5j * N), "mc_dev": dev, "mc_stderr_rel": est.stderr / (0.5 * N)},
    )


def _b_case_ok(X: float, orders: tuple[int, ...], M: int) -> bool:
    b = euler.b_coefficients(X, orders, cutoff=M)
    primes = [p for p in euler.primes_up_to(int(X)).tolist()]
    nz = [n for n in orders if n]
    if not nz:
        return b[1] == 1 and all(abs(b[p] - len(orders)) < 1e-12 for p in primes)
    if abs(b[1]) != 0:
        return False
    if len(nz) == 1:
        return all(abs(b[p] - (-math.log(p)) ** nz[0]) <= 1e-12 * max(1.0, math.log(p) ** nz[0]) for p in primes)
    return all(b[p] == 0 for p in primes)


def criterion_8(quick: bool = False, **_) -> CriterionResult:
    X = 50
    series = euler.log_p_x_series(X, exact=True)
    d_ok = True
    route_ok = True
    for k in (1, 2, 3):
        a = euler.dirichlet_exp(series, k, X)
        c = euler.dirichlet_exp(series, k, X, method="convolution")
        d = euler.divisor_function(k, X)
        d_ok &= all(a[m] == d[m] for m in range(1, X + 1))
        route_ok &= all(a[m] == c[m] for m in range(1, X + 1))
        d_ok &= all(a[p] == k for p in euler.primes_up_to(X).tolist())
    cases = {
        "all_zero": _b_case_ok(10, (0, 0, 0), 200),
        "one_nonzero": _b_case_ok(10, (2, 0), 200) and _b_case_ok(10, (3,), 200),
        "many_nonzero": _b_case_ok(10, (1, 1), 200) and _b_case_ok(10, (2, 1, 0), 200),
    }
    table = {
        "all_zero": euler.theorem8_prediction(10, (0, 0, 0), 1e4).error_class is euler.ErrorClass.ALL_ZERO,
        "one_nonzero": euler.theorem8_prediction(10, (2, 0), 1e4).log_log_exponent == 3,
        "many_nonzero": euler.theorem8_prediction(10, (1, 1), 1e4).error_class is euler.ErrorClass.MANY_NONZERO,
    }
    ok = d_ok and route_ok and all(cases.values()) and all(table.values())
    return CriterionResult(
        8,
        "Euler-product algebra",
        ok,
        {"a_equals_d": d_ok, "routes_identical": route_ok, **{f"b_case_{k}": v for k, v in cases.items()}, **{f"class_{k}": v for k, v in table.items()}},
    )


def _zero_count(quick: bool) -> int:
    return 10_000 if quick else 100_000


def criterion_9(quick: bool = False, zeros=None, **_) -> CriterionResult:
    ds = default_zeros(zeros, _zero_count(quick))
    T = float(ds.ordinates[-1])
    metrics = {"zeros": ds.count}
    ok = True
    for m in (2, 3, 4, 5):
        emp, pred = landau_empirical(ds, m, T)
        r = abs(emp / pred - 1)
        metrics[f"rel_dev_m{m}"] = r
        ok &= r <= 0.05
    for m in (6, 10):
        emp, _ = landau_empirical(ds, m, T)
        metrics[f"abs_m{m}"] = abs(emp)
        ok &= abs(emp) <= 100
    return CriterionResult(9, "Landau formula", ok, metrics)


def criterion_10(quick: bool = False, zeros=None, workers: int = 1, **_) -> CriterionResult:
    ds = default_zeros(zeros, _zero_count(quick))
    cps = (100, 1_000, 10_000) if quick else (1_000, 10_000, 100_000)
    table = derivative_table(ds.ordinates[: cps[-1]], 2, workers=workers)
    first = discrete_moment_checkpoints(ds, (1,), cps, table=table)
    devs = [abs(r.ratio - 1) for r in first]
    steps = [devs[i + 1] <= devs[i] for i in range(len(devs) - 1)]
    signs = {}
    for o in ((2,), (1, 1)):
        rep = discrete_moment_checkpoints(ds, o, cps[-1:], table=table)[0]
        want = (-1) ** (sum(o) + len(o))
        signs["".join(map(str, o))] = bool(np.sign(rep.normalized.real) == want)
    ok = devs[-1] <= 0.25 and sum(steps) >= 1 and all(signs.values())
    return CriterionResult(
        10,
        "derivative-moment trend at zeros",
        ok,
        {"checkpoints": list(cps), "deviation": devs, "non_increasing_steps": sum(steps), **{f"sign_ok_{k}": v for k, v in signs.items()}},
    )


def criterion_11(quick: bool = False, zeros=None, **_) -> CriterionResult:
    ds = default_zeros(zeros, _zero_count(quick))
    T = float(ds.ordinates[-1])
    metrics = {"zeros": ds.count, "X": math.log(T)}
    ok = True
    for k in (1.0, 1.5, 2.0):
        rep = p_x_sum_over_zeros(ds, None, (0,), T, k=k)
        d = abs(rep.normalized - 1)
        metrics[f"normalized_k{k:g}"] = rep.normalized
        metrics[f"pass_k{k:g}"] = d <= 0.35
        ok &= d <= 0.35
    return CriterionResult(11, "P_X^k sum over zeros with X = log T", ok, metrics)


def criterion_12(quick: bool = False, seed: int = DEFAULT_SEED, zeros=None, **_) -> CriterionResult:
    """Run the quick suite twice and compare the serialized output byte for byte."""
    first = format_results(run_suite(quick=True, seed=seed, zeros=zeros, include=range(1, 12))).encode()
    second = format_results(run_suite(quick=True, seed=seed, zeros=zeros, include=range(1, 12))).encode()
    return CriterionResult(12, "determinism", first == second, {"bytes": len(first), "identical": first == second})


CRITERIA: dict[int, Callable[..., CriterionResult]] = {
    1: criterion_1,
    2: criterion_2,
    3: criterion_3,
    4: criterion_4,
    5: criterion_5,
    6: criterion_6,
    7: criterion_7,
    8: criterion_8,
    9: criterion_9,
    10: criterion_10,
    11: criterion_11,
    12: criterion_12,
}

RUNTIME_LIMITS = {1: 60.0, 2: 120.0, 4: 60.0, 9: 120.0}


def run_criterion(number: int, **kwargs) -> CriterionResult:
    start = time.perf_counter()
    res = CRITERIA[number](**kwargs)
    res.runtime = time.perf_counter() - start
    limit = RUNTIME_LIMITS.get(number)
    if limit is not None:
        within = res.runtime <= limit
        res.metrics["within_time_limit"] = within
        res.passed = res.passed and within
    return res


def run_suite(quick: bool = False, seed: int = DEFAULT_SEED, zeros=None, include=None, workers: int = 1, progress=None) -> list[CriterionResult]:
    out = []
    for n in include or CRITERIA:
        res = run_criterion(n, quick=quick, seed=seed, zeros=zeros, workers=workers)
        if progress:
            progress(res)
        out.append(res)
    return out
