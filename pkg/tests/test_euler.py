import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from zetamoments import euler
from zetamoments.euler import (
    DerivativeSpec,
    ErrorClass,
    arithmetic_factor_a,
    b_coefficients,
    derivative_series,
    dirichlet_convolve,
    dirichlet_exp,
    divisor_function,
    landau_main_term,
    log_p_x_series,
    p_x_derivatives,
    p_x_eval,
    p_x_log_derivatives,
    p_x_power_eval,
    primes_up_to,
    rankin_tail_bound,
    theorem8_prediction,
    von_mangoldt,
)


def test_primes():
    assert primes_up_to(30).tolist() == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert primes_up_to(1).size == 0
    assert primes_up_to(1_000_000).size == 78498


def test_von_mangoldt():
    assert von_mangoldt(8) == pytest.approx(math.log(2), abs=1e-15)
    assert von_mangoldt(1) == 0
    assert von_mangoldt(6) == 0
    for n in (12, 360, 97, 1024):
        total = math.fsum(von_mangoldt(d) for d in range(1, n + 1) if n % d == 0)
        assert total == pytest.approx(math.log(n), abs=1e-12)


def test_log_series_coefficients():
    c = log_p_x_series(10, exact=True)
    assert c[2] == 1 and c[4] == Fraction(1, 2) and c[6] == 0 and c[9] == Fraction(1, 2)
    assert sum(c.coeffs[1:]) == 1 + 1 + Fraction(1, 2) + 1 + 1 + Fraction(1, 3) + Fraction(1, 2)
    assert abs(p_x_log_derivatives(10, 0.0, 0)[0] - float(sum(c.coeffs[1:]))) < 1e-14


def _series(X, k, M, method="recursion", exact=True):
    return dirichlet_exp(log_p_x_series(X, M, exact=exact), k, M, method=method, X=X)


def test_coefficients_basic_values():
    X, M = 10, 400
    for k in (1, 2, 3, Fraction(3, 2)):
        a = _series(X, k, M)
        assert a[1] == 1
        for p in (2, 3, 5, 7):
            assert a[p] == k
        for m in (11, 22, 13 * 3, 121):
            assert a[m] == 0
    assert _series(10, 2, 100)[6] == 4


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_coefficients_equal_divisor_function_below_x(k):
    X = 50
    a = _series(X, k, X)
    d = divisor_function(k, X)
    assert all(a[m] == d[m] for m in range(1, X + 1))


@pytest.mark.parametrize("k", [1, 2, 3])
def test_coefficients_bounded_by_divisor_function(k):
    X, M = 12, 3000
    a = _series(X, k, M)
    d = divisor_function(k, M)
    assert all(0 <= a[m] <= d[m] for m in range(1, M + 1))


@given(st.integers(1, 60), st.integers(1, 60), st.sampled_from([1, 2, Fraction(3, 2), Fraction(1, 3)]))
def test_multiplicativity(m, n, k):
    if math.gcd(m, n) != 1:
        return
    a = _series(12, k, 3600)
    assert a[m * n] == a[m] * a[n]


def test_routes_identical():
    for k in (2, Fraction(3, 2), Fraction(-1, 2)):
        a = _series(20, k, 2000, "recursion")
        b = _series(20, k, 2000, "convolution")
        assert all(a[m] == b[m] for m in range(1, 2001))
    fa = _series(20, 1.5, 2000, "recursion", exact=False).as_float()
    fb = _series(20, 1.5, 2000, "convolution", exact=False).as_float()
    assert np.max(np.abs(fa - fb)) < 1e-13


def test_exp_rejects_cutoff_below_x():
    with pytest.raises(ValueError):
        dirichlet_exp(log_p_x_series(20), 1, 10)


def test_power_eval_matches_series():
    X, k = 6, 1.5
    M = 200_000
    a = _series(X, k, M, exact=False)
    for s in (2.0, 1.5 + 3j):
        tail = rankin_tail_bound(X, k, s.real if isinstance(s, complex) else s, M)
        assert abs(a.evaluate(s) - p_x_power_eval(X, k, s)) <= max(1e-8, 2 * tail)
    assert p_x_power_eval(X, 0, 0.5 + 10j) == 1


def test_derivatives_match_finite_differences():
    X, s, h = 13.0, 0.5 + 20j, 1e-4
    P = p_x_derivatives(X, s, 2)
    assert abs(P[0] - p_x_eval(X, s)) < 1e-14 * abs(P[0])
    fd1 = (p_x_eval(X, s + h) - p_x_eval(X, s - h)) / (2 * h)
    fd2 = (p_x_eval(X, s + h) - 2 * p_x_eval(X, s) + p_x_eval(X, s - h)) / h**2
    assert abs(fd1 - P[1]) < 1e-6 * abs(P[1])
    assert abs(fd2 - P[2]) < 1e-5 * abs(P[2])


def test_derivative_series():
    X, M = 10, 500
    a1 = derivative_series(X, 0, M).as_float()
    assert np.allclose(a1, _series(X, 1, M, exact=False).as_float())
    for j in (1, 2, 3):
        dj = derivative_series(X, j, M)
        assert dj[1] == 0
        for p in (2, 3, 7):
            assert abs(dj[p] - (-math.log(p)) ** j) < 1e-12
        m = np.arange(1, M + 1)
        assert np.allclose(dj.as_float()[1:], a1[1:] * (-np.log(m)) ** j, rtol=1e-14, atol=0)


def test_b_coefficient_cases():
    X, M = 10, 1000
    b = b_coefficients(X, (0, 0, 0), M)
    assert b[1] == 1
    assert np.allclose(b.as_float(), _series(X, 3, M, exact=False).as_float())
    b = b_coefficients(X, (2, 0), M)
    assert b[1] == 0
    for p in (2, 3, 5, 7):
        assert abs(b[p] - math.log(p) ** 2) < 1e-12
    b = b_coefficients(X, (1, 1), M)
    assert b[1] == 0 and all(b[p] == 0 for p in (2, 3, 5, 7))


@given(st.lists(st.integers(0, 2), min_size=1, max_size=3))
def test_b_coefficients_equal_product_of_evaluations(orders):
    X, M, s = 5, 200_000, 3.0 + 1j
    b = b_coefficients(X, orders, M)
    P = p_x_derivatives(X, s, max(orders))
    direct = np.prod([P[n] for n in orders])
    assert abs(b.evaluate(s) - direct) <= 1e-6 * max(1.0, abs(direct))


def test_convolution_identity_with_exact_coefficients():
    X, M = 8, 300
    one = _series(X, 1, M)
    two = dirichlet_convolve(one, one, M)
    assert all(two[m] == _series(X, 2, M)[m] for m in range(1, M + 1))


def test_landau_main_term():
    assert landau_main_term(6, 1000) == 0
    assert landau_main_term(2, 1000) == pytest.approx(-(1000 / (2 * math.pi)) * math.log(2) / 2, rel=1e-15)
    assert landau_main_term(4, 1000) == pytest.approx(-(1000 / (2 * math.pi)) * math.log(2) / 4, rel=1e-15)
    with pytest.raises(ValueError):
        landau_main_term(1, 10)


def test_prediction_classes():
    T = 1000.0
    X = math.log(T)
    p = theorem8_prediction(X, (0, 0, 0), T)
    assert p.error_class is ErrorClass.ALL_ZERO and p.main == pytest.approx(euler.n_of_t_main(T))
    p = theorem8_prediction(X, (2, 0), T)
    assert p.error_class is ErrorClass.ONE_NONZERO and p.main == 0 and p.log_log_exponent == 3
    p = theorem8_prediction(X, (1, 1), T)
    assert p.error_class is ErrorClass.MANY_NONZERO and p.main == 0
    with pytest.warns(RuntimeWarning):
        theorem8_prediction(100.0, (0,), T)


def test_derivative_spec_validation():
    with pytest.raises(ValueError):
        DerivativeSpec(())
    with pytest.raises(ValueError):
        DerivativeSpec((-1,))


def test_arithmetic_factor():
    assert arithmetic_factor_a(0) == 1
    assert arithmetic_factor_a(1) == pytest.approx(1, abs=1e-12)
    # at k = 2 each local factor is (1 - x)^4 (1 + x)/(1 - x)^3 = 1 - x^2
    assert arithmetic_factor_a(2) == pytest.approx(6 / math.pi**2, abs=1e-8)
    with pytest.raises(ValueError):
        arithmetic_factor_a(-1)
