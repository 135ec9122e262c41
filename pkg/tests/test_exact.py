from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from zetamoments import AccuracyError, MixedMomentSpec, derivative_moment, exact_derivative_moment, mixed_moment_mc, theorem3_prediction
from zetamoments.exact import (
    _all_permutations_equal,
    basor_forrester,
    basor_forrester_expectation,
    coefficient_extract,
    shifted_expectation_sum,
    simplex_integral,
    simplex_integral_iterated,
    simplex_integral_mc,
    symbol_coefficients,
    toeplitz_determinant,
    toeplitz_expectation,
)

orders_st = st.lists(st.integers(1, 4), min_size=1, max_size=3)


def test_spec_validation():
    with pytest.raises(ValueError):
        MixedMomentSpec(0, (1,))
    with pytest.raises(ValueError):
        MixedMomentSpec(3, ())
    with pytest.raises(ValueError):
        MixedMomentSpec(3, (0, 1))


def test_single_shift_first_coefficient():
    # E[(1/N) Z(α)...] at k=1: the α coefficient is i(N+1)/2, so 2i at N=3.
    ev = lambda pts: shifted_expectation_sum(3, pts)
    assert abs(coefficient_extract(ev, (1,), radius=0.1) - 2j) < 1e-12
    assert shifted_expectation_sum(3, 0.0) == 0


def test_sum_matches_toeplitz():
    a = shifted_expectation_sum(4, [0.1, 0.2])
    b = toeplitz_expectation(4, [0.1, 0.2])
    assert abs(a - b) <= 1e-10 * abs(b)


def test_symbol_coefficients():
    A = np.exp(0.3j)
    f = symbol_coefficients([0.3])
    assert abs(f[0] - (1 + 2 * A)) < 1e-14
    f0 = symbol_coefficients([])
    assert abs(f0[0] + 2) < 1e-15
    for shifts in ([], [0.2], [0.1, -0.4, 0.7]):
        assert abs(sum(symbol_coefficients(shifts).as_dict().values())) < 1e-13


def test_basor_forrester_against_toeplitz_determinant():
    nodes = np.exp(1j * np.array([0.3, 0.7, 0.9]))
    bf = basor_forrester(2, nodes)
    sym = symbol_coefficients(nodes=nodes)
    assert abs(bf - toeplitz_determinant(sym, 1)) < 1e-9 * max(1, abs(bf))


def test_basor_forrester_node_swap():
    nodes = np.exp(1j * np.array([0.3, 0.7, 0.9, 1.4]))
    a = basor_forrester(3, nodes)
    b = basor_forrester(3, nodes[[1, 0, 2, 3]])
    assert abs(a - b) < 1e-12 * max(1, abs(a))


def test_basor_forrester_confluent_limit():
    shifts = [0.21, -0.13, 0.34]
    a = basor_forrester_expectation(6, shifts)
    b = shifted_expectation_sum(6, shifts)
    assert abs(a - b) <= 1e-5 * abs(b)
    with pytest.raises(ValueError):
        basor_forrester(3, np.exp(1j * np.array([0.1, 0.1, 0.5])))


@given(st.integers(1, 12), st.lists(st.floats(-1, 1), min_size=1, max_size=3))
def test_shift_permutation_symmetry(N, shifts):
    assert _all_permutations_equal(N, shifts, tol=1e-10)


@given(st.integers(2, 10), st.lists(st.floats(-1, 1), min_size=1, max_size=3))
def test_sum_and_toeplitz_routes_agree(N, shifts):
    a = shifted_expectation_sum(N, shifts)
    b = toeplitz_expectation(N, shifts)
    assert abs(a - b) <= 1e-9 * max(1.0, abs(b))


def test_first_moment_exact_values():
    assert complex(exact_derivative_moment(MixedMomentSpec(7, (1,)))) == 4j
    assert abs(derivative_moment(MixedMomentSpec(7, (1,))) - 4j) < 1e-12
    for N in (1, 2, 5, 30):
        assert abs(complex(exact_derivative_moment(MixedMomentSpec(N, (1,)))) - 0.5j * (N + 1)) < 1e-12


@given(st.integers(1, 25), orders_st)
def test_exact_matches_extraction(N, orders):
    spec = MixedMomentSpec(N, tuple(orders))
    ex = complex(exact_derivative_moment(spec))
    assert abs(derivative_moment(spec) - ex) <= 1e-8 * max(1.0, abs(ex))


def test_exact_matches_monte_carlo():
    est = mixed_moment_mc(MixedMomentSpec(20, (1,)), 20_000, 3)
    assert abs(est.mean - 10.5j) <= 3 * est.stderr


def test_extraction_reports_unstable_residual():
    with pytest.raises(AccuracyError):
        coefficient_extract(lambda p: np.exp(40 * p[:, 0]), (3,), radius=1.0, extra_nodes=1)


@pytest.mark.parametrize(
    "orders, value",
    [((1, 1), Fraction(1, 6)), ((1,), Fraction(1, 2)), ((2, 3), Fraction(1, 360))],
)
def test_simplex_integral_values(orders, value):
    assert simplex_integral(orders) == value


@given(orders_st)
def test_simplex_integral_routes(orders):
    assert simplex_integral(orders) == simplex_integral_iterated(orders)


def test_simplex_integral_monte_carlo():
    for orders in ((1,), (1, 1), (2, 3), (1, 2, 2)):
        est, se = simplex_integral_mc(orders, 1_000_000, 1)
        assert abs(est - float(simplex_integral(orders))) <= 3 * se


@pytest.mark.parametrize("orders, coef", [((1,), 0.5j), ((1, 1), -1 / 6), ((2,), 1 / 3)])
def test_leading_term(orders, coef):
    N = 9
    assert abs(theorem3_prediction(MixedMomentSpec(N, orders)) - coef * N ** sum(orders)) < 1e-12 * N ** sum(orders)


def test_pair_moment_approaches_leading_term():
    prev = None
    for N in (25, 50, 100, 200):
        spec = MixedMomentSpec(N, (1, 1))
        err = abs(complex(exact_derivative_moment(spec)) / theorem3_prediction(spec) - 1)
        assert err * N <= 5
        assert prev is None or err < prev
        prev = err
