import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad

from zetamoments import RngSeed, sample_cue
from zetamoments.hybrid import (
    FisherHartwigExponents,
    FourierPhase,
    HybridParams,
    SmoothingKernel,
    assembled_theorem13,
    ehrhardt_silbermann_asymptotic,
    hybrid_exact_toeplitz,
    hybrid_moment_mc,
    theorem13_prediction,
    z_nx_prime_at_eigenvalue,
)
from zetamoments.hybrid.fx import (
    closed_form_series,
    f_x_derivative,
    f_x_eval,
    log_series_coefficient,
    s_m_closed_form,
    s_m_numeric,
)
from zetamoments.hybrid.special import EULER_GAMMA, barnes_g, e1_entire_part, exp_integral_e1, log_barnes_g

K10 = SmoothingKernel(10)
P5 = HybridParams(5.0, K10)


# ---- special functions


def test_e1_at_one():
    assert abs(exp_integral_e1(1.0) - 0.21938393439552027368) < 1e-15


@given(
    st.floats(-60, 60).filter(lambda x: abs(x) > 1e-3),
    st.floats(-60, 60),
)
def test_e1_matches_mpmath(x, y):
    z = complex(x, y)
    if x < 0 and abs(y) < 1e-3:
        return  # branch cut
    ref = complex(mpmath.e1(mpmath.mpc(x, y)))
    got = complex(exp_integral_e1(z))
    assert abs(got - ref) <= 1e-11 * max(1.0, abs(ref))


def test_e1_log_singularity_cancels():
    for x in (1e-2, 1e-4, 1e-6):
        assert abs(exp_integral_e1(x) + math.log(x) + EULER_GAMMA) < 2 * x
    z = np.array([0.3 + 0.2j, 2.0 - 1.0j])
    assert np.allclose(exp_integral_e1(z), -EULER_GAMMA - np.log(z) + e1_entire_part(z), rtol=1e-13)


def test_barnes_g_values():
    assert barnes_g(2) == 1
    assert barnes_g(1) == 1
    assert barnes_g(0) == 0
    assert abs(barnes_g(5) - 12) < 1e-12
    assert barnes_g(-3) == 0


@given(st.floats(-4.5, 6).filter(lambda x: abs(x - round(x)) > 1e-3), st.floats(-3, 3))
def test_barnes_g_matches_mpmath(x, y):
    ref = complex(mpmath.barnesg(mpmath.mpc(x, y)))
    got = complex(barnes_g(complex(x, y)))
    assert abs(got - ref) <= 1e-10 * max(1.0, abs(ref))


@given(st.floats(0.2, 5), st.floats(-3, 3))
def test_barnes_g_recurrence(x, y):
    z = complex(x, y)
    lhs = log_barnes_g(z + 1) - log_barnes_g(z)
    rhs = complex(mpmath.loggamma(z))
    d = (lhs - rhs) / (2j * math.pi)
    assert abs(d - round(d.real)) < 1e-10


# ---- kernel


def test_kernel_mass():
    lo, hi = K10.support
    assert abs(K10.mass(1.0, math.e) - 1) < 1e-10
    assert K10.mass(1.0, lo) == 0
    a = math.exp(0.95)
    got = K10.mass(a, math.e)
    direct = quad(K10.f, K10.Y * (0.95 - 1) + 1, 1, epsabs=1e-14)[0]
    assert 0 < got < 1 and abs(got - direct) < 1e-10


def test_small_z_behaviour():
    r = [abs(np.exp(-K10.big_u(z)) / z) for z in (1e-3, 1e-4)]
    assert abs(r[0] / r[1] - 1) < 0.01
    assert abs(r[1] / K10.small_z_constant - 1) < 0.01


def test_u_imag_path_matches_general_path():
    t = np.array([0.5, -3.0, 40.0, -250.0])
    assert np.allclose(K10.big_u_imag(t), K10.big_u(1j * t), rtol=1e-11, atol=1e-12)


# ---- F_X and s_m


@given(st.floats(-6, 6))
def test_f_x_periodic(theta):
    if abs(math.remainder(theta, 2 * math.pi)) < 1e-9:
        return
    assert abs(f_x_eval(P5, theta) - f_x_eval(P5, theta + 2 * math.pi)) < 1e-10


def test_f_x_at_zero_matches_coefficients():
    sigma = closed_form_series(P5, 1.0)
    assert abs(np.exp(f_x_eval(P5, 0.0)) - np.exp(sigma.sum())) < 1e-8


def test_f_x_continuous_through_switch():
    a = f_x_eval(P5, 0.999e-3)
    b = f_x_eval(P5, 1.001e-3)
    assert abs(a - b) < 1e-5


@pytest.mark.parametrize("theta", [0.0, 5e-4, 0.3, 2.0, -1.1])
def test_f_x_derivative_fd(theta):
    h = 1e-5
    fd = (f_x_eval(P5, theta + h) - f_x_eval(P5, theta - h)) / (2 * h)
    assert abs(fd - f_x_derivative(P5, theta)) < 1e-6


def test_s_m_closed_form_cases():
    assert s_m_closed_form(P5, 1.0, 0) == 0
    assert s_m_closed_form(P5, 1.0, -2) == 0
    assert s_m_closed_form(P5, 1.0, 5) == 0
    sharp = HybridParams(5.0, SmoothingKernel(1000))
    for m in range(1, 5):
        assert abs(s_m_closed_form(sharp, 2.0, m) - 2.0 / m) < 1e-2


def test_s_m_numeric_matches_closed_form():
    for m in range(-10, 11):
        assert abs(s_m_numeric(P5, 1.5, m) - s_m_closed_form(P5, 1.5, m)) < 1e-6
    assert abs(s_m_numeric(P5, 1.0, -3)) < 1e-8


@pytest.mark.parametrize("m", [1, 2, 5])
def test_log_series_coefficient(m):
    assert abs(log_series_coefficient(2.0, m) - 2.0 / m) < 1e-8


# ---- model


def test_z_prime_n1():
    s = sample_cue(1, RngSeed(0))
    f0 = f_x_eval(P5, 0.0)
    assert abs(z_nx_prime_at_eigenvalue(s, P5) - 1j * np.exp(f0)) < 1e-14


@pytest.mark.parametrize("theta", [0.5, 1.0, 2.5])
def test_phase_tends_to_bare_factor(theta):
    # each factor (1 - e^{-i theta}) e^{F_X(theta)} tends to 1 like 1/(theta log X)
    prev = math.inf
    for lx in (6.0, 12.0, 24.0, 48.0):
        gap = abs(f_x_eval(HybridParams(lx, K10), theta) + np.log(1 - np.exp(-1j * theta)))
        assert gap < prev and gap * lx * theta < 1.5
        prev = gap


def test_fourier_phase_matches_direct_phase():
    s = sample_cue(12, RngSeed(9))
    a = z_nx_prime_at_eigenvalue(s, P5, fx=FourierPhase.closed_form(P5))
    b = z_nx_prime_at_eigenvalue(s, P5, fx="exact")
    assert abs(a - b) < 1e-9 * abs(b)


def test_square_needs_no_branch():
    s = sample_cue(8, RngSeed(2))
    z = z_nx_prime_at_eigenvalue(s, P5)
    assert abs(np.exp(2 * np.log(z)) - z * z) < 1e-12 * abs(z) ** 2


@pytest.mark.parametrize("k, value", [(1, 0.5j), (2, -1 / 6), (-2, 0)])
def test_prediction_values(k, value):
    N = 40
    assert abs(theorem13_prediction(k, N) - value * N**k) < 1e-12 * max(1, N**k)


@pytest.mark.parametrize("k", [-3, -4, -7])
def test_prediction_rejects_excluded_points(k):
    with pytest.raises(ValueError):
        theorem13_prediction(k, 10)


def test_fisher_hartwig_constants():
    s = closed_form_series(P5, 1.0)
    fh = ehrhardt_silbermann_asymptotic(FisherHartwigExponents(2, 1, s, np.zeros_like(s)), 50)
    assert fh.C2 == 1
    trivial = ehrhardt_silbermann_asymptotic(FisherHartwigExponents(0, 0, np.zeros(3), np.zeros(3)), 50)
    assert abs(trivial.value - 1) < 1e-12


@pytest.mark.parametrize("k", [1, 2, -1, 0.5, 1 + 0.5j])
@pytest.mark.parametrize("logx", [3.0, 5.0, 8.0])
def test_assembly_reduces_to_prediction(k, logx):
    p = HybridParams(logx, K10)
    a = assembled_theorem13(p, k, 100)
    b = theorem13_prediction(k, 100)
    assert abs(a / b - 1) < 1e-8


def test_mc_zeroth_power_is_one():
    assert hybrid_moment_mc(HybridParams(3.0, K10, 20), 0, 100, 1).mean == 1


def test_mc_matches_exact_finite_n():
    p = HybridParams(3.0, K10, 12)
    for k in (1, 2):
        est = hybrid_moment_mc(p, k, 20_000, 6)
        ex = hybrid_exact_toeplitz(p, k, 12)
        assert abs(est.mean - ex) <= 4 * est.stderr


def test_exact_finite_n_rejects_bad_k():
    with pytest.raises(ValueError):
        hybrid_exact_toeplitz(P5, 1.5, 10)


def test_mc_first_moment_n100():
    p = HybridParams(5.0, K10, 100)
    est = hybrid_moment_mc(p, 1, 20_000, 20240611)
    assert abs(est.mean / theorem13_prediction(1, 100) - 1) < 0.15
