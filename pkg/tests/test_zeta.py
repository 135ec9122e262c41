import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from zetamoments.zeta import (
    ResultCache,
    ZeroDataset,
    ZeroFileError,
    ZetaEvalConfig,
    conjecture6_prediction,
    conjecture_prediction,
    critical_line_derivatives,
    discrete_moment,
    discrete_moment_checkpoints,
    discrete_power_moment,
    generate_zeros,
    landau_empirical,
    load_zeros,
    n_of_t,
    n_of_t_formula,
    p_x_sum_over_zeros,
    siegel_z,
    zeta_derivative,
    zeta_eval,
)
from zetamoments.zeta.cache import cache_key, from_jsonable, to_jsonable
from zetamoments.zeta.evaluate import riemann_siegel_theta, zeta_batch
from zetamoments.zeta.zeros import gram_points

# ---- evaluation


def test_classical_values():
    assert abs(zeta_eval(2) - math.pi**2 / 6) < 1e-12
    assert abs(zeta_eval(0) + 0.5) < 1e-12
    assert abs(zeta_eval(-1) + 1 / 12) < 1e-13
    assert abs(zeta_eval(-3) - 1 / 120) < 1e-13
    with pytest.raises(ZeroDivisionError):
        zeta_eval(1)


@given(st.floats(-8, 8), st.floats(-400, 400))
def test_matches_mpmath(x, y):
    s = complex(x, y)
    if abs(s - 1) < 1e-3:
        return
    ref = complex(mpmath.zeta(mpmath.mpc(x, y)))
    got = zeta_eval(s)
    assert abs(got - ref) <= 1e-10 * max(1.0, abs(ref))


@given(st.floats(-5, 5), st.floats(0.01, 300))
def test_conjugate_symmetry(x, y):
    s = complex(x, y)
    assert abs(zeta_eval(s.conjugate()) - zeta_eval(s).conjugate()) <= 1e-12 * max(1.0, abs(zeta_eval(s)))


def test_high_precision_path():
    cfg = ZetaEvalConfig(precision=30)
    assert abs(zeta_eval(0.5 + 14.134725141734693j, cfg)) < 1e-14


def test_riemann_siegel_against_mpmath():
    t = np.array([1000.0, 5000.5, 74920.0])
    ref = np.array([float(mpmath.siegelz(v)) for v in t])
    assert np.max(np.abs(siegel_z(t) - ref)) < 1e-9
    s = 0.5 + 2000.3j
    rs = zeta_batch(np.array([s]), allow_rs=True)[0]
    assert abs(rs - complex(mpmath.zeta(s))) < 1e-9
    assert abs(riemann_siegel_theta(500.0) - float(mpmath.siegeltheta(500))) < 1e-12


def test_derivatives():
    s = 2.0
    assert abs(zeta_derivative(s, 0) - zeta_eval(s)) < 1e-9
    h = 1e-5
    fd = (zeta_eval(s + h) - zeta_eval(s - h)) / (2 * h)
    assert abs(zeta_derivative(s, 1) - fd) < 1e-7
    rho = 0.5 + 14.134725141734693j
    assert abs(zeta_derivative(rho, 1)) > 1e-3
    with pytest.raises(ValueError):
        zeta_derivative(1.1, 1)
    with pytest.raises(ValueError):
        zeta_derivative(3.0, 9)


@pytest.mark.parametrize("s", [0.5 + 30j, 2.5 - 7j, 0.5 + 1500j])
def test_derivative_contour_stability(s):
    for n in range(1, 5):
        a = zeta_derivative(s, n, ZetaEvalConfig(radius=0.25))
        b = zeta_derivative(s, n, ZetaEvalConfig(radius=0.125))
        assert abs(a - b) < 1e-7 * abs(a)


def test_critical_line_table_matches_pointwise():
    g = np.array([14.134725141734693, 200.5, 1500.25])
    tab = critical_line_derivatives(g, 3)
    for j, gamma in enumerate(g):
        for n in range(4):
            ref = complex(mpmath.zeta(0.5 + 1j * gamma, derivative=n))
            assert abs(tab[n, j] - ref) <= 1e-8 * max(1.0, abs(ref))


# ---- zeros


def test_load_zeros(tmp_path):
    f = tmp_path / "z.txt"
    f.write_text("14.134725\n\n21.022040\n25.010858\n")
    ds = load_zeros(f)
    assert ds.count == 3
    ds.check_standard()
    f.write_text("")
    assert load_zeros(f).count == 0
    f.write_text("14.134725\n25.010858\n21.022040\n")
    with pytest.raises(ZeroFileError) as err:
        load_zeros(f)
    assert err.value.line == 3
    f.write_text("14.1\nabc\n")
    with pytest.raises(ZeroFileError) as err:
        load_zeros(f)
    assert err.value.line == 2
    with pytest.raises(FileNotFoundError):
        load_zeros(tmp_path / "missing.txt")


def test_dataset_validation_and_roundtrip(tmp_path):
    with pytest.raises(ValueError):
        ZeroDataset(np.array([3.0, 2.0]))
    ds = ZeroDataset(np.array([14.134725141734693, 21.022039638771555]))
    ds.write(tmp_path / "w.txt")
    back = load_zeros(tmp_path / "w.txt")
    assert np.allclose(back.ordinates, ds.ordinates, atol=1e-12)
    with pytest.raises(ValueError):
        ZeroDataset(np.array([20.0])).check_standard()


def test_counting(zeros):
    assert n_of_t(zeros, 100) == 29
    assert n_of_t(zeros, 10) == 0
    assert abs(n_of_t_formula(100) - 29) < math.log(100)
    for T in np.linspace(50, 1e4, 400):
        assert abs(n_of_t(zeros, T) - n_of_t_formula(T)) <= 2 * math.log(T)


def test_generated_zeros_match_reference():
    ds = generate_zeros(200)
    ref = [float(mpmath.zetazero(n).imag) for n in (1, 2, 50, 200)]
    got = ds.ordinates[[0, 1, 49, 199]]
    assert np.max(np.abs(got - ref)) < 1e-10


def test_gram_points():
    g = gram_points(np.array([0, 10, 1000]))
    assert np.allclose(riemann_siegel_theta(g), np.array([0, 10, 1000]) * math.pi, atol=1e-9)


def test_zero_residuals(zeros):
    assert abs(zeta_eval(0.5 + 1j * zeros.ordinates[0])) <= 1e-6
    low = zeros.ordinates[zeros.ordinates < 1000]
    assert np.max(np.abs(zeta_batch(0.5 + 1j * low))) <= 1e-5
    high = zeros.ordinates[zeros.ordinates >= 1000]
    assert np.max(np.abs(siegel_z(high))) <= 1e-5


# ---- moments


def test_predictions():
    T = 1e4
    L = math.log(T / (2 * math.pi))
    assert abs(conjecture_prediction((1,), T) - L / 2) < 1e-12
    assert conjecture_prediction((1, 0), T) == 0
    assert abs(conjecture_prediction((1, 1), T) - L**2 / 6) < 1e-10
    assert abs(conjecture6_prediction(-1, T) - 1 / L) < 1e-14
    assert conjecture6_prediction(-2, T) == 0
    with pytest.raises(ValueError):
        conjecture6_prediction(-3, T)


def test_zeroth_moment_is_trivial(zeros):
    r = discrete_moment(zeros, (), 5000.0)
    assert r.normalized == 1 and r.sum == n_of_t(zeros, 5000.0)


def test_first_moment_trend(zeros):
    reps = discrete_moment_checkpoints(zeros, (1,), [1000, 75_000])
    lo, hi = (abs(r.ratio - 1) for r in reps)
    assert hi < 0.25 and hi < lo


def test_second_derivative_sign(zeros):
    r = discrete_moment(zeros, (2,), 30_000.0)
    assert r.prediction.real < 0 and r.normalized.real < 0


def test_power_moment_matches_integer_moment(zeros):
    a = discrete_power_moment(zeros, 1, 3000.0)
    b = discrete_moment(zeros, (1,), 3000.0)
    assert abs(a.sum - b.sum) < 1e-9 * abs(b.sum)


def test_moment_rejects_out_of_range(zeros):
    with pytest.raises(ValueError):
        discrete_moment(zeros, (1,), 1e6)
    with pytest.raises(ValueError):
        discrete_moment(zeros, (9,), 100.0)


def test_p_x_sum(zeros):
    T = float(zeros.ordinates[-1])
    r = p_x_sum_over_zeros(zeros, None, (0,), T)
    assert r.X == pytest.approx(math.log(T))
    assert abs(r.normalized - 1) < 0.35
    r = p_x_sum_over_zeros(zeros, None, (1,), T)
    assert abs(r.normalized) < 0.1 * math.log(T / (2 * math.pi))
    with pytest.raises(ValueError):
        p_x_sum_over_zeros(zeros, None, (1,), T, k=1.5)


def test_landau(zeros):
    T = float(zeros.ordinates[-1])
    emp, pred = landau_empirical(zeros, 2, T)
    assert abs(emp.real / pred - 1) <= 0.05
    emp6, pred6 = landau_empirical(zeros, 6, T)
    assert pred6 == 0 and abs(emp6) <= 100


# ---- cache


def test_cache_roundtrip(tmp_path):
    path = tmp_path / "c.jsonl"
    c = ResultCache(path)
    c.put("abc", "moment", {"orders": (1, 2)}, {"sum": 1 + 2j, "n": 3})
    with path.open("a") as fh:
        fh.write('{"key": "torn')
    again = ResultCache(path)
    assert len(again) == 1
    assert again.get("abc", "moment", {"orders": [1, 2]}) == {"sum": 1 + 2j, "n": 3}
    assert again.get("abd", "moment", {"orders": [1, 2]}) is None
    assert from_jsonable(to_jsonable([1j, (2.0,)])) == [1j, [2.0]]
    c.put("abc", "order", {}, {"z": 1, "a": 2})
    assert list(ResultCache(path).get("abc", "order", {})) == ["z", "a"]
    assert cache_key("a", "b", {"x": 1}) != cache_key("a", "b", {"x": 2})
