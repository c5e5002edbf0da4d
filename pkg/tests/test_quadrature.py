import pytest
from mpmath import mp, mpf

from modules.errors import ContractViolation, QuadratureNonConvergence
from modules.numeric_kernel import tolerance
from modules.quadrature import (
    TanhSinhQuadrature, integrate_finite, integrate_semi_infinite, level_nodes
)

TOL = mpf("1e-40")


@pytest.mark.parametrize("degree", [0, 1, 2, 5, 9])
def test_polynomials_on_unit_interval(degree):
    result = integrate_finite(lambda x: x ** degree, 0, 1, TOL)
    assert abs(result.value - mpf(1) / (degree + 1)) < TOL


def test_endpoint_log_singularity():
    result = integrate_finite(lambda x: mp.log(x), 0, 1, TOL)
    assert abs(result.value + 1) < TOL


def test_inverse_sqrt_singularity():
    result = integrate_finite(lambda x: 1 / mp.sqrt(x), 0, 1, mpf("1e-30"))
    assert abs(result.value - 2) < mpf("1e-30")


def test_shifted_interval_and_reversed_limits():
    forward = integrate_finite(mp.exp, 1, 2, TOL)
    assert abs(forward.value - (mp.e ** 2 - mp.e)) < TOL
    backward = integrate_finite(mp.exp, 2, 1, TOL)
    assert backward.value == -forward.value
    assert integrate_finite(mp.exp, 1, 1, TOL).value == 0


def test_semi_infinite_exponential_moments():
    result = integrate_semi_infinite(lambda u: u ** 3 * mp.exp(-u), TOL)
    assert abs(result.value - 6) < TOL


def test_semi_infinite_fermi_integral():
    # int_0^inf u / (e^u + 1) du = pi^2 / 12
    result = integrate_semi_infinite(lambda u: u * mp.exp(-u) / (1 + mp.exp(-u)), TOL)
    assert abs(result.value - mp.pi ** 2 / 12) < TOL


def test_tolerance_floor():
    with pytest.raises(ContractViolation):
        integrate_finite(lambda x: x, 0, 1, tolerance(4))


def test_level_cap_raises_with_best_estimate():
    quad = TanhSinhQuadrature(max_levels=2, min_levels=1)
    with pytest.raises(QuadratureNonConvergence) as info:
        quad.integrate(lambda x: mp.sin(200 * x), 0, 1, TOL)
    best = info.value.best
    assert best.levels == 2
    assert best.evaluations > 0


def test_node_tables_are_cached_per_level():
    assert level_nodes(3) is level_nodes(3)
    d, weight = level_nodes(0)[0]
    assert 0 < d < mpf(1) / 2
    assert weight > 0


@pytest.mark.parametrize("tol", [mpf("1e-10"), mpf("1e-20"), mpf("1e-30")])
def test_halving_tol_does_not_lose_accuracy(tol):
    def f(t):
        return mp.log1p(t) / t

    exact = mp.pi ** 2 / 12
    coarse = abs(integrate_finite(f, 0, 1, tol).value - exact)
    fine = abs(integrate_finite(f, 0, 1, tol / 2).value - exact)
    assert coarse < tol
    assert fine < tol / 2
    assert fine <= max(coarse, tolerance(10))


def test_log_substitution_matches_truncated_range():
    # t = exp(-u) maps int_0^1 ln(1+t)/t dt onto int_0^inf ln(1+exp(-u)) du
    on_unit = integrate_finite(lambda t: mp.log1p(t) / t, 0, 1, TOL).value
    head = integrate_finite(lambda u: mp.log1p(mp.exp(-u)), 0, 80, TOL).value
    tail = -mp.polylog(2, -mp.exp(-80))
    assert abs(on_unit - (head + tail)) < 10 * TOL
    semi = integrate_semi_infinite(lambda u: mp.log1p(mp.exp(-u)), TOL).value
    assert abs(semi - on_unit) < 10 * TOL
