from fractions import Fraction

import pytest
from mpmath import mp, mpf

from modules.errors import ConfigurationError, ContractViolation
from modules.numeric_kernel import (
    set_precision, working_digits, tolerance, iterated_average, harmonic, harmonic_upto,
    bernoulli_number, bernoulli_poly, zeta_hi, zeta_value, zeta_even_bernoulli, eta,
    eta_accelerated, euler_gamma, li_half, polygamma_int, log_negative_real, constants,
    precision_cached
)


def test_set_precision_adds_guard_digits():
    set_precision(40)
    assert working_digits() == 40
    assert mp.dps == 50
    assert tolerance(3) == mpf(10) ** -37


def test_set_precision_rejects_low_values():
    with pytest.raises(ConfigurationError):
        set_precision(29)


def test_precision_cached_keys_on_precision():
    calls = []

    @precision_cached
    def digits_seen():
        calls.append(mp.dps)
        return mp.dps

    assert digits_seen() == 70
    assert digits_seen() == 70
    set_precision(40)
    assert digits_seen() == 50
    assert calls == [70, 50]


def test_iterated_average_shortens_by_levels():
    assert iterated_average([0, 2, 4, 8], 2) == [2, 4.5]
    with pytest.raises(ContractViolation):
        iterated_average([1, 2], 2)


@pytest.mark.parametrize("n, p, expected", [
    (1, 1, Fraction(1)),
    (4, 1, Fraction(25, 12)),
    (3, 2, Fraction(49, 36)),
    (2, 3, Fraction(9, 8)),
])
def test_harmonic_small_values(n, p, expected):
    assert abs(harmonic(n, p) - mpf(expected.numerator) / expected.denominator) < tolerance(0)


def test_harmonic_matches_mpmath_at_large_n():
    assert abs(harmonic(1000) - (mp.digamma(1001) + mp.euler)) < tolerance(2)


def test_harmonic_domain():
    assert harmonic_upto(0) == 0
    with pytest.raises(ContractViolation):
        harmonic(0)
    with pytest.raises(ContractViolation):
        harmonic(3, 0)


@pytest.mark.parametrize("n, expected", [
    (0, Fraction(1)),
    (1, Fraction(-1, 2)),
    (2, Fraction(1, 6)),
    (3, Fraction(0)),
    (4, Fraction(-1, 30)),
    (10, Fraction(5, 66)),
    (12, Fraction(-691, 2730)),
])
def test_bernoulli_numbers(n, expected):
    assert bernoulli_number(n) == expected


def test_bernoulli_poly_matches_mpmath():
    x = mpf("0.3")
    for n in range(6):
        assert abs(bernoulli_poly(n, x) - mp.bernpoly(n, x)) < tolerance(0)


@pytest.mark.parametrize("s", [2, 3, 4, 5, 6, 7, 9])
def test_zeta_hi_matches_mpmath(s):
    assert abs(zeta_hi(s) - mp.zeta(s)) < tolerance(0)


def test_zeta_hi_small_budget_is_a_configuration_error():
    with pytest.raises(ConfigurationError):
        zeta_hi(3, terms=20)


@pytest.mark.parametrize("s, expected", [
    (0, Fraction(-1, 2)),
    (-1, Fraction(-1, 12)),
    (-2, Fraction(0)),
    (-3, Fraction(1, 120)),
    (-5, Fraction(-1, 252)),
    (-9, Fraction(-1, 132)),
])
def test_zeta_at_nonpositive_integers(s, expected):
    assert abs(zeta_value(s) - mpf(expected.numerator) / expected.denominator) < tolerance(0)


def test_zeta_value_rejects_pole():
    with pytest.raises(ContractViolation):
        zeta_value(1)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_even_zeta_routes_agree(k):
    assert abs(zeta_even_bernoulli(k) - zeta_value(2 * k)) < tolerance(0)


def test_eta_special_values():
    assert eta(1) == mp.ln2
    assert eta(0) == mpf(1) / 2
    assert abs(eta(2) - mp.pi ** 2 / 12) < tolerance(0)


@pytest.mark.parametrize("s", [2, 3, 5])
def test_eta_accelerated_is_independent_route(s):
    assert abs(eta_accelerated(s) - eta(s)) < tolerance(2)


def test_euler_gamma():
    assert abs(euler_gamma() - mp.euler) < tolerance(0)


@pytest.mark.parametrize("m", [2, 3, 4, 5, 6])
def test_li_half_matches_mpmath(m):
    assert abs(li_half(m) - mp.polylog(m, mpf(1) / 2)) < tolerance(0)


def test_li_half_four_prints():
    assert mp.nstr(li_half(4), 10) == "0.5174790617"


@pytest.mark.parametrize("k, n", [(0, 1), (0, 7), (1, 3), (2, 5)])
def test_polygamma_int_matches_mpmath(k, n):
    assert abs(polygamma_int(k, n) - mp.polygamma(k, n)) < tolerance(1)


def test_log_negative_real_is_principal():
    value = log_negative_real(2)
    assert value.real == mp.log(2)
    assert value.imag == mp.pi
    with pytest.raises(ContractViolation):
        log_negative_real(0)


def test_constant_table_rows():
    table = constants()
    names = [name for name, _ in table.as_rows()]
    assert names[:3] == ["pi", "gamma", "ln2"]
    assert "zeta(-9)" in names and "zeta(1)" not in names
    assert "li_half(6)" in names
    assert table.li_half[2] == li_half(2)
