import pytest
from mpmath import mp, mpf

from modules.errors import ContractViolation
from modules.numeric_kernel import tolerance, zeta_value
from modules.polylog import (
    li_singular_expansion, li_eval, check_crossover, li_inverted, li_at_two_closed,
    li_inversion_check, li_half_numeric
)
from modules.quadrature import integrate_finite


def test_li3_expansion_leading_terms():
    expansion = li_singular_expansion(3, 9)
    assert expansion.coefficient(0) == zeta_value(3)
    assert expansion.coefficient(1) == -zeta_value(2)
    assert expansion.coefficient(2, 1) == mpf(-1) / 2
    assert abs(expansion.coefficient(2) - mpf(3) / 4) < tolerance(0)
    assert abs(expansion.coefficient(3) - mpf(1) / 12) < tolerance(0)
    assert abs(expansion.coefficient(8) + mpf(1) / 10160640) < tolerance(0)


def test_li4_expansion_log_term():
    expansion = li_singular_expansion(4, 9)
    assert abs(expansion.coefficient(3, 1) - mpf(1) / 6) < tolerance(0)
    assert abs(expansion.coefficient(3) + mpf(11) / 36) < tolerance(0)


def test_li2_expansion_log_term():
    expansion = li_singular_expansion(2, 4)
    assert expansion.coefficient(1, 1) == 1
    assert expansion.coefficient(1) == -1


def test_expansion_rows_are_sorted_triples():
    rows = li_singular_expansion(3, 4).as_rows()
    assert rows[0][:2] == (0, 0)
    assert (2, 1) in [row[:2] for row in rows]
    assert [row[:2] for row in rows] == sorted(row[:2] for row in rows)


def test_expansion_domain():
    with pytest.raises(ContractViolation):
        li_singular_expansion(1, 5)
    with pytest.raises(ContractViolation):
        li_singular_expansion(4, 3)


@pytest.mark.parametrize("m, power", [(3, 10), (4, 11)])
def test_expansion_remainder_starts_at_first_nonzero_omitted_power(m, power):
    expansion = li_singular_expansion(m, 9)
    scaled = []
    for w in (mpf("0.1"), mpf("0.05"), mpf("0.01")):
        z = mp.exp(-w)
        remainder = li_eval(m, z, "direct") - expansion.evaluate(w)
        scaled.append(remainder / w ** power)
    assert all(abs(c / scaled[-1] - 1) < mpf("0.25") for c in scaled)


@pytest.mark.parametrize("m", [2, 3, 5])
@pytest.mark.parametrize("z", ["0.1", "0.5", "0.9", "0.97", "0.999"])
def test_li_eval_matches_mpmath(m, z):
    z = mpf(z)
    assert abs(li_eval(m, z) - mp.polylog(m, z)) < tolerance(2)


def test_li_eval_endpoints_and_domain():
    assert li_eval(3, 0) == 0
    assert li_eval(3, 1) == zeta_value(3)
    with pytest.raises(ContractViolation):
        li_eval(3, mpf("1.5"))
    with pytest.raises(ContractViolation):
        li_eval(1, mpf("0.5"))


def test_crossover_agreement():
    check_crossover()


@pytest.mark.parametrize("m", [2, 3, 4])
def test_inversion_reproduces_closed_forms(m):
    record = li_inversion_check(m)
    assert record.passed, record


def test_li2_at_two_has_negative_imaginary_part():
    value = li_inverted(2, 2)
    assert abs(value.real - mp.pi ** 2 / 4) < tolerance(5)
    assert abs(value.imag + mp.pi * mp.ln2) < tolerance(5)


def test_inverted_requires_z_above_one():
    with pytest.raises(ContractViolation):
        li_inverted(2, mpf("0.5"))
    with pytest.raises(ContractViolation):
        li_at_two_closed(5)


def test_li_half_numeric():
    expected = mp.pi ** 2 / 12 - mp.ln2 ** 2 / 2
    assert abs(li_half_numeric(2) - expected) < tolerance(2)


@pytest.mark.parametrize("m", [3, 4])
def test_li_half_is_integral_of_lower_weight(m):
    tol = mpf("1e-30")
    integral = integrate_finite(lambda t: li_eval(m - 1, t) / t, 0, mpf(1) / 2, tol).value
    assert abs(li_eval(m, mpf(1) / 2) - integral) < 10 * tol
