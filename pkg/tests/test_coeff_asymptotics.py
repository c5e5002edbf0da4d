import pytest
from mpmath import mp, mpf

from modules.coeff_asymptotics import (
    AsymptoticExpansion, asym_Lkn, compute_G, shift_expansion, derive_S_eps, derive_D,
    printed_D_m3, derive_table, asym_Sn, exact_Sn, exact_Lkn, stirling_first_unsigned,
    coeff_column_name, compare_table
)
from modules.errors import ContractViolation
from modules.numeric_kernel import tolerance, harmonic
from modules.series_engine import grading_violations
from modules.verification import printed_coeff_blocks


def test_expansion_algebra():
    one_over_n = AsymptoticExpansion({(0, 1): mpf(1)}, 4)
    square = one_over_n * one_over_n
    assert square.terms == {(0, 2): 1}
    log_n = AsymptoticExpansion.log_n(4)
    assert (log_n * one_over_n).coefficient(1, 1) == 1
    assert (one_over_n + one_over_n).coefficient(0, 1) == 2
    assert (one_over_n - one_over_n).terms == {}
    assert AsymptoticExpansion({(0, 5): mpf(1)}, 4).terms == {}
    assert abs(square.evaluate(10) - mpf(1) / 100) < tolerance(0)


def test_shift_expansion_of_inverse_power():
    # 1/(n-1) = 1/n + 1/n^2 + 1/n^3 + ...
    shifted = shift_expansion(AsymptoticExpansion({(0, 1): mpf(1)}, 5), 1)
    assert all(shifted.coefficient(0, b) == 1 for b in range(1, 6))


@pytest.mark.parametrize("n, k", [(5, 2), (10, 3), (12, 1), (7, 7), (20, 4)])
def test_stirling_matches_mpmath(n, k):
    assert stirling_first_unsigned(n, k) == abs(int(mp.stirling1(n, k)))


def test_stirling_out_of_range_is_zero():
    assert stirling_first_unsigned(4, 5) == 0
    assert stirling_first_unsigned(0, 0) == 1


@pytest.mark.parametrize("n", [1, 2, 10, 150])
def test_exact_L1_and_L2(n):
    assert abs(exact_Lkn(1, n) - mpf(1) / n) < tolerance(0)
    expected = 2 * harmonic(n - 1) / n if n > 1 else mpf(0)
    assert abs(exact_Lkn(2, n) - expected) < tolerance(0)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_exact_Lkn_routes_agree_up_to_200(k):
    for n in range(201):
        expected = mp.factorial(k) * abs(mp.stirling1(n, k)) / mp.factorial(n)
        assert abs(exact_Lkn(k, n) - expected) < tolerance(5) * max(1, expected), n


def test_exact_Lkn_domain():
    with pytest.raises(ContractViolation):
        exact_Lkn(0, 5)


def test_asym_L2_coefficients():
    gamma = mp.euler
    expansion = asym_Lkn(2, 5)
    assert abs(expansion.coefficient(1, 1) - 2) < tolerance(5)
    assert abs(expansion.coefficient(0, 1) - 2 * gamma) < tolerance(5)
    assert abs(expansion.coefficient(0, 2) + 1) < tolerance(5)
    assert abs(expansion.coefficient(0, 3) + mpf(1) / 6) < tolerance(5)
    assert abs(expansion.coefficient(0, 4)) < tolerance(5)
    assert abs(expansion.coefficient(0, 5) - mpf(1) / 60) < tolerance(5)


def test_asym_L3_leading_terms():
    gamma = mp.euler
    expansion = asym_Lkn(3, 5)
    assert abs(expansion.coefficient(2, 1) - 3) < tolerance(5)
    assert abs(expansion.coefficient(0, 1) - (3 * gamma ** 2 - mp.pi ** 2 / 2)) < tolerance(5)
    assert abs(expansion.coefficient(0, 4) - mpf(3) / 4) < tolerance(5)


@pytest.mark.parametrize("k", [2, 3, 4])
def test_asym_Lkn_tracks_exact_values(k):
    expansion = asym_Lkn(k, 6)
    n = 200
    remainder = abs(exact_Lkn(k, n) - expansion.evaluate(n))
    assert remainder < 10 * mp.log(n) ** k / mpf(n) ** 7


def test_G11_is_first_difference_of_inverse():
    g = compute_G(1, 1, 5)
    assert all(abs(g.coefficient(0, b) + 1) < tolerance(5) for b in range(2, 6))
    assert g.min_power == 2


def test_G12_printed_blocks():
    gamma = mp.euler
    g = compute_G(1, 2, 5)
    assert abs(g.coefficient(0, 2) - (2 - 2 * gamma)) < tolerance(5)
    assert abs(g.coefficient(1, 2) + 2) < tolerance(5)
    assert abs(g.coefficient(0, 4) - (mpf(43) / 6 - 2 * gamma)) < tolerance(5)


def test_G_domain():
    with pytest.raises(ContractViolation):
        compute_G(0, 0)


def test_derived_D_matches_printed_values():
    derived = derive_D(3, 6)
    for key, value in printed_D_m3().items():
        assert abs(derived.get(key, mpf(0)) - value) < tolerance(8), key
    pi, z3 = mp.pi, mp.zeta(3)
    d10 = z3 * (-1 / (2 * pi ** 2) - 6 / pi ** 4 + 243 / (2 * pi ** 6))
    assert abs(derived[(1, 0)] - d10) < tolerance(8)


@pytest.mark.parametrize("m, step", [(3, 1), (4, 2), (6, 4)])
def test_grading_holds(m, step):
    assert grading_violations(derive_S_eps(m, 6), step) == []


def test_m6_has_single_log_only_from_eps_cubed():
    poly = derive_S_eps(6, 6)
    logged = sorted((i, j) for (i, j) in poly.terms if j > 0)
    assert logged[0] == (3, 1)


def test_derive_domain():
    with pytest.raises(ContractViolation):
        derive_S_eps(5)
    with pytest.raises(ContractViolation):
        derive_S_eps(3, 2)


def test_m6_at_the_lowest_eps_order():
    derived = derive_D(6, 3)
    pi, z5 = mp.pi, mp.zeta(5)
    assert abs(derived[(-1, 0)] - pi ** 6 / (945 * z5)) < tolerance(8)
    assert max(i for i, _ in derived) == 3
    deeper = derive_D(6, 6)
    for key, value in derived.items():
        assert abs(deeper[key] - value) < tolerance(8), key


@pytest.mark.parametrize("max_order", [1, 2, 3, 4])
def test_m6_pipeline_at_low_orders(max_order):
    pipeline = asym_Sn(6, max_order)
    assert len(pipeline.C) == max_order + 1
    assert abs(pipeline.c_value(50, 0) - mp.pi ** 6 / (945 * mp.zeta(5))) < tolerance(8)


def test_derive_table_rows():
    table = derive_table(3, 4)
    assert table.header == ["i", "j", "coefficient"]
    assert table.rows[0][:2] == [-1, 0]


@pytest.mark.parametrize("m", [3, 4, 6])
def test_assembled_expansion_matches_printed_blocks(m):
    expansion = asym_Sn(m, 5).T
    for (a, b), value in printed_coeff_blocks()[m].items():
        assert abs(expansion.coefficient(a, b) - value) < tolerance(8), (a, b)


def test_truncations_are_nested():
    pipeline = asym_Sn(3, 5)
    assert len(pipeline.C) == 6
    assert pipeline.C[0].terms == {(0, 0): pipeline.D[(-1, 0)]}
    assert set(pipeline.C[2].terms) <= set(pipeline.C[3].terms)


def test_exact_coefficients():
    values = exact_Sn(3, 100)
    assert abs(values[0] - 1) < tolerance(0)
    assert mp.nstr(values[100], 4) == "0.7329"
    assert mp.nstr(asym_Sn(3, 5).c_value(100, 0), 9) == "0.730762969"
    with pytest.raises(ContractViolation):
        exact_Sn(3, 0)


def test_m4_remainder_decays_like_inverse_square():
    pipeline = asym_Sn(4, 5)
    exact = exact_Sn(4, 100)
    ratio = abs(exact[50] - pipeline.c_value(50, 0)) / abs(exact[100] - pipeline.c_value(100, 0))
    assert 3.4 <= ratio <= 4.6


@pytest.mark.slow
@pytest.mark.parametrize("n", [50, 100, 200, 300])
def test_m3_remainder_follows_next_block(n):
    pipeline = asym_Sn(3, 5)
    exact = exact_Sn(3, 300)[n]
    assert 0.95 <= pipeline.remainder_ratio(exact, n, 3) <= 1.05
    assert abs(exact - pipeline.c_value(n, 4)) < abs(exact - pipeline.c_value(n, 3))


def test_remainder_ratio_detects_a_missing_term():
    pipeline = asym_Sn(3, 5)
    exact = exact_Sn(3, 100)[100]
    ell = mp.log(100)
    # drop the ln(n)^2 / n^3 term from C_n3
    damaged = exact + pipeline.T.coefficient(2, 3) * ell ** 2 / mpf(100) ** 3
    assert not 0.95 <= pipeline.remainder_ratio(damaged, 100, 3) <= 1.05


def test_compare_table_flags_unverified_columns():
    assert coeff_column_name(3) == "C_n3"
    assert coeff_column_name(4) == "C_n4_unverified"
    table = compare_table(3, [10, 20], 4)
    assert "C_n4_unverified" in table.header
    assert "resid_4_unverified" in table.header
    assert [row[0] for row in table.rows] == [10, 20]
    with pytest.raises(ContractViolation):
        compare_table(3, [0], 2)
