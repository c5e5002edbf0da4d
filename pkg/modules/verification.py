"""
Verification - Named check groups and the concurrent verify-all runner
"""
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from mpmath import mp, mpf

from config import DEFAULT_SETTINGS
from modules.coeff_asymptotics import (
    asym_Sn, asym_Lkn, compute_G, derive_D, printed_D_m3, exact_Sn, exact_Lkn
)
from modules.errors import PolyAsymError
from modules.euler_sums import (
    euler_sum_catalog, s_pm_linear, s_pm_general, t1_closed, t1_printed,
    s_pm_direct, alternating_log_harmonic
)
from modules.integral_expansion import (
    corollary_table, assembly_identities, s_constants, closed_forms, printed_forms,
    s2_polylog_route, i3_polylog_route, i3_euler_route, eval_I, partial_sum_I, coeff_I
)
from modules.numeric_kernel import (
    set_precision, constants, eta, eta_accelerated, euler_gamma, li_half,
    zeta_value, tolerance
)
from modules.polylog import (
    li_eval, li_inversion_check, li_half_numeric, li_singular_expansion, check_crossover
)
from modules.quadrature import integrate_semi_infinite
from modules.reporting import VerificationRecord

logger = logging.getLogger(__name__)

ORACLE_TOL = mpf("1e-10")
END_TO_END_N = (50, 100, 200, 300)
TRANSFER_N_MAX = 200


@dataclass(frozen=True)
class OracleSettings:
    """Direct-summation budget for the oracle-backed groups."""
    terms: int = DEFAULT_SETTINGS["oracle_terms"]
    levels: int = DEFAULT_SETTINGS["oracle_levels"]


def check_constants():
    table = constants()
    records = [
        VerificationRecord.compare("zeta(2) = pi^2/6", table.zeta[2], mp.pi ** 2 / 6, tolerance(0)),
        VerificationRecord.compare("zeta(4) = pi^4/90", table.zeta[4], mp.pi ** 4 / 90, tolerance(0)),
        VerificationRecord.compare("zeta(0) = -1/2", table.zeta[0], mpf(-1) / 2, tolerance(0)),
        VerificationRecord.compare("zeta(-1) = -1/12", table.zeta[-1], mpf(-1) / 12, tolerance(0)),
        VerificationRecord.compare("gamma", euler_gamma(), +mp.euler, tolerance(0)),
    ]
    for s in range(2, 7):
        records.append(VerificationRecord.compare(
            f"eta({s}) alternating route", eta_accelerated(s), eta(s), tolerance(2)
        ))
    for m in (4, 5):
        records.append(VerificationRecord.compare(
            f"Li_{m}(1/2) via expansion at w = ln 2", li_eval(m, mpf(1) / 2, "singular"), li_half(m), tolerance(2)
        ))
    return records


def check_polylog():
    check_crossover()
    records = [li_inversion_check(m) for m in (2, 3, 4)]
    ln2 = mp.ln2
    records.append(VerificationRecord.compare(
        "Li_2(1/2)", li_half_numeric(2), mp.pi ** 2 / 12 - ln2 ** 2 / 2, tolerance(2)))
    records.append(VerificationRecord.compare(
        "Li_3(1/2)", li_half_numeric(3),
        7 * zeta_value(3) / 8 - mp.pi ** 2 * ln2 / 12 + ln2 ** 3 / 6, tolerance(2)))
    expansion = li_singular_expansion(3, 9)
    printed = {3: mpf(1) / 12, 4: mpf(-1) / 288, 5: mpf(0), 6: mpf(1) / 86400,
               7: mpf(0), 8: mpf(-1) / 10160640}
    for power, value in printed.items():
        records.append(VerificationRecord.compare(
            f"Li_3 expansion w^{power}", expansion.coefficient(power), value, tolerance(8)))
    return records


def check_euler_sums(oracle=OracleSettings()):
    records = []
    for entry in euler_sum_catalog(oracle.terms, oracle.levels):
        records.append(VerificationRecord.compare(
            f"{entry.label} closed vs oracle", entry.closed_form, entry.oracle_value, ORACLE_TOL))
    z3, z5, pi = zeta_value(3), zeta_value(5), mp.pi
    tol = tolerance(8)
    records += [
        VerificationRecord.compare("2 S+-(1,2) = 5 zeta(3)/4", 2 * s_pm_linear(2), 5 * z3 / 4, tol),
        VerificationRecord.compare("2 S+-(1,4)", 2 * s_pm_linear(4), 59 * z5 / 16 - pi ** 2 * z3 / 6, tol),
        VerificationRecord.compare("S+-(2,3)", s_pm_general(2, 3), -11 * z5 / 32 + 5 * z3 * pi ** 2 / 48, tol),
        VerificationRecord.compare("T1 assembled vs printed", t1_closed(), t1_printed(), tol),
        VerificationRecord.compare(
            "sum (-1)^(k-1) H_k/k", s_pm_direct(1, 1, N=10 ** 3), alternating_log_harmonic(), ORACLE_TOL),
        VerificationRecord.compare(
            "S+-(4,3) closed vs oracle", s_pm_general(4, 3),
            s_pm_direct(4, 3, N=oracle.terms, levels=oracle.levels), ORACLE_TOL),
    ]
    squared = integrate_semi_infinite(lambda u: mp.log1p(mp.exp(-u)) ** 2, tolerance(15)).value
    records.append(VerificationRecord.compare(
        "S+-(1,2) from int ln(1+e^-u)^2", (3 * z3 / 2 - squared) / 2, s_pm_linear(2), tol))
    return records


def check_corollary():
    return corollary_table()


def check_integral_identities():
    records = assembly_identities()
    forms = closed_forms()
    for name, value in printed_forms().items():
        records.append(VerificationRecord.compare(f"{name} printed form", forms[name], value, tolerance(8)))
    s2 = s2_polylog_route()
    records.append(VerificationRecord.compare("S2 via Li(2) values", s2, forms["S2"], tolerance(8)))
    records.append(VerificationRecord.compare("I3 via inversion", i3_polylog_route(), coeff_I(3), tolerance(8)))
    records.append(VerificationRecord.compare("I3 via Euler sums", i3_euler_route(), coeff_I(3), tolerance(8)))
    return records


def check_s_constants(oracle=OracleSettings()):
    records = []
    constants = s_constants(oracle_terms=oracle.terms, oracle_levels=oracle.levels)
    for name, pair in constants.values.items():
        tol = tolerance(12) if name.startswith("S") else ORACLE_TOL
        records.append(VerificationRecord.compare(f"{name} closed vs numeric", pair.closed_form, pair.numeric, tol))
    return records


def check_integral_residuals(tol=mpf("1e-30")):
    i100 = eval_I(100, tol)
    i200 = eval_I(200, tol)
    i400 = eval_I(400, tol)
    pi, z3 = mp.pi, zeta_value(3)
    limit = pi ** 2 / 48
    scaled = 100 ** 2 * (i100 - mpf(3) / 4)
    ratio = abs(i100 - partial_sum_I(100, 5)) / abs(i200 - partial_sum_I(200, 5))
    third = 400 ** 3 * (i400 - partial_sum_I(400, 2))
    return [
        VerificationRecord.compare("n^2 (I(100) - 3/4) ~ pi^2/48", scaled, limit, limit / 100),
        VerificationRecord.check("|I - I_n5| ratio 100/200 in [44, 90]", 44 <= ratio <= 90, mp.nstr(ratio, 6)),
        VerificationRecord.compare("n^3 (I(400) - I_n2) ~ zeta(3)/8", third, z3 / 8, z3 / 8 * mpf("0.05")),
    ]


def check_d_table():
    derived = derive_D(3, 6)
    records = []
    for (i, j), value in printed_D_m3().items():
        records.append(VerificationRecord.compare(f"D({i},{j}) m=3", derived.get((i, j), mpf(0)), value, tolerance(8)))
    pi, z3 = mp.pi, zeta_value(3)
    d10 = z3 * (-1 / (2 * pi ** 2) - 6 / pi ** 4 + 243 / (2 * pi ** 6))
    records.append(VerificationRecord.compare("D(1,0) m=3", derived.get((1, 0), mpf(0)), d10, tolerance(8)))
    return records


def printed_coeff_blocks():
    """Printed coefficients (log power, inverse power) -> value for m = 3, 4, 6."""
    pi, z3, z5, gamma = mp.pi, zeta_value(3), zeta_value(5), euler_gamma()
    m3 = {
        (0, 0): 6 * z3 / pi ** 2,
        (0, 1): 18 * z3 / pi ** 4,
        (0, 2): 3 * z3 * (-18 * pi ** 2 - 36 * pi ** 2 * gamma) / pi ** 8,
        (1, 2): 3 * z3 * (-36 * pi ** 2) / pi ** 8,
        (0, 3): 3 * z3 * (-42 * pi ** 2 - 405 + 324 * gamma ** 2) / pi ** 8,
        (1, 3): 3 * z3 * 648 * gamma / pi ** 8,
        (2, 3): 3 * z3 * 324 / pi ** 8,
    }
    m4 = {
        (0, 0): pi ** 4 / (90 * z3),
        (0, 1): mpf(0),
        (0, 2): pi ** 4 / (540 * z3 ** 2),
        (0, 3): -pi ** 6 / (1620 * z3 ** 3),
        (1, 2): mpf(0),
        (1, 3): mpf(0),
    }
    m6 = {
        (0, 0): pi ** 6 / (945 * z5),
        (0, 1): mpf(0),
        (0, 2): mpf(0),
        (0, 3): mpf(0),
        (0, 4): pi ** 6 / (18900 * z5 ** 2),
    }
    return {3: m3, 4: m4, 6: m6}


def check_coeff_expansion():
    records = []
    for m, block in printed_coeff_blocks().items():
        expansion = asym_Sn(m, 5).T
        for (a, b), value in block.items():
            records.append(VerificationRecord.compare(
                f"m={m} ln(n)^{a}/n^{b}", expansion.coefficient(a, b), value, tolerance(8)))
    c0 = mp.nstr(asym_Sn(3, 5).c_value(100, 0), 9)
    records.append(VerificationRecord.check("C_n0 m=3 prints 0.730762969", c0 == "0.730762969", c0))
    s100 = mp.nstr(exact_Sn(3, 100)[100], 4)
    records.append(VerificationRecord.check("S_100 m=3 prints 0.7329", s100 == "0.7329", s100))
    return records


def check_transfer():
    records = []
    for k in (1, 2, 3):
        name = f"L_({k},n) series = Stirling for n <= {TRANSFER_N_MAX}"
        try:
            for n in range(TRANSFER_N_MAX + 1):
                exact_Lkn(k, n)
            records.append(VerificationRecord.check(name, True))
        except PolyAsymError as e:
            records.append(VerificationRecord.failure(name, e))
    for k in (1, 2, 3):
        expansion = asym_Lkn(k, 6)
        scaled = []
        for n in (20, 50, 100):
            remainder = abs(exact_Lkn(k, n) - expansion.evaluate(n))
            scaled.append(remainder * mpf(n) ** 6 / mp.log(n) ** 2)
        bound = scaled[0] * (1 + mpf("1e-6")) + tolerance(0)
        records.append(VerificationRecord.check(
            f"L_{k} remainder within c ln(n)^2/n^6", all(s <= bound for s in scaled[1:]),
            ", ".join(mp.nstr(s, 5) for s in scaled)))
    for i in range(3):
        for j in range(1, 4):
            lowest = compute_G(i, j, 6).min_power
            records.append(VerificationRecord.check(f"G({i},{j}) starts at n^-{i + 1}", lowest == i + 1, str(lowest)))
    gamma, pi = euler_gamma(), mp.pi
    printed = {
        "L_2": (asym_Lkn(2, 5), {(1, 1): 2, (0, 1): 2 * gamma, (0, 2): -1, (0, 3): mpf(-1) / 6,
                                  (0, 4): 0, (0, 5): mpf(1) / 60}),
        "L_3": (asym_Lkn(3, 5), {(2, 1): 3, (1, 1): 6 * gamma, (0, 1): 3 * gamma ** 2 - pi ** 2 / 2,
                                  (0, 2): 3 - 3 * gamma, (1, 2): -3, (0, 3): mpf(9) / 4 - gamma / 2,
                                  (1, 3): mpf(-1) / 2, (0, 4): mpf(3) / 4, (0, 5): gamma / 20 + mpf(1) / 48,
                                  (1, 5): mpf(1) / 20}),
        "G(1,2)": (compute_G(1, 2, 5), {(0, 2): 2 - 2 * gamma, (1, 2): -2, (0, 3): 5 - 2 * gamma,
                                        (0, 4): mpf(43) / 6 - 2 * gamma, (0, 5): mpf(55) / 6 - 2 * gamma}),
        "G(2,3)": (compute_G(2, 3, 5), {(0, 3): 6 - 18 * gamma - pi ** 2 + 6 * gamma ** 2,
                                        (1, 3): 12 * gamma - 18, (2, 3): 6}),
        "G(2,2)": (compute_G(2, 2, 5), {(0, 3): 4 * gamma - 6, (1, 3): 4}),
    }
    for label, (expansion, values) in printed.items():
        for (a, b), value in values.items():
            records.append(VerificationRecord.compare(
                f"{label} ln(n)^{a}/n^{b}", expansion.coefficient(a, b), value, tolerance(8)))
    return records


def check_end_to_end():
    records = []
    pipeline = asym_Sn(3, 5)
    exact = exact_Sn(3, 300)
    for n in END_TO_END_N:
        ratio = pipeline.remainder_ratio(exact[n], n, 3)
        records.append(VerificationRecord.check(
            f"m=3 (S_n - C_n3) n^4 / next block in [0.95, 1.05] at n={n}",
            0.95 <= ratio <= 1.05, mp.nstr(ratio, 6)))
        records.append(VerificationRecord.check(
            f"m=3 C_n4 closer than C_n3 at n={n}",
            abs(exact[n] - pipeline.c_value(n, 4)) < abs(exact[n] - pipeline.c_value(n, 3))))
    m4 = asym_Sn(4, 5)
    exact4 = exact_Sn(4, 100)
    ratio = abs(exact4[50] - m4.c_value(50, 0)) / abs(exact4[100] - m4.c_value(100, 0))
    records.append(VerificationRecord.check("m=4 |S_n - C_n0| ratio 50/100 in [3.4, 4.6]", 3.4 <= ratio <= 4.6, mp.nstr(ratio, 6)))
    return records


CHECK_GROUPS = {
    "constants": check_constants,
    "polylog": check_polylog,
    "euler_sums": check_euler_sums,
    "corollary": check_corollary,
    "integral_identities": check_integral_identities,
    "s_constants": check_s_constants,
    "integral_residuals": check_integral_residuals,
    "d_table": check_d_table,
    "coeff_expansion": check_coeff_expansion,
    "transfer": check_transfer,
    "end_to_end": check_end_to_end,
}


ORACLE_GROUPS = {"euler_sums", "s_constants"}


def run_group(name, oracle=None):
    """Run one group; an exception becomes a single failed record."""
    try:
        if name in ORACLE_GROUPS:
            records = CHECK_GROUPS[name](oracle or OracleSettings())
        else:
            records = CHECK_GROUPS[name]()
    except PolyAsymError as e:
        return [VerificationRecord.failure(f"{name} group", e)]
    failed = sum(1 for r in records if not r.passed)
    if failed:
        logger.warning("Group %s: %d of %d checks failed", name, failed, len(records))
    else:
        logger.info("Group %s: %d checks passed", name, len(records))
    return records


def _init_worker(precision):
    set_precision(precision)


def verify_all(precision, jobs=1, groups=None, oracle=None):
    """
    Run every check group and return the records in group order

    Args:
        precision: working precision P for every worker
        jobs: worker processes (1 runs in this process)
        groups: subset of CHECK_GROUPS names
        oracle: OracleSettings for the direct-summation groups

    Returns:
        list of VerificationRecord
    """
    names = list(groups or CHECK_GROUPS)
    if jobs <= 1:
        set_precision(precision)
        return [record for name in names for record in run_group(name, oracle)]
    with ProcessPoolExecutor(max_workers=jobs, initializer=_init_worker, initargs=(precision,)) as executor:
        futures = [executor.submit(run_group, name, oracle) for name in names]
        return [record for future in futures for record in future.result()]
