"""
Integral Expansion - I(n) = int_0^1 [x^n + (1-x)^n]^(1/n) dx and its 1/n expansion

I(n) ~ sum_i I_i / n^i with I_0..I_5 in closed form. The coefficients come
from integrals over (0, inf) of u^a ln(1+e^-u)^b and u^a e^-u/(1+e^-u),
which are tabulated here both by quadrature and in closed form.
"""
import logging
from dataclasses import dataclass

import numpy as np
from mpmath import mp, mpf, mpc

from config import ERROR_DOMAIN
from modules.errors import ContractViolation, QuadratureNonConvergence
from modules.euler_sums import (
    s_pm_linear, s13_mu1, t1_closed, t2_closed, t3_quadratic,
    t1_direct, t2_direct, s_pm_direct, QUADRATIC
)
from modules.numeric_kernel import zeta_value, li_half, tolerance, precision_cached
from modules.polylog import li_inverted
from modules.quadrature import integrate_finite, integrate_semi_infinite
from modules.reporting import VerificationRecord, Table

logger = logging.getLogger(__name__)

MAX_COEFFICIENT = 5
SPLIT_THRESHOLD = 32
SPLIT_WIDTH = 8


@dataclass(frozen=True)
class ICoefficients:
    values: tuple

    def __getitem__(self, i):
        return self.values[i]


@precision_cached
def coefficients():
    pi, z3 = mp.pi, zeta_value(3)
    return ICoefficients((
        mpf(3) / 4,
        mpf(0),
        pi ** 2 / 48,
        z3 / 8,
        -pi ** 4 / 960,
        -z3 * pi ** 2 / 48,
    ))


def coeff_I(i):
    """I_i for 0 <= i <= 5; higher coefficients have no closed form here."""
    if not 0 <= i <= MAX_COEFFICIENT:
        raise ContractViolation(ERROR_DOMAIN.format(name="coeff_I", value=i, domain="0..5"))
    return coefficients()[i]


def partial_sum_I(n, k):
    """I_(n,k) = sum_(i=0..k) I_i / n^i."""
    if not 0 <= k <= MAX_COEFFICIENT:
        raise ContractViolation(ERROR_DOMAIN.format(name="partial_sum_I", value=k, domain="0..5"))
    n = mpf(n)
    return sum((coeff_I(i) / n ** i for i in range(k + 1)), mpf(0))


def _i_integrand(n):
    threshold = -mp.dps * mp.ln10

    def f(x):
        one_minus = 1 - x
        log_r = mp.log(x) - mp.log(one_minus)
        exponent = n * log_r
        if exponent < threshold:
            return one_minus
        return one_minus * mp.exp(mp.log1p(mp.exp(exponent)) / n)

    return f


def eval_I(n, tol):
    """
    I(n) = 2 int_0^(1/2) (1-x) (1 + (x/(1-x))^n)^(1/n) dx

    The correction factor is formed in log space and dropped once
    n ln(x/(1-x)) falls below -dps ln 10. For large n the interval is split
    a few multiples of 1/n below x = 1/2, where the integrand bends.
    """
    if n < 1:
        raise ContractViolation(ERROR_DOMAIN.format(name="eval_I", value=n, domain="n >= 1"))
    f = _i_integrand(n)
    half = mpf(1) / 2
    tol = mpf(tol)
    if n < SPLIT_THRESHOLD:
        return 2 * integrate_finite(f, 0, half, tol / 2).value
    split = half - mpf(SPLIT_WIDTH) / n
    left = integrate_finite(f, 0, split, tol / 4).value
    right = integrate_finite(f, split, half, tol / 4).value
    return 2 * (left + right)


# Integrands over (0, inf)

def _l(u):
    return mp.log1p(mp.exp(-u))


def _fermi(u):
    e = mp.exp(-u)
    return e / (1 + e)


INTEGRANDS = {
    "S1": lambda u: u ** 3 * _fermi(u),
    "S2": lambda u: _l(u) ** 3,
    "S3": lambda u: u * _l(u) ** 2,
    "S4": lambda u: u ** 4 * _fermi(u),
    "S5": lambda u: u * _l(u) ** 3,
    "S6": lambda u: u ** 3 * _fermi(u) * _l(u),
    "S7": lambda u: _l(u) ** 4,
}


def s2_polylog_route():
    """S2 through Li_2(2), Li_3(2), Li_4(2); the imaginary part must cancel."""
    ln2 = mp.ln2
    return (mpc(0, ln2 ** 3 * mp.pi) + 3 * ln2 ** 2 * li_inverted(2, 2)
            - 6 * ln2 * li_inverted(3, 2) + 6 * li_inverted(4, 2) - mp.pi ** 4 / 15)


def i3_polylog_route():
    """I3 = 11 zeta(3)/32 + i pi ln(2)^2/8 + ln(2) Li_2(2)/4 - Li_3(2)/4."""
    ln2 = mp.ln2
    return (11 * zeta_value(3) / 32 + mpc(0, mp.pi * ln2 ** 2 / 8)
            + ln2 * li_inverted(2, 2) / 4 - li_inverted(3, 2) / 4)


def i3_euler_route():
    """(3 zeta(3)/4 + (3 zeta(3)/2 - 2 S+-(1,2))) / 8."""
    z3 = zeta_value(3)
    return (3 * z3 / 4 + 3 * z3 / 2 - 2 * s_pm_linear(2)) / 8


@precision_cached
def closed_forms():
    """Closed forms of S1..S7 and T1..T3."""
    pi, ln2 = mp.pi, mp.ln2
    z3, z5 = zeta_value(3), zeta_value(5)
    l4, l5 = li_half(4), li_half(5)
    t1, t2 = t1_closed(), t2_closed()
    return {
        "S1": 7 * pi ** 4 / 120,
        "S2": pi ** 2 * ln2 ** 2 / 4 - 21 * ln2 * z3 / 4 - 6 * l4 + pi ** 4 / 15 - ln2 ** 4 / 4,
        "S3": -2 * s13_mu1() + 7 * pi ** 4 / 360,
        "S4": 45 * z5 / 2,
        "S5": -3 * (t1 + t2),
        "S6": 6 * (-s_pm_linear(4) + 15 * z5 / 16),
        "S7": (2 * pi ** 2 * ln2 ** 3 / 3 - 21 * ln2 ** 2 * z3 / 2 - 24 * ln2 * l4
               - 4 * ln2 ** 5 / 5 - 24 * l5 + 24 * z5),
        "T1": t1,
        "T2": t2,
        "T3": t3_quadratic(),
    }


def printed_forms():
    """The same constants written the way they are usually quoted."""
    pi, ln2 = mp.pi, mp.ln2
    z3, z5 = zeta_value(3), zeta_value(5)
    l4, l5 = li_half(4), li_half(5)
    return {
        "S3": 4 * l4 - pi ** 4 / 24 - pi ** 2 * ln2 ** 2 / 6 + ln2 ** 4 / 6 + 7 * ln2 * z3 / 2,
        "S5": (12 * l5 + 12 * ln2 * l4 + 2 * ln2 ** 5 / 5 + 21 * z3 * ln2 ** 2 / 4
               - 99 * z5 / 16 - pi ** 2 * ln2 ** 3 / 3 - z3 * pi ** 2 / 2),
        "S6": -87 * z5 / 16 + pi ** 2 * z3 / 2,
        "T2": 5 * z3 * pi ** 2 / 48 - 41 * z5 / 32,
    }


@dataclass(frozen=True)
class ConstantPair:
    closed_form: mpf
    numeric: mpf = None

    @property
    def difference(self):
        return None if self.numeric is None else abs(self.closed_form - self.numeric)


@dataclass(frozen=True)
class SConstants:
    values: dict

    def __getitem__(self, name):
        return self.values[name]

    def closed(self, name):
        return self.values[name].closed_form


def s_constants(numeric=True, quad_tol=None, oracle_terms=None, oracle_levels=None):
    """
    Closed forms of S1..S7, T1..T3 with independent counterparts

    S-constants are checked by quadrature, T-constants by direct summation.
    """
    forms = closed_forms()
    if not numeric:
        return SConstants({name: ConstantPair(value) for name, value in forms.items()})
    quad_tol = quad_tol or tolerance(15)
    oracle_kwargs = {}
    if oracle_terms:
        oracle_kwargs["N"] = oracle_terms
    if oracle_levels:
        oracle_kwargs["levels"] = oracle_levels
    values = {}
    for name, integrand in INTEGRANDS.items():
        result = integrate_semi_infinite(integrand, quad_tol)
        values[name] = ConstantPair(forms[name], result.value)
    values["T1"] = ConstantPair(forms["T1"], t1_direct(**oracle_kwargs))
    values["T2"] = ConstantPair(forms["T2"], t2_direct(**oracle_kwargs))
    values["T3"] = ConstantPair(forms["T3"], s_pm_direct(1, 3, QUADRATIC, **oracle_kwargs))
    return SConstants(values)


def assembly_identities(constants=None):
    """Assembly of I_4 and I_5 from the S-constants."""
    constants = constants or s_constants(numeric=False)
    s = {name: constants.closed(name) for name in ("S1", "S2", "S3", "S4", "S5", "S6", "S7")}
    i4 = (-s["S1"] + 2 * s["S2"] + 3 * s["S3"]) / 48
    i5 = (-s["S4"] + 2 * s["S5"] - 2 * s["S6"] + s["S7"]) / 96
    tol = tolerance(8)
    return [
        VerificationRecord.compare("I4 = (-S1+2S2+3S3)/48", i4, coeff_I(4), tol),
        VerificationRecord.compare("I5 = (-S4+2S5-2S6+S7)/96", i5, coeff_I(5), tol),
    ]


# Corollary

def _i3_integrand(u):
    lu = _l(u)
    return u * lu / 8 + lu ** 2 / 8


def corollary_rows():
    """(label, integrand, reference) for every tabulated integral."""
    forms = closed_forms()
    pi, z3 = mp.pi, zeta_value(3)
    return [
        ("int ln(1+e^-u)/4", lambda u: _l(u) / 4, pi ** 2 / 48),
        ("int u ln(1+e^-u)", lambda u: u * _l(u), 3 * z3 / 4),
        ("int ln(1+e^-u)^2", lambda u: _l(u) ** 2, z3 / 4),
        ("int u^3 e^-u/(1+e^-u)", INTEGRANDS["S1"], forms["S1"]),
        ("int ln(1+e^-u)^3", INTEGRANDS["S2"], forms["S2"]),
        ("int u ln(1+e^-u)^2", INTEGRANDS["S3"], forms["S3"]),
        ("int u^4 e^-u/(1+e^-u)", INTEGRANDS["S4"], forms["S4"]),
        ("int u ln(1+e^-u)^3", INTEGRANDS["S5"], forms["S5"]),
        ("int u^3 e^-u ln(1+e^-u)/(1+e^-u)", INTEGRANDS["S6"], forms["S6"]),
        ("int ln(1+e^-u)^4", INTEGRANDS["S7"], forms["S7"]),
        ("int [u ln(1+e^-u) + ln(1+e^-u)^2]/8", _i3_integrand, i3_polylog_route().real),
    ]


def corollary_table(tol=None, quad_tol=None):
    """
    Quadrature against closed form for each corollary integral

    A row whose quadrature does not converge is reported as failed; the
    remaining rows are still computed.
    """
    tol = tol or tolerance(12)
    quad_tol = quad_tol or tolerance(15)
    records = []
    for label, integrand, reference in corollary_rows():
        try:
            result = integrate_semi_infinite(integrand, quad_tol)
        except QuadratureNonConvergence as e:
            records.append(VerificationRecord.failure(label, e, tol))
            continue
        records.append(VerificationRecord.compare(label, result.value, reference, tol))
    return records


# Residual tables

RESIDUAL_ORDERS = (0, 2, 3, 4, 5)


def residual_header():
    header = ["n", "I_n"] + [f"I_n{k}" for k in RESIDUAL_ORDERS]
    header += [f"scaled_{k}" for k in RESIDUAL_ORDERS]
    return header + ["status"]


def scaled_power(k):
    # I_1 = 0, so the k = 0 residual is scaled by n^2
    return 2 if k == 0 else k + 1


def residual_table(n_values, tol):
    """
    Residual rows: I(n), partial sums and n^(k+1) (I(n) - I_(n,k))

    Args:
        n_values: integers n >= 2
        tol: quadrature tolerance for I(n)

    Returns:
        Table with a "status" column; non-converged rows are kept and marked
    """
    table = Table(residual_header())
    for n in n_values:
        if n < 2:
            raise ContractViolation(ERROR_DOMAIN.format(name="residual_table", value=n, domain="n >= 2"))
        partials = [partial_sum_I(n, k) for k in RESIDUAL_ORDERS]
        try:
            value = eval_I(n, tol)
        except QuadratureNonConvergence as e:
            logger.warning("I(%d) did not converge: %s", n, e)
            table.add_row([n, ""] + partials + [""] * len(RESIDUAL_ORDERS) + ["failed"])
            continue
        scaled = [mpf(n) ** scaled_power(k) * (value - p) for k, p in zip(RESIDUAL_ORDERS, partials)]
        table.add_row([n, value] + partials + scaled + ["ok"])
    return table


def fit_decay_order(n_values, residuals):
    """
    Observed order q in |residual| ~ C n^-q by least squares in log-log space

    Returns:
        float q
    """
    logs_n = np.log(np.array([float(n) for n in n_values]))
    logs_r = np.log(np.array([float(abs(r)) for r in residuals]))
    slope, _ = np.polyfit(logs_n, logs_r, 1)
    return float(-slope)
