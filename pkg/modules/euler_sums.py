"""
Euler Sums - Closed forms of alternating Euler sums and a summation oracle

S+-(p, q) = sum_k (-1)^(k-1) H_k^(p) / k^q. The oracle sums the series
directly and smooths the last partial sums by iterated pairwise averaging.
"""
import logging
import math
from dataclasses import dataclass

from mpmath import mp, mpf

from config import DEFAULT_SETTINGS, ERROR_PARITY, ERROR_DOMAIN, ERROR_ORACLE_DIVERGED
from modules.errors import ContractViolation, OracleNonConvergence
from modules.numeric_kernel import (
    zeta_value, eta, li_half, iterated_average, precision_cached
)

logger = logging.getLogger(__name__)

LINEAR = "linear"
QUADRATIC = "quadratic"
DEFAULT_ORACLE_TOL = mpf("1e-15")


@dataclass(frozen=True)
class OracleEstimate:
    value: mpf
    error: mpf
    terms: int


@dataclass(frozen=True)
class EulerSumId:
    kind: str
    p: int
    q: int
    closed_form: mpf
    oracle_value: mpf

    @property
    def label(self):
        if self.kind == LINEAR:
            return f"S+-({self.p},{self.q})"
        return f"T({self.p},{self.q})"

    @property
    def difference(self):
        return abs(self.closed_form - self.oracle_value)


# Closed forms

@precision_cached
def s_pm_linear(q):
    """
    S+-(1, q) for even q

    2 S = (q+1) eta(q+1) - zeta(q+1) - 2 sum_(k=1..q/2-1) eta(2k) zeta(q+1-2k)
    """
    if q < 2 or q % 2:
        raise ContractViolation(ERROR_PARITY.format(name="s_pm_linear", condition="q even, q >= 2", args=q))
    total = (q + 1) * eta(q + 1) - zeta_value(q + 1)
    for k in range(1, q // 2):
        total -= 2 * eta(2 * k) * zeta_value(q + 1 - 2 * k)
    return total / 2


@precision_cached
def s_pm_general(p, q):
    """
    S+-(p, q) for p + q odd, with eta(0) = 1/2

    Args:
        p: harmonic exponent (>= 2)
        q: denominator exponent (>= 2)
    """
    if p < 2 or q < 2:
        raise ContractViolation(ERROR_DOMAIN.format(name="s_pm_general", value=(p, q), domain="p, q >= 2"))
    if (p + q) % 2 == 0:
        raise ContractViolation(ERROR_PARITY.format(name="s_pm_general", condition="p + q odd", args=(p, q)))
    sign_p = 1 if p % 2 == 0 else -1
    total = (1 - sign_p) * zeta_value(p) * eta(q) + eta(p + q)
    for k in range(p // 2 + 1):
        j = p - 2 * k
        sign = -1 if j % 2 == 0 else 1
        total += 2 * math.comb(q + j - 1, q - 1) * sign * eta(q + j) * eta(2 * k)
    for k in range(q // 2 + 1):
        total += 2 * sign_p * math.comb(p + q - 2 * k - 1, p - 1) * zeta_value(p + q - 2 * k) * eta(2 * k)
    return total / 2


@precision_cached
def s13_mu1():
    """S+-(1, 3) in terms of Li_4(1/2)."""
    ln2 = mp.ln2
    return (-2 * li_half(4) + 11 * zeta_value(4) / 4 + zeta_value(2) * ln2 ** 2 / 2
            - ln2 ** 4 / 12 - 7 * zeta_value(3) * ln2 / 4)


@precision_cached
def t3_quadratic():
    """sum_k (-1)^k H_k^2 / k^3."""
    ln2 = mp.ln2
    z2, z3, z5 = zeta_value(2), zeta_value(3), zeta_value(5)
    return -(4 * li_half(5) + 4 * ln2 * li_half(4) + 2 * ln2 ** 5 / 15
             + 7 * z3 * ln2 ** 2 / 4 - 19 * z5 / 32 - 2 * z2 * ln2 ** 3 / 3
             - 11 * z2 * z3 / 8)


@precision_cached
def t1_closed():
    """sum_k (-1)^k H_(k-1)^2 / k^3 = T3 + 2 S+-(1,4) - 15 zeta(5)/16."""
    return t3_quadratic() + 2 * s_pm_linear(4) - 15 * zeta_value(5) / 16


def t1_printed():
    ln2 = mp.ln2
    z3, z5 = zeta_value(3), zeta_value(5)
    return (-4 * li_half(5) - 4 * ln2 * li_half(4) - 2 * ln2 ** 5 / 15
            - 7 * z3 * ln2 ** 2 / 4 + 107 * z5 / 32 + mp.pi ** 2 * ln2 ** 3 / 9
            + z3 * mp.pi ** 2 / 16)


@precision_cached
def t2_closed():
    """sum_k (-1)^(k-1) H_(k-1)^(2) / k^3 = S+-(2,3) - 15 zeta(5)/16."""
    return s_pm_general(2, 3) - 15 * zeta_value(5) / 16


def alternating_log_harmonic():
    """sum_k (-1)^(k-1) H_k / k = zeta(2)/2 - ln(2)^2/2."""
    return zeta_value(2) / 2 - mp.ln2 ** 2 / 2


# Oracle

def accelerated_alternating(terms, n_terms, levels=DEFAULT_SETTINGS["oracle_levels"], tol=None):
    """
    Sum an alternating series from its first n_terms + levels + 1 terms

    The last levels + 2 partial sums are averaged ``levels`` times; the two
    surviving estimates start at N and N + 1.

    Args:
        terms: iterable of signed terms, first one for k = 1
        n_terms: N
        levels: averaging passes r
        tol: required agreement of the two estimates (None skips the check)

    Returns:
        OracleEstimate with the later estimate and the gap between the two
    """
    needed = n_terms + levels + 1
    window = []
    total = mpf(0)
    for k, term in enumerate(terms, start=1):
        total += term
        if k >= n_terms - 1:
            window.append(total)
        if k >= needed:
            break
    if len(window) < levels + 2:
        raise ContractViolation(
            ERROR_DOMAIN.format(name="accelerated_alternating", value=len(window), domain=f">= {levels + 2} partial sums")
        )
    first, second = iterated_average(window[-(levels + 2):], levels)
    error = abs(second - first)
    if tol is not None and error > tol:
        raise OracleNonConvergence(
            ERROR_ORACLE_DIVERGED.format(error=mp.nstr(error, 5), tol=mp.nstr(tol, 5)),
            estimates=(first, second),
        )
    return OracleEstimate(second, error, needed)


def _linear_terms(p, q, shift=0):
    # shift=1 uses H_(k-1) in place of H_k
    h = mpf(0)
    k = 0
    while True:
        k += 1
        kp = mpf(k)
        previous = h
        h += 1 / kp ** p
        value = previous if shift else h
        term = value / kp ** q
        yield term if k % 2 else -term


def _quadratic_terms(p, q, shift=0):
    h = mpf(0)
    k = 0
    while True:
        k += 1
        kp = mpf(k)
        previous = h
        h += 1 / kp ** p
        value = previous if shift else h
        term = value * value / kp ** q
        yield -term if k % 2 else term


def s_pm_direct(p, q, kind=LINEAR, N=DEFAULT_SETTINGS["oracle_terms"],
                levels=DEFAULT_SETTINGS["oracle_levels"], tol=DEFAULT_ORACLE_TOL):
    """
    Direct accelerated summation

    linear:    sum_k (-1)^(k-1) H_k^(p) / k^q
    quadratic: sum_k (-1)^k (H_k^(p))^2 / k^q
    """
    if N < 10 ** 3:
        raise ContractViolation(ERROR_DOMAIN.format(name="s_pm_direct", value=N, domain="N >= 1000"))
    if kind == LINEAR:
        source = _linear_terms(p, q)
    elif kind == QUADRATIC:
        source = _quadratic_terms(p, q)
    else:
        raise ContractViolation(ERROR_DOMAIN.format(name="s_pm_direct", value=kind, domain="linear|quadratic"))
    estimate = accelerated_alternating(source, N, levels, tol)
    logger.debug("Oracle %s(%d,%d) with N=%d: gap %s", kind, p, q, N, mp.nstr(estimate.error, 3))
    return estimate.value


def t1_direct(N=DEFAULT_SETTINGS["oracle_terms"], levels=DEFAULT_SETTINGS["oracle_levels"], tol=DEFAULT_ORACLE_TOL):
    """sum_k (-1)^k H_(k-1)^2 / k^3 summed directly."""
    return accelerated_alternating(_quadratic_terms(1, 3, shift=1), N, levels, tol).value


def t2_direct(N=DEFAULT_SETTINGS["oracle_terms"], levels=DEFAULT_SETTINGS["oracle_levels"], tol=DEFAULT_ORACLE_TOL):
    """sum_k (-1)^(k-1) H_(k-1)^(2) / k^3 summed directly."""
    return accelerated_alternating(_linear_terms(2, 3, shift=1), N, levels, tol).value


# Catalog

def closed_form(kind, p, q):
    if kind == QUADRATIC:
        if (p, q) != (1, 3):
            raise ContractViolation(ERROR_DOMAIN.format(name="closed_form", value=(p, q), domain="quadratic (1, 3)"))
        return t3_quadratic()
    if p == 1 and q == 3:
        return s13_mu1()
    if p == 1 and q == 1:
        return alternating_log_harmonic()
    if p == 1:
        return s_pm_linear(q)
    return s_pm_general(p, q)


CATALOG = (
    (LINEAR, 1, 2),
    (LINEAR, 1, 4),
    (LINEAR, 1, 3),
    (LINEAR, 2, 3),
    (QUADRATIC, 1, 3),
)


def euler_sum_catalog(N=DEFAULT_SETTINGS["oracle_terms"], levels=DEFAULT_SETTINGS["oracle_levels"]):
    """Every Euler sum the integral constants depend on, with both values."""
    entries = []
    for kind, p, q in CATALOG:
        oracle = s_pm_direct(p, q, kind, N, levels, tol=None)
        entries.append(EulerSumId(kind, p, q, closed_form(kind, p, q), oracle))
    return entries
