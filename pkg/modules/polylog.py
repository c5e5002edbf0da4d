"""
Polylog - Li_m on [0, 1], its expansion at z = 1, and the inversion formula
"""
import logging
import math
from dataclasses import dataclass

from mpmath import mp, mpf, mpc

from config import (
    SINGULAR_CROSSOVER, ERROR_DOMAIN, ERROR_DUAL_ROUTE, ERROR_CROSSOVER
)
from modules.errors import ContractViolation, InternalConsistencyError
from modules.numeric_kernel import (
    zeta_value, harmonic, bernoulli_poly, log_negative_real, li_half,
    tolerance, precision_cached
)
from modules.reporting import VerificationRecord
from modules.series_engine import BivariatePoly

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SingularExpansion:
    """Li_m(e^-w) as a polynomial in w and ln w (eps slot = w power, L slot = ln w power)."""
    m: int
    terms: BivariatePoly
    w_order: int

    def coefficient(self, power, log_power=0):
        return self.terms.coefficient(power, log_power)

    def evaluate(self, w):
        w = mpf(w)
        return self.terms.evaluate(w, mp.log(w))

    def as_rows(self):
        """(w-power, ln w power, coefficient) triples in increasing order."""
        return [(i, j, c) for (i, j), c in self.terms.sorted_terms()]


@precision_cached
def li_singular_expansion(m, w_order):
    """
    Expansion of Li_m(z) in w = -ln z around z = 1

    Li_m = (-1)^m/(m-1)! w^(m-1) (ln w - H_(m-1)) + sum_(j != m-1) (-1)^j zeta(m-j) w^j / j!

    Args:
        m: weight >= 2
        w_order: highest retained power of w (>= m)
    """
    if m < 2:
        raise ContractViolation(ERROR_DOMAIN.format(name="li_singular_expansion", value=m, domain="m >= 2"))
    if w_order < m:
        raise ContractViolation(
            ERROR_DOMAIN.format(name="li_singular_expansion", value=w_order, domain=f"w_order >= {m}")
        )
    terms = {}
    sign_m = 1 if m % 2 == 0 else -1
    lead = mpf(sign_m) / math.factorial(m - 1)
    for j in range(w_order + 1):
        if j == m - 1:
            terms[(j, 1)] = lead
            terms[(j, 0)] = -lead * harmonic(m - 1, 1)
            continue
        sign = 1 if j % 2 == 0 else -1
        terms[(j, 0)] = sign * zeta_value(m - j) / math.factorial(j)
    return SingularExpansion(m, BivariatePoly(terms, w_order), w_order)


def _direct_series(m, z):
    cutoff = mpf(10) ** (-mp.dps)
    total = mpf(0)
    power = mpf(1)
    k = 0
    while True:
        k += 1
        power *= z
        total += power / mpf(k) ** m
        tail = power * z / (mpf(k + 1) ** m * (1 - z))
        if tail < cutoff:
            return total


def _singular_order(w):
    # terms decay like (w / 2 pi)^j
    ratio = float(2 * mp.pi / w)
    return int(mp.dps / math.log10(ratio)) + 4


def li_eval(m, z, branch=None):
    """
    Li_m(z) for real z in [0, 1]

    Above SINGULAR_CROSSOVER the expansion in w = -ln z replaces the direct
    series. ``branch`` forces "direct" or "singular".
    """
    z = mpf(z)
    if m < 2:
        raise ContractViolation(ERROR_DOMAIN.format(name="li_eval", value=m, domain="m >= 2"))
    if z < 0 or z > 1:
        raise ContractViolation(ERROR_DOMAIN.format(name="li_eval", value=z, domain="[0, 1]"))
    if z == 0:
        return mpf(0)
    if z == 1:
        return zeta_value(m)
    if branch is None:
        branch = "singular" if z > SINGULAR_CROSSOVER else "direct"
    if branch == "direct":
        return _direct_series(m, z)
    w = -mp.log(z)
    expansion = li_singular_expansion(m, max(_singular_order(w), m))
    return expansion.evaluate(w)


def check_crossover(weights=(2, 3, 4, 5, 6)):
    """Both Li branches must agree to 10^(10-P) at the crossover point."""
    z = mpf(SINGULAR_CROSSOVER)
    for m in weights:
        diff = abs(li_eval(m, z, "direct") - li_eval(m, z, "singular"))
        if diff > tolerance(10):
            raise InternalConsistencyError(ERROR_CROSSOVER.format(z=z, diff=mp.nstr(diff, 5)))
    logger.debug("Polylog crossover agreement checked for weights %s", weights)


def li_inverted(m, z):
    """
    Li_m(z) for real z > 1 from the inversion formula

    Li_m(z) = -(-1)^m Li_m(1/z) - (2 pi i)^m / m! B_m(1/2 + ln(-z) / (2 pi i))
    with the principal logarithm ln(-z) = ln z + i pi.
    """
    z = mpf(z)
    if z <= 1:
        raise ContractViolation(ERROR_DOMAIN.format(name="li_inverted", value=z, domain="z > 1"))
    two_pi_i = mpc(0, 2 * mp.pi)
    x = mpf(1) / 2 + log_negative_real(z) / two_pi_i
    reflected = li_eval(m, 1 / z)
    sign = 1 if m % 2 == 0 else -1
    return -sign * reflected - two_pi_i ** m / math.factorial(m) * bernoulli_poly(m, x)


def li_at_two_closed(m):
    """Printed closed forms of Li_2(2), Li_3(2) and the Li_4(2) analogue."""
    pi, ln2 = mp.pi, mp.ln2
    if m == 2:
        return mpc(pi ** 2 / 4, -pi * ln2)
    if m == 3:
        return mpc(7 * zeta_value(3) / 8 + pi ** 2 * ln2 / 4, -pi * ln2 ** 2 / 2)
    if m == 4:
        real = -li_half(4) - ln2 ** 4 / 24 + pi ** 2 * ln2 ** 2 / 6 + pi ** 4 / 45
        return mpc(real, -pi * ln2 ** 3 / 6)
    raise ContractViolation(ERROR_DOMAIN.format(name="li_at_two_closed", value=m, domain="{2, 3, 4}"))


def li_inversion_check(m):
    """Compare Li_m(2) from the inversion formula with its closed form."""
    if m not in (2, 3, 4):
        raise ContractViolation(ERROR_DOMAIN.format(name="li_inversion_check", value=m, domain="{2, 3, 4}"))
    computed = li_inverted(m, 2)
    reference = li_at_two_closed(m)
    return VerificationRecord.compare(f"Li_{m}(2) inversion", computed, reference, tolerance(8))


def li_half_numeric(m):
    """
    Li_m(1/2) by the direct series

    For m = 2, 3 the value is checked against its closed form.
    """
    value = li_eval(m, mpf(1) / 2)
    ln2 = mp.ln2
    closed = None
    if m == 2:
        closed = mp.pi ** 2 / 12 - ln2 ** 2 / 2
    elif m == 3:
        closed = 7 * zeta_value(3) / 8 - mp.pi ** 2 * ln2 / 12 + ln2 ** 3 / 6
    if closed is not None:
        diff = abs(value - closed)
        if diff > tolerance(2):
            raise InternalConsistencyError(
                ERROR_DUAL_ROUTE.format(name=f"Li_{m}(1/2)", diff=mp.nstr(diff, 5))
            )
    return value
