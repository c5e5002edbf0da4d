"""
Numeric Kernel - Working precision, harmonic numbers, zeta values and constants

All reals are mpmath ``mpf`` values evaluated at the process-wide working
precision plus a fixed number of guard digits.
"""
import functools
import logging
import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction

from mpmath import mp, mpf, mpc

from config import (
    DEFAULT_SETTINGS, GUARD_DIGITS, MIN_PRECISION_DIGITS, ZETA_TABLE_RANGE,
    ETA_TABLE_MAX, LI_HALF_WEIGHTS, GAMMA_EM_TERMS, BORWEIN_TERMS_FACTOR,
    ERROR_PRECISION_TOO_LOW, ERROR_ZETA_BUDGET, ERROR_DOMAIN, ERROR_DUAL_ROUTE
)
from modules.errors import ContractViolation, ConfigurationError, InternalConsistencyError

logger = logging.getLogger(__name__)

ExtReal = mpf
ComplexPair = mpc

_precision = {"digits": DEFAULT_SETTINGS["precision_digits"]}


def set_precision(digits):
    """
    Fix the working precision for this process

    Args:
        digits: significant decimal digits P (>= MIN_PRECISION_DIGITS)
    """
    digits = int(digits)
    if digits < MIN_PRECISION_DIGITS:
        raise ConfigurationError(
            ERROR_PRECISION_TOO_LOW.format(minimum=MIN_PRECISION_DIGITS, value=digits)
        )
    _precision["digits"] = digits
    mp.dps = digits + GUARD_DIGITS
    logger.debug("Working precision set to %d digits (mp.dps=%d)", digits, mp.dps)


def working_digits():
    return _precision["digits"]


def tolerance(k=0):
    """Return 10^(k - P) for the current working precision P."""
    return mpf(10) ** (k - working_digits())


def precision_cached(func):
    """Memoize ``func`` per working precision.

    mpmath precision is global state, so the cache key carries ``mp.prec``
    next to the positional arguments.
    """
    @functools.lru_cache(maxsize=None)
    def cached(prec, *args):
        return func(*args)

    @functools.wraps(func)
    def wrapper(*args):
        return cached(mp.prec, *args)

    wrapper.cache_clear = cached.cache_clear
    return wrapper


def from_fraction(q):
    """Convert an exact Fraction (or int) to an mpf at working precision."""
    q = Fraction(q)
    return mpf(q.numerator) / q.denominator


def to_mpf(x):
    if isinstance(x, Fraction):
        return from_fraction(x)
    return x if isinstance(x, mpf) else mpf(x)


def iterated_average(values, levels):
    """
    Average neighbouring entries ``levels`` times

    Args:
        values: sequence of partial sums
        levels: number of averaging passes (< len(values))

    Returns:
        list: the averaged sequence, ``levels`` entries shorter
    """
    current = list(values)
    if levels >= len(current):
        raise ContractViolation(
            ERROR_DOMAIN.format(name="iterated_average", value=levels,
                                domain=f"levels < {len(current)}")
        )
    for _ in range(levels):
        current = [(current[i] + current[i + 1]) / 2 for i in range(len(current) - 1)]
    return current


# Harmonic numbers

_harmonic_lock = threading.Lock()
_harmonic_tables = {}


def _harmonic_table(n, p):
    key = (p, mp.prec)
    with _harmonic_lock:
        table = _harmonic_tables.setdefault(key, [mpf(0)])
        if len(table) <= n:
            total = table[-1]
            for j in range(len(table), n + 1):
                total += mpf(1) / mpf(j) ** p
                table.append(total)
        return table


def harmonic_upto(n, p=1):
    """H_n^(p) with H_0^(p) = 0 allowed."""
    if n < 0 or p < 1:
        raise ContractViolation(
            ERROR_DOMAIN.format(name="harmonic", value=(n, p), domain="n >= 0, p >= 1")
        )
    return _harmonic_table(n, p)[n]


def harmonic(n, p=1):
    """
    Generalized harmonic number H_n^(p) = sum_{j=1..n} 1/j^p

    Args:
        n: number of terms (>= 1)
        p: exponent (>= 1)

    Returns:
        mpf at working precision
    """
    if n < 1 or p < 1:
        raise ContractViolation(
            ERROR_DOMAIN.format(name="harmonic", value=(n, p), domain="n >= 1, p >= 1")
        )
    return _harmonic_table(n, p)[n]


# Bernoulli numbers

_bernoulli_lock = threading.Lock()
_bernoulli = [Fraction(1)]


def bernoulli_number(n):
    """Exact B_n (B_1 = -1/2) from sum_{k<=m} C(m+1, k) B_k = 0."""
    if n < 0:
        raise ContractViolation(ERROR_DOMAIN.format(name="bernoulli_number", value=n, domain="n >= 0"))
    with _bernoulli_lock:
        for m in range(len(_bernoulli), n + 1):
            if m > 1 and m % 2:
                _bernoulli.append(Fraction(0))
                continue
            acc = sum(math.comb(m + 1, k) * _bernoulli[k] for k in range(m))
            _bernoulli.append(-acc / (m + 1))
        return _bernoulli[n]


def bernoulli_poly(n, x):
    """B_n(x) = sum_k C(n, k) B_k x^(n-k); ``x`` may be real or complex."""
    total = 0
    for k in range(n + 1):
        b = bernoulli_number(k)
        if b:
            total += math.comb(n, k) * from_fraction(b) * x ** (n - k)
    return total


# Zeta and eta

def borwein_coefficients(n):
    """Cumulative integer weights d_0..d_n of the Borwein eta algorithm."""
    ds = [0] * (n + 1)
    d = s = ds[0] = 1
    for i in range(1, n + 1):
        d = d * 4 * (n + i - 1) * (n - i + 1)
        d //= (2 * i) * (2 * i - 1)
        s += d
        ds[i] = s
    return ds


@precision_cached
def _zeta_borwein(s, terms):
    d = borwein_coefficients(terms)
    dn = d[terms]
    total = mpf(0)
    for k in range(terms):
        term = mpf(d[k] - dn) / mpf(k + 1) ** s
        total += term if k % 2 == 0 else -term
    eta_value = -total / dn
    return eta_value / (1 - mpf(2) ** (1 - s))


def borwein_terms():
    """Term budget giving roughly one decimal digit per 0.77 terms."""
    return int(BORWEIN_TERMS_FACTOR * mp.dps) + 10


def zeta_hi(s, terms=None):
    """
    Riemann zeta at an integer s >= 2

    Computed from the Borwein-accelerated alternating series for eta(s),
    divided by (1 - 2^(1-s)). A second, smaller budget must agree with the
    main one to within 10^-P.

    Args:
        s: integer >= 2
        terms: override for the eta series term budget

    Returns:
        mpf zeta(s)
    """
    if int(s) != s or s < 2:
        raise ContractViolation(ERROR_DOMAIN.format(name="zeta_hi", value=s, domain="integer s >= 2"))
    s = int(s)
    terms = terms or borwein_terms()
    check_terms = max(terms - 10, terms // 2, 1)
    value = _zeta_borwein(s, terms)
    check = _zeta_borwein(s, check_terms)
    if abs(value - check) > tolerance(0):
        raise ConfigurationError(ERROR_ZETA_BUDGET.format(s=s, terms=terms))
    return value


def zeta_value(s):
    """zeta(s) for any integer s != 1 (negative s through Bernoulli numbers)."""
    if int(s) != s or s == 1:
        raise ContractViolation(ERROR_DOMAIN.format(name="zeta_value", value=s, domain="integer s != 1"))
    s = int(s)
    if s >= 2:
        return zeta_hi(s)
    if s == 0:
        return mpf(-1) / 2
    n = -s
    return -from_fraction(bernoulli_number(n + 1)) / (n + 1)


def zeta_even_bernoulli(k):
    """zeta(2k) = (-1)^(k+1) B_2k (2 pi)^2k / (2 (2k)!)."""
    b = from_fraction(bernoulli_number(2 * k))
    sign = 1 if k % 2 else -1
    return sign * b * (2 * mp.pi) ** (2 * k) / (2 * mp.factorial(2 * k))


def eta(s):
    """Alternating zeta (1 - 2^(1-s)) zeta(s), with eta(1) = ln 2 and eta(0) = 1/2."""
    if int(s) != s:
        raise ContractViolation(ERROR_DOMAIN.format(name="eta", value=s, domain="integer s"))
    s = int(s)
    if s == 1:
        return mp.ln2
    return (1 - mpf(2) ** (1 - s)) * zeta_value(s)


@precision_cached
def eta_accelerated(s):
    """
    eta(s) by Euler-van Wijngaarden averaging of plain partial sums

    Independent of the Borwein weights used by ``zeta_hi``.
    """
    if s < 1:
        raise ContractViolation(ERROR_DOMAIN.format(name="eta_accelerated", value=s, domain="s >= 1"))
    n = int(3.33 * mp.dps) + 20
    partial = []
    total = mpf(0)
    for k in range(1, n + 1):
        term = mpf(1) / mpf(k) ** s
        total += term if k % 2 else -term
        partial.append(total)
    return iterated_average(partial, n - 1)[0]


@precision_cached
def euler_gamma():
    """
    Euler-Mascheroni constant by Euler-Maclaurin at N = GAMMA_EM_TERMS

    gamma = H_N - ln N - 1/(2N) + sum_k B_2k / (2k N^2k); correction terms
    are added until they fall below 10^-(dps+5), never fewer than B_10.
    """
    N = GAMMA_EM_TERMS
    value = harmonic(N, 1) - mp.log(N) - mpf(1) / (2 * N)
    cutoff = mpf(10) ** (-(mp.dps + 5))
    k = 1
    while True:
        term = from_fraction(bernoulli_number(2 * k)) / (2 * k * mpf(N) ** (2 * k))
        value += term
        if k >= 5 and abs(term) < cutoff:
            break
        k += 1
    return value


@precision_cached
def li_half(m):
    """Li_m(1/2) = sum 2^-k / k^m, stopped once the geometric tail bound is below 10^-dps."""
    if m < 1:
        raise ContractViolation(ERROR_DOMAIN.format(name="li_half", value=m, domain="m >= 1"))
    cutoff = mpf(10) ** (-mp.dps)
    half = mpf(1) / 2
    total = mpf(0)
    power = mpf(1)
    k = 0
    while True:
        k += 1
        power *= half
        total += power / mpf(k) ** m
        tail = power / mpf(k + 1) ** m
        if tail < cutoff:
            return total


def polygamma_int(k, n):
    """
    psi^(k)(n) at a positive integer through harmonic numbers

    Args:
        k: derivative order in {0, 1, 2}
        n: positive integer

    Returns:
        mpf
    """
    if n < 1:
        raise ContractViolation(ERROR_DOMAIN.format(name="polygamma_int", value=n, domain="n >= 1"))
    if k == 0:
        return harmonic_upto(n - 1, 1) - euler_gamma()
    if k == 1:
        return zeta_value(2) - harmonic_upto(n - 1, 2)
    if k == 2:
        return -2 * zeta_value(3) + 2 * harmonic_upto(n - 1, 3)
    raise ContractViolation(ERROR_DOMAIN.format(name="polygamma_int", value=k, domain="{0, 1, 2}"))


def log_negative_real(x):
    """Principal ln(-x) = ln x + i pi for real x > 0."""
    x = mpf(x)
    if x <= 0:
        raise ContractViolation(ERROR_DOMAIN.format(name="log_negative_real", value=x, domain="x > 0"))
    return mpc(mp.log(x), mp.pi)


@dataclass(frozen=True)
class ConstantTable:
    pi: mpf
    gamma: mpf
    ln2: mpf
    zeta: dict = field(default_factory=dict)
    eta: dict = field(default_factory=dict)
    li_half: dict = field(default_factory=dict)

    def as_rows(self):
        """(name, value) pairs in a fixed order."""
        rows = [("pi", self.pi), ("gamma", self.gamma), ("ln2", self.ln2)]
        rows += [(f"zeta({s})", v) for s, v in sorted(self.zeta.items())]
        rows += [(f"eta({s})", v) for s, v in sorted(self.eta.items())]
        rows += [(f"li_half({m})", v) for m, v in sorted(self.li_half.items())]
        return rows


def _check_anchor(name, value, reference):
    diff = abs(value - reference)
    if diff > tolerance(0):
        raise InternalConsistencyError(ERROR_DUAL_ROUTE.format(name=name, diff=mp.nstr(diff, 5)))


@precision_cached
def constants():
    """Build the constant table and check the closed-form anchors."""
    low, high = ZETA_TABLE_RANGE
    zeta = {s: zeta_value(s) for s in range(low, high + 1) if s != 1}
    table = ConstantTable(
        pi=+mp.pi,
        gamma=euler_gamma(),
        ln2=+mp.ln2,
        zeta=zeta,
        eta={s: eta(s) for s in range(1, ETA_TABLE_MAX + 1)},
        li_half={m: li_half(m) for m in LI_HALF_WEIGHTS},
    )
    _check_anchor("zeta(2)", zeta[2], mp.pi ** 2 / 6)
    _check_anchor("zeta(4)", zeta[4], mp.pi ** 4 / 90)
    for k in range(1, high // 2 + 1):
        _check_anchor(f"zeta({2 * k})", zeta[2 * k], zeta_even_bernoulli(k))
    ln2 = mp.ln2
    _check_anchor("li_half(2)", table.li_half[2], mp.pi ** 2 / 12 - ln2 ** 2 / 2)
    _check_anchor(
        "li_half(3)", table.li_half[3],
        7 * zeta[3] / 8 - mp.pi ** 2 * ln2 / 12 + ln2 ** 3 / 6
    )
    logger.debug("Constant table built at mp.dps=%d", mp.dps)
    return table
