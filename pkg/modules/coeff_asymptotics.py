"""
Coefficient Asymptotics - S_n = [z^n] Li_m(1) / (Li_m(1) - Li_m(z)) and its n -> inf expansion

Pipeline: expand S_0(1 - eps) as a Laurent object in eps with L = ln(1/(1-z))
(coefficients D_ij), transfer each eps^i L^j to an asymptotic expansion
G_ij(n) of [z^n] (1-z)^i L^j, and sum T = sum D_ij G_ij.
"""
import functools
import logging
import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction

from mpmath import mp, mpf

from config import (
    COEFF_WEIGHTS, COEFF_DEFAULT_MAX_ORDER, VERIFIED_COEFF_ORDER,
    EXACT_SERIES_MIN_ORDER, ERROR_DOMAIN, ERROR_DUAL_ROUTE
)
from modules.errors import ContractViolation, InternalConsistencyError
from modules.numeric_kernel import (
    zeta_value, euler_gamma, bernoulli_number, from_fraction, to_mpf,
    tolerance, precision_cached
)
from modules.polylog import li_singular_expansion
from modules.reporting import Table
from modules.series_engine import (
    PowerSeries, BivariatePoly, ps_pow, ps_log1p, ps_recip, bv_recip_graded
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AsymptoticExpansion:
    """sum c ln(n)^a / n^b over (a, b) keys, truncated at b <= max_order."""
    terms: dict = field(default_factory=dict)
    max_order: int = COEFF_DEFAULT_MAX_ORDER

    def __post_init__(self):
        kept = {}
        for (a, b), c in self.terms.items():
            if a < 0 or b < 0:
                raise ContractViolation(
                    ERROR_DOMAIN.format(name="AsymptoticExpansion", value=(a, b), domain="a, b >= 0")
                )
            if b <= self.max_order and c:
                kept[(a, b)] = to_mpf(c)
        object.__setattr__(self, "terms", kept)

    @classmethod
    def constant(cls, value, max_order):
        return cls({(0, 0): value}, max_order)

    @classmethod
    def log_n(cls, max_order):
        return cls({(1, 0): mpf(1)}, max_order)

    def coefficient(self, a, b):
        return self.terms.get((a, b), mpf(0))

    def block(self, b):
        """{a: c} for the 1/n^b block."""
        return {a: c for (a, k), c in self.terms.items() if k == b}

    @property
    def min_power(self):
        return min((b for _, b in self.terms), default=None)

    def __add__(self, other):
        if not isinstance(other, AsymptoticExpansion):
            other = AsymptoticExpansion.constant(other, self.max_order)
        terms = dict(self.terms)
        for key, c in other.terms.items():
            terms[key] = terms.get(key, mpf(0)) + c
        return AsymptoticExpansion(terms, min(self.max_order, other.max_order))

    __radd__ = __add__

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other if isinstance(other, AsymptoticExpansion) else -to_mpf(other))

    def scale(self, c):
        return AsymptoticExpansion({k: c * v for k, v in self.terms.items()}, self.max_order)

    def __mul__(self, other):
        if not isinstance(other, AsymptoticExpansion):
            return self.scale(to_mpf(other))
        order = min(self.max_order, other.max_order)
        terms = {}
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in other.terms.items():
                b = b1 + b2
                if b > order:
                    continue
                key = (a1 + a2, b)
                terms[key] = terms.get(key, mpf(0)) + c1 * c2
        return AsymptoticExpansion(terms, order)

    __rmul__ = __mul__

    def shift_power(self, s):
        """Multiply by n^-s, keeping max_order."""
        return AsymptoticExpansion({(a, b + s): c for (a, b), c in self.terms.items()}, self.max_order)

    def truncate(self, order):
        return AsymptoticExpansion(self.terms, min(order, self.max_order))

    def prune(self, threshold):
        """Drop coefficients smaller than threshold (rounding residue of exact cancellations)."""
        return AsymptoticExpansion(
            {k: c for k, c in self.terms.items() if abs(c) >= threshold}, self.max_order
        )

    def evaluate(self, n):
        n = mpf(n)
        ell = mp.log(n)
        return sum((c * ell ** a / n ** b for (a, b), c in self.terms.items()), mpf(0))

    def as_rows(self):
        return [(b, a, c) for (a, b), c in sorted(self.terms.items(), key=lambda kv: (kv[0][1], kv[0][0]))]


@dataclass(frozen=True)
class CoeffPipelineResult:
    m: int
    D: dict
    G: dict
    T: AsymptoticExpansion
    C: list

    def c_value(self, n, k):
        return self.C[k].evaluate(n)

    def remainder_ratio(self, exact_value, n, k):
        """(S_n - C_(n,k)) n^(k+1) over the 1/n^(k+1) block of T at n; tends to 1."""
        ell = mp.log(n)
        block = sum((c * ell ** a for a, c in self.T.block(k + 1).items()), mpf(0))
        return (exact_value - self.c_value(n, k)) * mpf(n) ** (k + 1) / block


# Transfer layer

def _psi_expansion(order):
    """psi(n) ~ ln n - 1/(2n) - sum_k B_2k / (2k n^2k)."""
    terms = {(1, 0): mpf(1), (0, 1): mpf(-1) / 2}
    k = 1
    while 2 * k <= order:
        terms[(0, 2 * k)] = -from_fraction(bernoulli_number(2 * k)) / (2 * k)
        k += 1
    return AsymptoticExpansion(terms, order)


def _polygamma_expansion(r, order):
    """
    psi^(r)(n) for r >= 1

    (-1)^(r+1) [(r-1)!/n^r + r!/(2 n^(r+1)) + sum_k B_2k (2k+r-1)! / ((2k)! n^(2k+r))]
    """
    sign = 1 if r % 2 else -1
    terms = {(0, r): mpf(math.factorial(r - 1)), (0, r + 1): mpf(math.factorial(r)) / 2}
    k = 1
    while 2 * k + r <= order:
        b = from_fraction(bernoulli_number(2 * k))
        terms[(0, 2 * k + r)] = b * math.factorial(2 * k + r - 1) / math.factorial(2 * k)
        k += 1
    return AsymptoticExpansion(terms, order).scale(sign)


def _log_gamma_exponents(k, order):
    """E_r with Gamma(n+y) / (Gamma(n) Gamma(1+y)) = exp(sum E_r y^r), r = 1..k."""
    E = [None, _psi_expansion(order) + euler_gamma()]
    for r in range(2, k + 1):
        sign = 1 if r % 2 == 0 else -1
        E.append(_polygamma_expansion(r - 1, order).scale(mpf(1) / math.factorial(r))
                 - sign * zeta_value(r) / r)
    return E


@precision_cached
def asym_Lkn(k, max_order=6):
    """
    Asymptotic expansion of L_(k,n) = [z^n] ln(1/(1-z))^k

    [z^n] (1-z)^-y = (y/n) Gamma(n+y) / (Gamma(n) Gamma(1+y)), so
    L_(k,n) = k!/n [y^(k-1)] exp(sum_r E_r y^r), with E_r built from the
    polygamma expansions at n. For k = 2 this is 2 (psi(n) + gamma)/n.
    """
    if k < 1 or max_order < 1:
        raise ContractViolation(ERROR_DOMAIN.format(name="asym_Lkn", value=(k, max_order), domain="k >= 1, max_order >= 1"))
    inner = max_order - 1
    if k == 1:
        return AsymptoticExpansion({(0, 1): mpf(1)}, max_order)
    E = _log_gamma_exponents(k - 1, inner)
    e = [AsymptoticExpansion.constant(1, inner)]
    for j in range(1, k):
        acc = AsymptoticExpansion({}, inner)
        for r in range(1, j + 1):
            acc = acc + (E[r] * e[j - r]).scale(r)
        e.append(acc.scale(mpf(1) / j))
    result = e[k - 1].scale(math.factorial(k))
    return AsymptoticExpansion(result.terms, max_order).shift_power(1)


def _shifted_log(t, order):
    """ln(n - t) = ln n - sum_k t^k / (k n^k)."""
    terms = {(1, 0): mpf(1)}
    for k in range(1, order + 1):
        terms[(0, k)] = -from_fraction(Fraction(t ** k, k))
    return AsymptoticExpansion(terms, order)


def _shifted_inverse_power(b, t, order):
    """(n - t)^-b = n^-b sum_k C(b+k-1, k) t^k / n^k."""
    if b == 0:
        return AsymptoticExpansion.constant(1, order)
    terms = {}
    for k in range(0, order - b + 1):
        terms[(0, b + k)] = mpf(math.comb(b + k - 1, k) * t ** k)
    return AsymptoticExpansion(terms, order)


def shift_expansion(expansion, t):
    """Re-expand f(n - t) around n for an expansion f."""
    order = expansion.max_order
    if t == 0:
        return expansion
    log_shift = _shifted_log(t, order)
    total = AsymptoticExpansion({}, order)
    for (a, b), c in expansion.terms.items():
        term = _shifted_inverse_power(b, t, order).scale(c)
        for _ in range(a):
            term = term * log_shift
        total = total + term
    return total


@precision_cached
def compute_G(i, j, max_order=COEFF_DEFAULT_MAX_ORDER):
    """
    G_(i,j)(n) = [z^n] (1-z)^i L^j = sum_t C(i,t) (-1)^t L_(j,n-t)

    Args:
        i: eps power (>= 0)
        j: L power (>= 1)
        max_order: highest 1/n power kept

    Returns:
        AsymptoticExpansion starting at 1/n^(i+1)
    """
    if i < 0 or j < 1:
        raise ContractViolation(ERROR_DOMAIN.format(name="compute_G", value=(i, j), domain="i >= 0, j >= 1"))
    base = asym_Lkn(j, max_order)
    total = AsymptoticExpansion({}, max_order)
    for t in range(i + 1):
        sign = -1 if t % 2 else 1
        total = total + shift_expansion(base, t).scale(sign * math.comb(i, t))
    return total.prune(tolerance(10))


# Laurent expansion of S_0(1 - eps)

@precision_cached
def derive_S_eps(m, eps_order=6):
    """
    S(eps, L) through eps^eps_order

    w = -ln(1 - eps), ln w = -L + ln(w/eps), a = zeta(m) - Li_m(w) and the
    result is zeta(m) / a by the graded reciprocal.
    """
    if m not in COEFF_WEIGHTS:
        raise ContractViolation(ERROR_DOMAIN.format(name="derive_D", value=m, domain=str(COEFF_WEIGHTS)))
    if eps_order < 3:
        raise ContractViolation(ERROR_DOMAIN.format(name="derive_D", value=eps_order, domain="eps_order >= 3"))
    w_top = eps_order + 2
    series_order = eps_order + 3
    w = PowerSeries.from_coeffs([0] + [Fraction(1, k) for k in range(1, series_order + 1)])
    w_over_eps_minus_one = PowerSeries.from_coeffs(
        [0] + [Fraction(1, k + 1) for k in range(1, series_order)]
    )
    rho = ps_log1p(w_over_eps_minus_one)
    ln_w = BivariatePoly.log_symbol(series_order, -1) + BivariatePoly.from_series(rho)

    # the expansion needs w_order >= m even when fewer powers of w are used
    expansion = li_singular_expansion(m, max(w_top, m))
    a = BivariatePoly({}, w_top)
    for j in range(1, w_top + 1):
        w_j = BivariatePoly.from_series(ps_pow(w, j), eps_order=w_top)
        plain = expansion.coefficient(j, 0)
        if plain:
            a = a - w_j * plain
        logged = expansion.coefficient(j, 1)
        if logged:
            a = a - (w_j * ln_w) * logged
    reciprocal = bv_recip_graded(a, log_step=m - 2)
    result = reciprocal * zeta_value(m)
    logger.debug("S(eps, L) for m=%d: %d coefficients", m, len(result.terms))
    return result


def derive_D(m, eps_order=6):
    """D_(i,j) = [eps^i L^j] S(eps, L) as a plain map."""
    return dict(derive_S_eps(m, eps_order).terms)


def printed_D_m3():
    """The m = 3 values quoted for D_(i,j)."""
    pi, z3 = mp.pi, zeta_value(3)
    return {
        (-1, 0): 6 * z3 / pi ** 2,
        (0, 1): 18 * z3 / pi ** 4,
        (1, 1): 162 * z3 / pi ** 6,
        (1, 2): 54 * z3 / pi ** 6,
        (2, 3): 162 * z3 / pi ** 8,
        (2, 2): 27 * z3 * (27 + pi ** 2) / pi ** 8,
        (2, 1): 9 * z3 * (10 * pi ** 2 + 243) / (2 * pi ** 8),
        (0, 0): 27 * z3 / pi ** 4 - 3 * z3 / pi ** 2,
    }


def derive_table(m, eps_order=6):
    """(i, j, coefficient) rows of S(eps, L)."""
    table = Table(["i", "j", "coefficient"])
    for (i, j), c in derive_S_eps(m, eps_order).sorted_terms():
        table.add_row([i, j, c])
    return table


@precision_cached
def asym_Sn(m, max_order=COEFF_DEFAULT_MAX_ORDER):
    """
    T = D_(-1,0) + sum_(i>=0, j>=1) D_ij G_ij and its truncations C_(n,0..max_order)

    Pure eps^i terms (j = 0, i >= 0) are polynomials and do not contribute
    for n > i.
    """
    eps_order = max(max_order - 1, 3)
    D = derive_D(m, eps_order)
    G = {}
    T = AsymptoticExpansion.constant(D.get((-1, 0), mpf(0)), max_order)
    for (i, j), d in sorted(D.items()):
        if i < 0 or j == 0 or i + 1 > max_order:
            continue
        G[(i, j)] = compute_G(i, j, max_order)
        T = T + G[(i, j)].scale(d)
    T = T.prune(tolerance(10))
    C = [T.truncate(k) for k in range(max_order + 1)]
    return CoeffPipelineResult(m, D, G, T, C)


# Exact coefficients

@precision_cached
def _exact_S_series(m, order):
    zeta = zeta_value(m)
    denominator = PowerSeries.from_coeffs([zeta] + [-1 / mpf(k) ** m for k in range(1, order + 1)])
    return ps_recip(denominator) * zeta


def exact_Sn(m, n_max):
    """S_0..S_(n_max) by series division."""
    if n_max < 1:
        raise ContractViolation(ERROR_DOMAIN.format(name="exact_Sn", value=n_max, domain="n_max >= 1"))
    order = max(n_max, EXACT_SERIES_MIN_ORDER)
    return list(_exact_S_series(m, order).coeffs[:n_max + 1])


class StirlingEngine:
    """Unsigned Stirling numbers of the first kind c(n, k), exact integers, memoized by row."""

    def __init__(self):
        self._rows = [[1]]
        self._lock = threading.Lock()

    def row(self, n):
        with self._lock:
            while len(self._rows) <= n:
                prev = self._rows[-1]
                m = len(self._rows) - 1
                new = [0] * (m + 2)
                for k in range(m + 2):
                    left = prev[k - 1] if k >= 1 else 0
                    right = prev[k] if k <= m else 0
                    new[k] = left + m * right
                self._rows.append(new)
            return self._rows[n]

    def stirling(self, n, k):
        if k < 0 or k > n:
            return 0
        return self.row(n)[k]


_stirling = StirlingEngine()


def stirling_first_unsigned(n, k):
    return _stirling.stirling(n, k)


@functools.lru_cache(maxsize=None)
def _log_power_series(k, order, prec):
    L = PowerSeries.from_coeffs([0] + [Fraction(1, j) for j in range(1, order + 1)])
    return ps_pow(L, k)


def exact_Lkn(k, n):
    """
    [z^n] ln(1/(1-z))^k by series power, checked against k! c(n,k) / n!

    Raises:
        InternalConsistencyError: the two routes disagree
    """
    if k < 1 or n < 0:
        raise ContractViolation(ERROR_DOMAIN.format(name="exact_Lkn", value=(k, n), domain="k >= 1, n >= 0"))
    order = max(n, EXACT_SERIES_MIN_ORDER)
    by_series = _log_power_series(k, order, mp.prec)[n]
    by_stirling = mpf(math.factorial(k) * stirling_first_unsigned(n, k)) / math.factorial(n)
    diff = abs(by_series - by_stirling)
    if diff > tolerance(5) * max(1, abs(by_stirling)):
        raise InternalConsistencyError(
            ERROR_DUAL_ROUTE.format(name=f"L_({k},{n})", diff=mp.nstr(diff, 5))
        )
    return by_stirling


def coeff_column_name(k):
    suffix = "_unverified" if k > VERIFIED_COEFF_ORDER else ""
    return f"C_n{k}{suffix}"


def compare_table(m, n_values, k_max):
    """
    Comparison rows: n, exact S_n, C_(n,0..k_max), S_n - C_(n,k)

    Columns past the printed order carry an "_unverified" suffix.
    """
    n_values = list(n_values)
    if not n_values or min(n_values) < 1:
        raise ContractViolation(ERROR_DOMAIN.format(name="compare_table", value=n_values, domain="n >= 1"))
    pipeline = asym_Sn(m, max(k_max, 1))
    exact = exact_Sn(m, max(n_values))
    header = ["n", "S_n"] + [coeff_column_name(k) for k in range(k_max + 1)]
    header += [f"resid_{k}" + ("_unverified" if k > VERIFIED_COEFF_ORDER else "") for k in range(k_max + 1)]
    table = Table(header)
    for n in n_values:
        cs = [pipeline.c_value(n, k) for k in range(k_max + 1)]
        table.add_row([n, exact[n]] + cs + [exact[n] - c for c in cs])
    return table
