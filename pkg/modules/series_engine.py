"""
Series Engine - Truncated power series and the (eps, L) Laurent algebra

PowerSeries holds c_0..c_N with a declared truncation order N. BivariatePoly
is a sparse map (i, j) -> coefficient of eps^i L^j with i >= -1; ``L`` is an
opaque symbol, so every operation expands in eps first.
"""
import logging
from dataclasses import dataclass, field

from mpmath import mpf

from config import ERROR_NOT_INVERTIBLE, ERROR_GRADING, ERROR_DOMAIN
from modules.errors import ContractViolation, InternalConsistencyError
from modules.numeric_kernel import to_mpf

logger = logging.getLogger(__name__)


def _is_scalar(x):
    return not isinstance(x, (PowerSeries, BivariatePoly))


@dataclass(frozen=True)
class PowerSeries:
    coeffs: tuple
    order: int

    def __post_init__(self):
        if self.order < 0:
            raise ContractViolation(
                ERROR_DOMAIN.format(name="PowerSeries", value=self.order, domain="order >= 0")
            )
        padded = tuple(self.coeffs[:self.order + 1])
        padded += (mpf(0),) * (self.order + 1 - len(padded))
        object.__setattr__(self, "coeffs", padded)

    @classmethod
    def from_coeffs(cls, coeffs, order=None):
        coeffs = [to_mpf(c) for c in coeffs]
        return cls(tuple(coeffs), len(coeffs) - 1 if order is None else order)

    @classmethod
    def constant(cls, value, order):
        return cls((to_mpf(value),), order)

    @classmethod
    def variable(cls, order):
        """The series z."""
        return cls((mpf(0), mpf(1)), order)

    def __getitem__(self, k):
        return self.coeffs[k]

    def __len__(self):
        return self.order + 1

    def __add__(self, other):
        return ps_add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        return ps_sub(self, other)

    def __rsub__(self, other):
        return ps_add(ps_scale(self, -1), other)

    def __neg__(self):
        return ps_scale(self, -1)

    def __mul__(self, other):
        return ps_mul(self, other)

    __rmul__ = __mul__

    def evaluate(self, x):
        total = mpf(0)
        for c in reversed(self.coeffs):
            total = total * x + c
        return total


def ps_add(a, b):
    """Coefficient-wise sum; a scalar ``b`` is added to the constant term."""
    if _is_scalar(b):
        return PowerSeries((a.coeffs[0] + b,) + a.coeffs[1:], a.order)
    order = min(a.order, b.order)
    return PowerSeries(tuple(a[k] + b[k] for k in range(order + 1)), order)


def ps_sub(a, b):
    if _is_scalar(b):
        return ps_add(a, -b)
    return ps_add(a, ps_scale(b, -1))


def ps_scale(a, c):
    return PowerSeries(tuple(c * x for x in a.coeffs), a.order)


def ps_mul(a, b):
    """Cauchy product truncated at the smaller order."""
    if _is_scalar(b):
        return ps_scale(a, b)
    order = min(a.order, b.order)
    lo_a = next((k for k in range(order + 1) if a[k]), order + 1)
    lo_b = next((k for k in range(order + 1) if b[k]), order + 1)
    out = [mpf(0)] * (order + 1)
    for i in range(lo_a, order + 1 - lo_b):
        ai = a[i]
        if not ai:
            continue
        for j in range(lo_b, order + 1 - i):
            out[i + j] += ai * b[j]
    return PowerSeries(tuple(out), order)


def ps_recip(a):
    """
    Multiplicative inverse by the division recurrence

    Args:
        a: PowerSeries with nonzero constant term

    Returns:
        PowerSeries b with a * b = 1 through a.order
    """
    c0 = a[0]
    if not c0:
        raise ContractViolation(ERROR_NOT_INVERTIBLE)
    inv0 = 1 / c0
    b = [inv0]
    for k in range(1, a.order + 1):
        acc = mpf(0)
        for j in range(1, k + 1):
            if a[j]:
                acc += a[j] * b[k - j]
        b.append(-acc * inv0)
    return PowerSeries(tuple(b), a.order)


def _require_zero_constant(a, name):
    if a[0]:
        raise ContractViolation(
            ERROR_DOMAIN.format(name=name, value=a[0], domain="zero constant term")
        )


def ps_log1p(a):
    """Formal ln(1 + a) for a with zero constant term."""
    _require_zero_constant(a, "ps_log1p")
    b = [mpf(0)]
    for k in range(1, a.order + 1):
        acc = mpf(0)
        for j in range(1, k):
            acc += j * b[j] * a[k - j]
        b.append(a[k] - acc / k)
    return PowerSeries(tuple(b), a.order)


def ps_exp(a):
    """Formal exp(a) for a with zero constant term."""
    _require_zero_constant(a, "ps_exp")
    e = [mpf(1)]
    for k in range(1, a.order + 1):
        acc = mpf(0)
        for j in range(1, k + 1):
            if a[j]:
                acc += j * a[j] * e[k - j]
        e.append(acc / k)
    return PowerSeries(tuple(e), a.order)


def ps_pow(a, n):
    """Integer power by repeated squaring; negative n goes through ps_recip."""
    if n < 0:
        return ps_pow(ps_recip(a), -n)
    result = PowerSeries.constant(1, a.order)
    base = a
    while n:
        if n & 1:
            result = ps_mul(result, base)
        n >>= 1
        if n:
            base = ps_mul(base, base)
    return result


# Bivariate (eps, L) algebra

def _grading_bound(i, step):
    return (i + 1) // step


@dataclass(frozen=True)
class BivariatePoly:
    terms: dict = field(default_factory=dict)
    eps_order: int = 0

    def __post_init__(self):
        kept = {}
        for (i, j), c in self.terms.items():
            if i < -1 or j < 0:
                raise ContractViolation(
                    ERROR_DOMAIN.format(name="BivariatePoly", value=(i, j), domain="i >= -1, j >= 0")
                )
            if i <= self.eps_order and c:
                kept[(i, j)] = c
        object.__setattr__(self, "terms", kept)

    @classmethod
    def constant(cls, value, eps_order):
        return cls({(0, 0): to_mpf(value)}, eps_order)

    @classmethod
    def log_symbol(cls, eps_order, coefficient=1):
        """coefficient * L"""
        return cls({(0, 1): to_mpf(coefficient)}, eps_order)

    @classmethod
    def from_series(cls, series, eps_shift=0, l_power=0, eps_order=None):
        """Lift sum c_k eps^k to sum c_k eps^(k+shift) L^l_power."""
        top = series.order + eps_shift if eps_order is None else eps_order
        terms = {(k + eps_shift, l_power): c for k, c in enumerate(series.coeffs) if c}
        return cls(terms, min(top, series.order + eps_shift))

    def coefficient(self, i, j):
        return self.terms.get((i, j), mpf(0))

    def eps_coefficient(self, i):
        """The L-polynomial multiplying eps^i as {j: c}."""
        return {j: c for (k, j), c in self.terms.items() if k == i}

    @property
    def min_eps_degree(self):
        return min((i for i, _ in self.terms), default=self.eps_order + 1)

    def __add__(self, other):
        return bv_add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        return bv_sub(self, other)

    def __neg__(self):
        return bv_scale(self, -1)

    def __mul__(self, other):
        return bv_mul(self, other)

    __rmul__ = __mul__

    def evaluate(self, eps, L):
        return sum((c * mpf(eps) ** i * mpf(L) ** j for (i, j), c in self.terms.items()), mpf(0))

    def sorted_terms(self):
        return sorted(self.terms.items())


def bv_scale(a, c):
    return BivariatePoly({k: c * v for k, v in a.terms.items()}, a.eps_order)


def bv_add(a, b):
    """Sum truncated at the smaller eps-order; a scalar lands on eps^0 L^0."""
    if _is_scalar(b):
        b = BivariatePoly.constant(b, a.eps_order)
    terms = dict(a.terms)
    for key, c in b.terms.items():
        terms[key] = terms.get(key, mpf(0)) + c
    return BivariatePoly(terms, min(a.eps_order, b.eps_order))


def bv_sub(a, b):
    if _is_scalar(b):
        return bv_add(a, -b)
    return bv_add(a, bv_scale(b, -1))


def bv_mul(a, b):
    """
    Product with L-degrees adding

    The result keeps eps-degrees that both factors determine exactly:
    min(a.eps_order + min_deg(b), b.eps_order + min_deg(a)).
    """
    if _is_scalar(b):
        return bv_scale(a, b)
    if not a.terms or not b.terms:
        return BivariatePoly({}, min(a.eps_order, b.eps_order))
    order = min(a.eps_order + b.min_eps_degree, b.eps_order + a.min_eps_degree)
    terms = {}
    for (i1, j1), c1 in a.terms.items():
        for (i2, j2), c2 in b.terms.items():
            i = i1 + i2
            if i > order:
                continue
            key = (i, j1 + j2)
            terms[key] = terms.get(key, mpf(0)) + c1 * c2
    return BivariatePoly(terms, order)


def _lpoly_mul(p, q):
    out = {}
    for j1, c1 in p.items():
        for j2, c2 in q.items():
            out[j1 + j2] = out.get(j1 + j2, mpf(0)) + c1 * c2
    return out


def grading_violations(poly, step):
    """Terms (i, j) with j > floor((i + 1) / step)."""
    return [(i, j) for (i, j) in poly.terms if j > _grading_bound(i, step)]


def bv_recip_graded(a, log_step=None):
    """
    Reciprocal of a = eps * u by the graded division recurrence

    Args:
        a: BivariatePoly with no eps^0 part and a pure-number eps^1 coefficient
        log_step: when given, every computed term must satisfy
            j <= floor((i + 1) / log_step) (log_step = m - 2 for weight m)

    Returns:
        BivariatePoly eps^-1 u^-1 with eps_order a.eps_order - 2
    """
    if a.eps_coefficient(0) or a.min_eps_degree < 1:
        raise ContractViolation(ERROR_NOT_INVERTIBLE)
    lead = a.eps_coefficient(1)
    if set(lead) != {0} or not lead[0]:
        raise ContractViolation(ERROR_NOT_INVERTIBLE)
    depth = a.eps_order - 1
    u = [a.eps_coefficient(k + 1) for k in range(depth + 1)]
    inv0 = 1 / lead[0]
    r = [{0: inv0}]
    for k in range(1, depth + 1):
        acc = {}
        for j in range(1, k + 1):
            if not u[j]:
                continue
            for deg, c in _lpoly_mul(u[j], r[k - j]).items():
                acc[deg] = acc.get(deg, mpf(0)) + c
        r.append({deg: -c * inv0 for deg, c in acc.items()})
    terms = {}
    for k, lpoly in enumerate(r):
        for j, c in lpoly.items():
            terms[(k - 1, j)] = c
    result = BivariatePoly(terms, depth - 1)
    if log_step:
        bad = grading_violations(result, log_step)
        if bad:
            i, j = bad[0]
            raise InternalConsistencyError(
                ERROR_GRADING.format(i=i, j=j, bound=_grading_bound(i, log_step))
            )
    logger.debug("Graded reciprocal: %d terms through eps^%d", len(result.terms), result.eps_order)
    return result
