"""
Quadrature - Tanh-sinh (double exponential) integration at working precision

Nodes are generated on the unit interval in complement form: for t >= 0,
s = (pi/2) sinh t, the distance to the nearest endpoint is
d = e^(-2s) / (1 + e^(-2s)) and the weight is pi cosh t e^(-2s) / (1 + e^(-2s))^2.
Both end clusters therefore keep full relative precision.
"""
import functools
import logging
from dataclasses import dataclass

from mpmath import mp, mpf

from config import (
    QUAD_MIN_LEVELS, QUAD_MAX_LEVELS, QUAD_WEIGHT_CUTOFF_EXTRA,
    ERROR_QUADRATURE_DIVERGED, ERROR_QUADRATURE_TOL
)
from modules.errors import ContractViolation, QuadratureNonConvergence
from modules.numeric_kernel import tolerance

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class QuadResult:
    value: mpf
    error_estimate: mpf
    evaluations: int
    levels: int = 0


@functools.lru_cache(maxsize=None)
def _level_nodes(level, prec):
    """(d, weight) pairs of refinement ``level``, excluding the centre node."""
    cutoff = mpf(10) ** (-(mp.dps + QUAD_WEIGHT_CUTOFF_EXTRA))
    h = mpf(2) ** (-level)
    half_pi = mp.pi / 2
    nodes = []
    j = 1
    step = 1 if level == 0 else 2
    while True:
        t = j * h
        s = half_pi * mp.sinh(t)
        q = mp.exp(-2 * s)
        weight = mp.pi * mp.cosh(t) * q / (1 + q) ** 2
        if weight < cutoff:
            break
        nodes.append((q / (1 + q), weight))
        j += step
    return tuple(nodes)


def level_nodes(level):
    return _level_nodes(level, mp.prec)


class TanhSinhQuadrature:
    def __init__(self, max_levels=QUAD_MAX_LEVELS, min_levels=QUAD_MIN_LEVELS):
        self.max_levels = max_levels
        self.min_levels = min_levels

    def _pair_sum(self, f, a, width, nodes):
        total = mpf(0)
        count = 0
        for d, weight in nodes:
            offset = width * d
            lower = a + offset
            upper = a + width - offset
            if lower != a:
                total += weight * f(lower)
                count += 1
            if upper != a + width:
                total += weight * f(upper)
                count += 1
        return total, count

    def integrate(self, f, a, b, tol):
        """
        Refine by halving h until two successive levels differ by <= tol

        Args:
            f: integrand, called with mpf arguments strictly inside (a, b)
            a, b: finite limits
            tol: absolute tolerance, at least 10^(5-P)

        Returns:
            QuadResult of the finest level

        Raises:
            QuadratureNonConvergence: max_levels reached; ``best`` holds the last estimate
        """
        a, b, tol = mpf(a), mpf(b), mpf(tol)
        floor = tolerance(5)
        if tol < floor:
            raise ContractViolation(ERROR_QUADRATURE_TOL.format(tol=mp.nstr(tol, 5), floor=mp.nstr(floor, 5)))
        if a == b:
            return QuadResult(mpf(0), mpf(0), 0, 0)
        if a > b:
            result = self.integrate(f, b, a, tol)
            return QuadResult(-result.value, result.error_estimate, result.evaluations, result.levels)

        width = b - a
        pairs, evaluations = self._pair_sum(f, a, width, level_nodes(0))
        estimate = width * (mp.pi / 4 * f(a + width / 2) + pairs)
        evaluations += 1
        error = None
        for level in range(1, self.max_levels + 1):
            pairs, count = self._pair_sum(f, a, width, level_nodes(level))
            evaluations += count
            h = mpf(2) ** (-level)
            refined = estimate / 2 + h * width * pairs
            error = abs(refined - estimate)
            estimate = refined
            logger.debug("tanh-sinh level %d: error %s", level, mp.nstr(error, 3))
            if level >= self.min_levels and error <= tol:
                return QuadResult(estimate, error, evaluations, level)
        best = QuadResult(estimate, error, evaluations, self.max_levels)
        raise QuadratureNonConvergence(
            ERROR_QUADRATURE_DIVERGED.format(levels=self.max_levels, error=mp.nstr(error, 5)),
            best=best,
        )


def integrate_finite(f, a, b, tol, max_levels=QUAD_MAX_LEVELS):
    """Integral of f over [a, b] by tanh-sinh refinement."""
    return TanhSinhQuadrature(max_levels=max_levels).integrate(f, a, b, tol)


def integrate_semi_infinite(f, tol, max_levels=QUAD_MAX_LEVELS):
    """
    Integral of f over (0, inf) for integrands decaying like poly(u) e^-u

    Mapped to (0, 1] by u = -ln t, so the integrand becomes f(-ln t) / t.
    """
    def mapped(t):
        return f(-mp.log(t)) / t

    return TanhSinhQuadrature(max_levels=max_levels).integrate(mapped, 0, 1, tol)
