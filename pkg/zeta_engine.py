"""
The zeta function of a graph by three routes: the determinant formula
(exact integer polynomial Q with zeta = 1/Q), the exponential of the trace
series, and real evaluation of zeta and its first two derivatives.
Also the Perron root lambda of the Hashimoto matrix.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import sympy
from sympy import ZZ
from sympy.polys.matrices import DomainMatrix

from config import LabSettings, resolve
from errors import DomainError, RootFindingError, SeriesError, SpectralMismatchError
from graph_core import Graph, degree_stats, require_valid
from line_graph import HashimotoMatrix, hashimoto_for, trace_powers
from series_engine import TruncatedSeries, series_exp
from utils import NumericUtils

logger = logging.getLogger(__name__)

Real = Union[float, int, Fraction]

# Degree-10 factor of the billiard-table reciprocal zeta, lowest degree first;
# the full polynomial is (1 - x^2)^3 times this.
BILLIARD_FACTOR_COEFFICIENTS = (1, 0, 3, -8, -4, -32, -8, -32, 32, 0, 48)
BILLIARD_FACTOR_EXPONENT = 3

_X = sympy.Symbol("x")


def _integer_coefficients(poly: sympy.Poly) -> Tuple[int, ...]:
    """Lowest degree first; raises if any coefficient is not an integer"""
    coeffs = []
    for c in reversed(poly.all_coeffs()):
        c = sympy.Rational(c)
        if c.q != 1:
            raise ArithmeticError(f"non-integer coefficient {c} in determinant polynomial")
        coeffs.append(int(c.p))
    return tuple(coeffs)


def expand_with_exponent(factor: Sequence[int], exponent: int) -> Tuple[int, ...]:
    """Coefficients of (1 - x^2)^exponent * factor(x), lowest degree first"""
    factor_poly = sympy.Poly(list(reversed(factor)), _X)
    full = factor_poly * sympy.Poly(1 - _X ** 2, _X) ** exponent
    return _integer_coefficients(full)


@dataclass(frozen=True)
class ReciprocalZetaPolynomial:
    """
    Q(x) = (1 - x^2)^(m-n) * det(I - A x + (D - I) x^2), with zeta = 1/Q.

    coefficients are exact integers, lowest degree first.
    """

    coefficients: Tuple[int, ...]
    det_coefficients: Tuple[int, ...]
    exponent: int

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def derivative_coefficients(self, order: int = 1) -> Tuple[int, ...]:
        coeffs = list(self.coefficients)
        for _ in range(order):
            coeffs = [k * coeffs[k] for k in range(1, len(coeffs))] or [0]
        return tuple(coeffs)

    @staticmethod
    def _horner_exact(coeffs: Sequence[int], x: Fraction) -> Fraction:
        # Integer Horner on numerator/denominator, one division at the end
        p, q = x.numerator, x.denominator
        d = len(coeffs) - 1
        total = 0
        p_power = 1
        q_powers = [1] * (d + 1)
        for k in range(1, d + 1):
            q_powers[k] = q_powers[k - 1] * q
        for k, c in enumerate(coeffs):
            if c:
                total += c * p_power * q_powers[d - k]
            p_power *= p
        return Fraction(total, q_powers[d])

    def value_exact(self, x: Real, derivative: int = 0) -> Fraction:
        x = NumericUtils.to_fraction(x)
        return self._horner_exact(self.derivative_coefficients(derivative), x)

    def value(self, x: Real, derivative: int = 0) -> float:
        """Exact evaluation at the binary value of x, rounded once"""
        return float(self.value_exact(x, derivative))

    @cached_property
    def radius(self) -> float:
        """Smallest positive real root of Q (the radius 1/lambda)"""
        return float(self.radius_bracket[0] + self.radius_bracket[1]) / 2

    @cached_property
    def radius_bracket(self) -> Tuple[Fraction, Fraction]:
        # roots of (1 - x^2)^(m-n) sit at +-1 and 1/lambda < 1
        poly = sympy.Poly(list(reversed(self.det_coefficients)), _X)
        intervals = poly.intervals(inf=0, eps=sympy.Rational(1, 2 ** 20))
        positive = [
            (Fraction(int(lo.p), int(lo.q)), Fraction(int(hi.p), int(hi.q)))
            for (lo, hi), _ in intervals
            if hi > 0
        ]
        if not positive:
            raise RootFindingError("reciprocal zeta polynomial has no positive real root",
                                   {"coefficients": list(self.coefficients)})
        lo, hi = min(positive)
        if lo == hi:
            return lo, hi
        return self._refine(lo, hi)

    def _refine(self, lo: Fraction, hi: Fraction) -> Tuple[Fraction, Fraction]:
        # Exact-sign bisection down to far below the float spacing at the root
        f_lo = self._horner_exact(self.det_coefficients, lo)
        width = Fraction(1, 2 ** 70)
        while hi - lo > width:
            mid = (lo + hi) / 2
            f_mid = self._horner_exact(self.det_coefficients, mid)
            if f_mid == 0:
                return mid, mid
            if (f_mid > 0) == (f_lo > 0):
                lo, f_lo = mid, f_mid
            else:
                hi = mid
        return lo, hi

    def expansion(self, order: int) -> TruncatedSeries:
        """Power series of 1/Q to the given order (exact long division)"""
        return TruncatedSeries.from_coefficients(self.coefficients, order).reciprocal()

    def factored(self) -> Dict:
        return {"exponent": self.exponent, "factor": list(self.det_coefficients)}

    def to_dict(self) -> Dict:
        return {
            "coefficients": list(self.coefficients),
            "degree": self.degree,
            "factored": self.factored(),
        }


@dataclass(frozen=True)
class SpectralData:
    lam: float
    lower_bound: float
    upper_bound: float
    radius: float
    power_estimate: float
    root_estimate: float
    iterations: int

    @property
    def bounds_hold(self) -> bool:
        return self.lower_bound <= self.lam <= self.upper_bound

    def to_dict(self) -> Dict:
        return {
            "lambda": self.lam,
            "lower_bound": self.lower_bound,
            "upper_bound": self.upper_bound,
            "radius": self.radius,
            "power_estimate": self.power_estimate,
            "root_estimate": self.root_estimate,
            "iterations": self.iterations,
            "bounds_hold": self.bounds_hold,
        }


def _ihara_matrix(g: Graph) -> DomainMatrix:
    """I - A x + (D - I) x^2 as a matrix over ZZ[x]"""
    ring = ZZ[_X]
    x = ring.from_sympy(_X)
    adjacency = g.adjacency_matrix()
    rows = []
    for i, v in enumerate(g.vertices):
        row = [ring.convert(-adjacency[i][j]) * x for j in range(g.n)]
        row[i] += ring.one + ring.convert(g.degree[v] - 1) * x * x
        rows.append(row)
    return DomainMatrix(rows, (g.n, g.n), ring)


def reciprocal_poly(g: Graph) -> ReciprocalZetaPolynomial:
    """
    Build Q from the fraction-free determinant of I - A x + (D - I) x^2
    taken directly over ZZ[x].
    """
    require_valid(g)
    matrix = _ihara_matrix(g)
    det_poly = sympy.Poly(matrix.domain.to_sympy(matrix.det()), _X)
    det_coefficients = _integer_coefficients(det_poly)
    exponent = g.m - g.n
    coefficients = expand_with_exponent(det_coefficients, exponent)
    if coefficients[0] != 1:
        raise ArithmeticError(f"constant term of Q is {coefficients[0]}, expected 1")
    logger.debug(f"Reciprocal zeta polynomial of degree {len(coefficients) - 1}")
    return ReciprocalZetaPolynomial(coefficients, det_coefficients, exponent)


def trace_series(traces: Sequence[int], order: int) -> TruncatedSeries:
    """sum_k tr(T^k)/k x^k up to the given order"""
    coeffs = [Fraction(0)] + [Fraction(traces[k - 1], k) for k in range(1, order + 1)]
    return TruncatedSeries(tuple(coeffs))


def zeta_series(g: Graph, order: int) -> TruncatedSeries:
    """exp of the trace series; the coefficients count and must be integers"""
    if order < 2:
        raise SeriesError(f"zeta series order must be at least 2, got {order}")
    require_valid(g)
    traces = trace_powers(hashimoto_for(g), order)
    series = series_exp(trace_series(traces, order))
    if not series.is_integral():
        raise ArithmeticError(f"zeta series has non-integer coefficients: {series}")
    return series


def perron_root(g: Graph, custom_settings: Optional[LabSettings] = None) -> SpectralData:
    """
    Perron root of T by power iteration on T + I and by the smallest
    positive root of Q; both must agree within the relative tolerance.

    Raises:
        SpectralMismatchError: the two routes disagree
    """
    lab = resolve(custom_settings)
    require_valid(g)
    profile = zeta_profile(g)
    T = profile.hashimoto
    shifted = T.entries.astype(float) + np.eye(T.size)

    vector = np.ones(T.size)
    previous = None
    rayleigh = 0.0
    iterations = 0
    for iterations in range(1, lab.power_iter_max + 1):
        image = shifted @ vector
        rayleigh = float(vector @ image) / float(vector @ vector)
        ratios = image / vector
        low, high = float(ratios.min()), float(ratios.max())
        vector = image / np.linalg.norm(image)
        drift_ok = previous is not None and abs(rayleigh - previous) <= lab.power_iter_drift * abs(rayleigh)
        # min/max of the componentwise ratio bracket the Perron root of T + I
        bracket_ok = high - low <= lab.lambda_rel_tol * high / 10
        if drift_ok and bracket_ok:
            break
        previous = rayleigh
    else:
        logger.warning(f"Power iteration hit the iteration cap {lab.power_iter_max}")

    power_estimate = rayleigh - 1.0
    q = profile.polynomial
    root_estimate = 1.0 / q.radius

    if abs(power_estimate - root_estimate) > lab.lambda_rel_tol * abs(root_estimate):
        raise SpectralMismatchError(power_estimate, root_estimate, lab.lambda_rel_tol)

    stats = degree_stats(g)
    spectral = SpectralData(
        lam=root_estimate,
        lower_bound=2 * (stats.d - 2) / g.m,
        upper_bound=float(stats.D - 2),
        radius=q.radius,
        power_estimate=power_estimate,
        root_estimate=root_estimate,
        iterations=iterations,
    )
    logger.debug(f"Perron root {spectral.lam!r} after {iterations} iterations")
    return spectral


def _check_domain(q: ReciprocalZetaPolynomial, x: Real) -> None:
    if x < 0 or x >= q.radius or NumericUtils.to_fraction(x) >= q.radius_bracket[0]:
        raise DomainError(f"x = {x!r} is outside [0, 1/lambda) = [0, {q.radius!r})")


def zeta_eval_exact(q: ReciprocalZetaPolynomial, x: Real) -> Fraction:
    _check_domain(q, x)
    return 1 / q.value_exact(x)


def zeta_eval(q: ReciprocalZetaPolynomial, x: Real) -> float:
    """1/Q(x) with Q evaluated exactly and rounded once"""
    return float(zeta_eval_exact(q, x))


def zeta_derivatives(q: ReciprocalZetaPolynomial, x: Real) -> Tuple[float, float, float]:
    """(zeta, zeta', zeta'') at x from exact Q, Q', Q''"""
    _check_domain(q, x)
    q0 = q.value_exact(x)
    q1 = q.value_exact(x, 1)
    q2 = q.value_exact(x, 2)
    zeta = 1 / q0
    first = -q1 / q0 ** 2
    second = (2 * q1 * q1 - q0 * q2) / q0 ** 3
    return float(zeta), float(first), float(second)


@dataclass(frozen=True)
class ZetaProfile:
    """Everything numeric code needs about one graph"""

    graph: Graph
    polynomial: ReciprocalZetaPolynomial
    hashimoto: HashimotoMatrix

    @property
    def radius(self) -> float:
        return self.polynomial.radius

    @property
    def lam(self) -> float:
        return 1.0 / self.polynomial.radius

    def zeta(self, x: Real) -> float:
        return zeta_eval(self.polynomial, x)

    def derivatives(self, x: Real) -> Tuple[float, float, float]:
        return zeta_derivatives(self.polynomial, x)

    def h(self, x: Real) -> float:
        """1 - x zeta'(x)"""
        return 1.0 - float(x) * self.derivatives(x)[1]


@lru_cache(maxsize=64)
def zeta_profile(g: Graph) -> ZetaProfile:
    return ZetaProfile(g, reciprocal_poly(g), hashimoto_for(g))


def log_zeta_partial_sum(g: Graph, x: float, K: int) -> Tuple[float, float]:
    """
    Truncated log zeta(x) = sum_{k<=K} tr(T^k) x^k / k with a tail bound.

    |tr(T^k)| <= 2m lambda^k bounds the tail by 2m (x lambda)^(K+1) / ((K+1)(1 - x lambda)).

    Returns:
        (partial sum, tail bound)
    """
    profile = zeta_profile(g)
    ratio = x * profile.lam
    if not 0 <= ratio < 1:
        raise DomainError(f"x = {x!r} is outside [0, 1/lambda)")
    traces = trace_powers(profile.hashimoto, K)
    partial = NumericUtils.exact_sum(traces[k - 1] * x ** k / k for k in range(1, K + 1))
    tail = 2 * g.m * ratio ** (K + 1) / ((K + 1) * (1 - ratio))
    return partial, tail


def sample_grid(g: Graph, points: int, fraction: float = 0.95) -> List[Tuple[float, float, float, float]]:
    """(x, zeta, zeta', h) rows on an evenly spaced grid of [0, fraction/lambda]"""
    profile = zeta_profile(g)
    rows = []
    for x in np.linspace(0.0, fraction * profile.radius, points):
        x = float(x)
        zeta, first, _ = profile.derivatives(x)
        rows.append((x, zeta, first, 1.0 - x * first))
    return rows


def growth_at_radius(g: Graph, exponents: Sequence[int] = (1, 2, 3, 4, 5, 6)) -> List[Tuple[int, float]]:
    """zeta((1 - 10^-k)/lambda) for increasing k"""
    profile = zeta_profile(g)
    low, _ = profile.polynomial.radius_bracket
    return [(k, zeta_eval(profile.polynomial, low * (1 - Fraction(1, 10 ** k)))) for k in exponents]
