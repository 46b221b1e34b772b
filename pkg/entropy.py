"""
Ihara entropy of discrete distributions.

Per-event term, for p in [0, 1]:

    s(p) = p [zeta(a p^s) - p^s + 1 - zeta(a)] / (s (1 - a zeta'(a)))

with the entropy the sum of s over the distribution. The generator series
G(t) = s(e^-t) e^t and its formal group law live here too.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence

import mpmath
import numpy as np
from scipy import stats

from config import LabSettings, resolve
from errors import DistributionError, ParameterWindowError, RootFindingError
from graph_core import Graph
from param_solver import RELAXED, ParamWindow, check_a, parameter_window, sigma_limit_at
from series_engine import (
    BivariateTruncatedSeries,
    MultivariateTruncatedSeries,
    TruncatedSeries,
    compose_univariate,
    series_exp,
    series_polyval,
    series_revert,
    univariate_in,
)
from utils import NumericUtils
from zeta_engine import ZetaProfile, zeta_eval_exact, zeta_profile

logger = logging.getLogger(__name__)

DISTRIBUTION_TOLERANCE = 1e-9
FD_STEP = 1e-5


@dataclass(frozen=True)
class ProbabilityDistribution:
    probabilities: tuple

    def __post_init__(self):
        if not self.probabilities:
            raise DistributionError("distribution has no events")
        for p in self.probabilities:
            if not math.isfinite(p) or p < 0 or p > 1:
                raise DistributionError(f"probability {p!r} is outside [0, 1]")
        total = math.fsum(self.probabilities)
        if abs(total - 1.0) > DISTRIBUTION_TOLERANCE:
            raise DistributionError(f"probabilities sum to {total!r}, not 1")

    @property
    def W(self) -> int:
        return len(self.probabilities)

    @classmethod
    def normalized(cls, weights: Sequence[float]) -> "ProbabilityDistribution":
        """Rescale non-negative weights to sum to one"""
        weights = [float(w) for w in weights]
        if any(not math.isfinite(w) or w < 0 for w in weights):
            raise DistributionError("weights must be finite and non-negative")
        total = math.fsum(weights)
        if total <= 0:
            raise DistributionError("weights sum to zero")
        return cls(tuple(w / total for w in weights))

    @classmethod
    def uniform(cls, W: int) -> "ProbabilityDistribution":
        return cls(tuple([1.0 / W] * W))


def parse_distribution(text: str, normalize: bool = False) -> ProbabilityDistribution:
    """Whitespace-separated decimal probabilities"""
    try:
        values = [float(token) for token in text.split()]
    except ValueError as e:
        raise DistributionError(f"cannot parse distribution: {e}")
    if normalize:
        return ProbabilityDistribution.normalized(values)
    return ProbabilityDistribution(tuple(values))


def load_distribution(path: str, normalize: bool = False) -> ProbabilityDistribution:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_distribution(handle.read(), normalize)


@dataclass(frozen=True)
class EntropyParams:
    a: float
    sigma: float
    mode: str
    l_sigma: float
    window: ParamWindow

    def to_dict(self) -> Dict:
        return {"a": self.a, "sigma": self.sigma, "mode": self.mode, "l_sigma": self.l_sigma}


def _check_sigma(sigma: float, limit: float) -> None:
    if not 0 < sigma < limit:
        raise ParameterWindowError(f"sigma = {sigma!r} is outside (0, {limit!r})")


def check_window(g: Graph, a: float, sigma: float, mode: str = RELAXED,
                 custom_settings: Optional[LabSettings] = None) -> ParamWindow:
    """Raise ParameterWindowError unless a and sigma lie in the window of the mode"""
    window = parameter_window(g, mode, custom_settings)
    check_a(a, window.x0, window.x1, mode)
    _check_sigma(sigma, sigma_limit_at(zeta_profile(g), a))
    return window


def make_params(g: Graph, a: Optional[float] = None, sigma: Optional[float] = None,
                mode: str = RELAXED, custom_settings: Optional[LabSettings] = None) -> EntropyParams:
    """
    Validate (a, sigma) against the window, filling defaults
    a = x0/2 (relaxed) and sigma = min(l_sigma, 1)/2.

    Raises:
        ParameterWindowError: a or sigma outside the admissible window
    """
    window = parameter_window(g, mode, custom_settings)
    if a is None:
        if window.a_default is None:
            raise ParameterWindowError(
                f"strict window is empty: x1 = {window.x1!r} >= x0 = {window.x0!r}")
        a = window.a_default
    check_a(a, window.x0, window.x1, mode)
    limit = sigma_limit_at(zeta_profile(g), a)
    if sigma is None:
        sigma = min(limit, 1.0) / 2
    _check_sigma(sigma, limit)
    return EntropyParams(a=a, sigma=sigma, mode=mode, l_sigma=limit, window=window)


def _denominator(profile: ZetaProfile, a: float, sigma: float) -> float:
    _, first, _ = profile.derivatives(a)
    return sigma * (1.0 - a * first)


def s_value(profile: ZetaProfile, a: float, sigma: float, p: float) -> float:
    if not 0 <= p <= 1:
        raise DistributionError(f"p = {p!r} is outside [0, 1]")
    if p == 0:
        return 0.0
    p_sigma = p ** sigma
    bracket = profile.zeta(a * p_sigma) - p_sigma + 1.0 - profile.zeta(a)
    return p * bracket / _denominator(profile, a, sigma)


def s_term(g: Graph, params: EntropyParams, p: float) -> float:
    return s_value(zeta_profile(g), params.a, params.sigma, p)


def s_prime(g: Graph, params: EntropyParams, p: float) -> float:
    """[a s p^s z'(a p^s) + z(a p^s) - (1+s) p^s - z(a) + 1] / (s (1 - a z'(a)))"""
    profile = zeta_profile(g)
    a, sigma = params.a, params.sigma
    p_sigma = p ** sigma
    zeta_inner, first_inner, _ = profile.derivatives(a * p_sigma)
    numerator = (a * sigma * p_sigma * first_inner + zeta_inner
                 - (1 + sigma) * p_sigma - profile.zeta(a) + 1.0)
    return numerator / _denominator(profile, a, sigma)


def s_double_prime(g: Graph, params: EntropyParams, p: float) -> float:
    """-(1+s) p^(s-1) R(p), with R the admissibility functional at x = p"""
    if not 0 < p <= 1:
        raise DistributionError(f"p = {p!r} is outside (0, 1]")
    profile = zeta_profile(g)
    a, sigma = params.a, params.sigma
    p_sigma = p ** sigma
    _, first_inner, second_inner = profile.derivatives(a * p_sigma)
    _, first_a, _ = profile.derivatives(a)
    R = (1.0 - a * first_inner - a * a * p_sigma * sigma / (1 + sigma) * second_inner) / (1.0 - a * first_a)
    return -(1 + sigma) * p ** (sigma - 1) * R


def s_double_prime_fd(g: Graph, params: EntropyParams, p: float, step: float = FD_STEP) -> float:
    """Central second difference of s"""
    step = min(step, p / 2, (1 - p) / 2)
    profile = zeta_profile(g)
    a, sigma = params.a, params.sigma
    return (s_value(profile, a, sigma, p + step) - 2 * s_value(profile, a, sigma, p)
            + s_value(profile, a, sigma, p - step)) / step ** 2


def s_term_high_precision(g: Graph, params: EntropyParams, p: float, dps: int = 50) -> float:
    """The same closed form in mpmath at dps digits, from the exact Q coefficients"""
    coefficients = list(reversed(zeta_profile(g).polynomial.coefficients))
    derivative = list(reversed(zeta_profile(g).polynomial.derivative_coefficients()))
    with mpmath.workdps(dps):
        a, sigma, p = mpmath.mpf(params.a), mpmath.mpf(params.sigma), mpmath.mpf(p)
        if p == 0:
            return 0.0
        zeta = lambda x: 1 / mpmath.polyval(coefficients, x)
        first_a = -mpmath.polyval(derivative, a) / mpmath.polyval(coefficients, a) ** 2
        p_sigma = p ** sigma
        value = p * (zeta(a * p_sigma) - p_sigma + 1 - zeta(a)) / (sigma * (1 - a * first_a))
        return float(value)


def ihara_entropy(g: Graph, params: EntropyParams, P: ProbabilityDistribution) -> float:
    """Sum of s(p_i), correctly rounded so order and zero events do not matter"""
    profile = zeta_profile(g)
    return NumericUtils.exact_sum(s_value(profile, params.a, params.sigma, p) for p in P.probabilities)


def ihara_generator(g: Graph, params: EntropyParams) -> Callable[[float], float]:
    """G(t) in closed form, so that s(p) = p G(log 1/p)"""
    profile = zeta_profile(g)
    a, sigma = params.a, params.sigma
    denominator = _denominator(profile, a, sigma)
    zeta_a = profile.zeta(a)

    def generator(t: float) -> float:
        decay = math.exp(-sigma * t)
        return (profile.zeta(a * decay) - decay + 1.0 - zeta_a) / denominator

    return generator


def formal_group_entropy(P: ProbabilityDistribution, generator: Callable[[float], float]) -> float:
    """
    sum p G(log 1/p) for a group exponential G; zero events contribute
    nothing. G(t) = t gives Shannon entropy, ihara_generator the Ihara one.
    """
    return NumericUtils.exact_sum(p * generator(-math.log(p)) for p in P.probabilities if p > 0)


def shannon_entropy(P: ProbabilityDistribution) -> float:
    """-sum p log p in nats"""
    return float(stats.entropy(np.asarray(P.probabilities, dtype=float)))


def shannon_limit_check(g: Graph, a: float, P: ProbabilityDistribution, sigmas: Sequence[float],
                        custom_settings: Optional[LabSettings] = None) -> List[float]:
    """|S(P; a, sigma) - H(P)| for each sigma"""
    profile = zeta_profile(g)
    window = parameter_window(g, RELAXED, custom_settings)
    check_a(a, window.x0, window.x1, RELAXED)
    limit = sigma_limit_at(profile, a)
    reference = shannon_entropy(P)
    deviations = []
    for sigma in sigmas:
        _check_sigma(sigma, limit)
        params = EntropyParams(a=a, sigma=sigma, mode=RELAXED, l_sigma=limit, window=window)
        deviations.append(abs(ihara_entropy(g, params, P) - reference))
    logger.debug(f"Shannon-limit deviations {deviations}")
    return deviations


def fit_rate_exponent(sigmas: Sequence[float], deviations: Sequence[float]) -> float:
    """Slope of log deviation against log sigma"""
    slope, _ = np.polyfit(np.log(np.asarray(sigmas)), np.log(np.asarray(deviations)), 1)
    return float(slope)


def find_max_p(g: Graph, params: EntropyParams,
               custom_settings: Optional[LabSettings] = None) -> float:
    """
    Interior maximiser of s: bisection on s' over [p_lo, 1].

    s'(1) = -1; p_lo shrinks toward 0 until s'(p_lo) > 0.

    Raises:
        RootFindingError: no sign change of s' or the point is not a maximum
    """
    lab = resolve(custom_settings)
    func = lambda p: s_prime(g, params, p)
    f_hi = func(1.0)
    lo, tried = None, []
    for exponent in range(1, 40):
        candidate = 10.0 ** (-exponent)
        value = func(candidate)
        tried.append((candidate, value))
        if value > 0:
            lo = candidate
            break
    if lo is None or f_hi >= 0:
        raise RootFindingError("s' has no interior sign change",
                               {"s_prime_at_1": f_hi, "tried": tried})

    c, residual, _ = NumericUtils.bisect(func, lo, 1.0, xtol=lab.root_tol, ftol=lab.certificate_tol)
    if abs(residual) > lab.certificate_tol:
        raise RootFindingError(f"s'({c!r}) = {residual!r} exceeds {lab.certificate_tol}")
    curvature = s_double_prime_fd(g, params, c)
    if curvature >= 0:
        raise RootFindingError(f"critical point {c!r} is not a maximum (s'' = {curvature!r})")
    return c


def _exact_parameters(a: float, sigma: float, lab: LabSettings):
    a = NumericUtils.to_fraction(a, lab.rational_max_denominator)
    sigma = NumericUtils.to_fraction(sigma, lab.rational_max_denominator)
    if sigma <= 0:
        raise ParameterWindowError(f"sigma = {sigma} must be positive")
    if a <= 0:
        raise ParameterWindowError(f"a = {a} must be positive")
    return a, sigma


def generator_series(g: Graph, a, sigma, order: int, mode: str = RELAXED,
                     custom_settings: Optional[LabSettings] = None) -> TruncatedSeries:
    """
    G(t) = [zeta(a e^(-s t)) - e^(-s t) + 1 - zeta(a)] / (s (1 - a zeta'(a)))
    to the given order, exactly, with zeta(a E) = 1/Q(a E).

    Raises:
        ParameterWindowError: a or sigma outside the window of the mode
    """
    if order < 2:
        raise ValueError(f"generator series order must be at least 2, got {order}")
    lab = resolve(custom_settings)
    a, sigma = _exact_parameters(a, sigma, lab)
    check_window(g, float(a), float(sigma), mode, lab)
    q = zeta_profile(g).polynomial
    zeta_a = zeta_eval_exact(q, a)
    first_a = -q.value_exact(a, 1) * zeta_a ** 2
    denominator = sigma * (1 - a * first_a)
    if denominator == 0:
        raise ParameterWindowError("1 - a zeta'(a) vanishes at this a")

    decay = series_exp(TruncatedSeries.from_coefficients([0, -sigma], order))
    zeta_composed = series_polyval(q.coefficients, decay.scale(a)).reciprocal()
    series = (zeta_composed - decay + (1 - zeta_a)).scale(1 / denominator)

    if series[0] != 0 or series[1] != 1:
        raise ArithmeticError(f"generator series starts {series[0]} + {series[1]} t")
    return series


def lazard_law(Gser: TruncatedSeries, order: int) -> BivariateTruncatedSeries:
    """Phi(s1, s2) = G(F(s1) + F(s2)) with F the compositional inverse of G"""
    Gser = Gser.truncate(min(order, Gser.order))
    F = series_revert(Gser)
    inner = univariate_in(F, 0, 2) + univariate_in(F, 1, 2)
    phi = compose_univariate(Gser, inner)
    return BivariateTruncatedSeries.from_dict(2, phi.order, phi.as_dict())


@dataclass(frozen=True)
class FormalGroupCheck:
    unit: bool
    commutative: bool
    associative: bool

    @property
    def passed(self) -> bool:
        return self.unit and self.commutative and self.associative


def formal_group_axioms(phi: MultivariateTruncatedSeries) -> FormalGroupCheck:
    """Unit, commutativity and associativity of a two-variable law to its order"""
    coeffs = phi.as_dict()
    unit = all(
        coeffs.get((i, 0), 0) == (1 if i == 1 else 0) and coeffs.get((0, i), 0) == (1 if i == 1 else 0)
        for i in range(phi.order + 1)
    )
    commutative = phi.permute([1, 0]) == phi

    s1, s2, s3 = (MultivariateTruncatedSeries.variable(i, 3, phi.order) for i in range(3))
    left = phi.substitute([phi.substitute([s1, s2]), s3])
    right = phi.substitute([s1, phi.substitute([s2, s3])])
    associative = left == right
    return FormalGroupCheck(unit, commutative, associative)
