"""
Thresholds of the entropy parameters: x0 (root of h(x) = 1 - x zeta'(x)),
x1 (root of zeta(x) = 2), the sigma limit, the admissibility functional R,
and the inequality audit.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from config import LabSettings, resolve
from errors import ParameterWindowError, RootFindingError
from graph_core import Graph, require_valid
from line_graph import line_graph_degree_sum, trace_powers
from utils import NumericUtils
from zeta_engine import ZetaProfile, growth_at_radius, perron_root, zeta_profile

logger = logging.getLogger(__name__)

STRICT = "strict"
RELAXED = "relaxed"
MODES = (STRICT, RELAXED)


def _check_mode(mode: str) -> None:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")


def _solve_below_radius(profile: ZetaProfile, func: Callable[[float], float], name: str,
                        lab: LabSettings) -> float:
    """
    Bisection on [0, (1 - eps)/lambda] for a function positive at 0 that
    eventually turns negative below the radius; eps shrinks until it does.
    """
    low, _ = profile.polynomial.radius_bracket
    tried = []
    for exponent in range(2, 16):
        hi = float(low * (1 - Fraction(1, 10 ** exponent)))
        f_hi = func(hi)
        tried.append((hi, f_hi))
        if f_hi < 0:
            break
    else:
        raise RootFindingError(f"no sign change found for {name} below the radius",
                               {"radius": profile.radius, "tried": tried})

    root, residual, iterations = NumericUtils.bisect(
        func, 0.0, hi, xtol=lab.root_tol, ftol=lab.certificate_tol)
    if abs(residual) > lab.certificate_tol:
        raise RootFindingError(f"{name} residual {residual!r} exceeds {lab.certificate_tol}",
                               {"root": root, "iterations": iterations})
    logger.debug(f"Solved {name} = {root!r} in {iterations} iterations (residual {residual!r})")
    return root


def h_samples(g: Graph, points: int, fraction: float = 0.95) -> List[float]:
    profile = zeta_profile(g)
    return [profile.h(float(x)) for x in np.linspace(0.0, fraction * profile.radius, points)]


def h_is_decreasing(g: Graph, points: int) -> bool:
    values = h_samples(g, points)
    return all(b <= a for a, b in zip(values, values[1:]))


def solve_x0(g: Graph, custom_settings: Optional[LabSettings] = None) -> float:
    """
    Root of h(x) = 1 - x zeta'(x) in (0, 1/lambda).

    h(0) = 1 and h decreases to minus infinity at the radius, so the root
    is unique; the decrease is checked on a sample grid first.
    """
    lab = resolve(custom_settings)
    require_valid(g)
    if not h_is_decreasing(g, lab.sample_points):
        raise RootFindingError("h is not monotone decreasing on the sample grid",
                               {"points": lab.sample_points})
    return _solve_below_radius(zeta_profile(g), zeta_profile(g).h, "x0", lab)


def solve_x1(g: Graph, custom_settings: Optional[LabSettings] = None) -> float:
    """Root of zeta(x) = 2 in (0, 1/lambda); not restricted to (0, 1/(2m lambda))"""
    lab = resolve(custom_settings)
    require_valid(g)
    profile = zeta_profile(g)
    return _solve_below_radius(profile, lambda x: 2.0 - profile.zeta(x), "x1", lab)


def check_a(a: float, x0: float, x1: float, mode: str) -> None:
    _check_mode(mode)
    if mode == STRICT:
        if x1 >= x0:
            raise ParameterWindowError(
                f"strict window (x1, x0) is empty: x1 = {x1!r} >= x0 = {x0!r}")
        if not x1 < a < x0:
            raise ParameterWindowError(f"a = {a!r} is outside the strict window ({x1!r}, {x0!r})")
    elif not 0 < a < x0:
        raise ParameterWindowError(f"a = {a!r} is outside the relaxed window (0, {x0!r})")


def sigma_limit_at(profile: ZetaProfile, a: float) -> float:
    """min(1, (1 - a z'(a)) / (a^2 z''(a) + a z'(a) - 1)); 1 when the denominator is <= 0"""
    _, first, second = profile.derivatives(a)
    numerator = 1.0 - a * first
    denominator = a * a * second + a * first - 1.0
    if denominator <= 0:
        return 1.0
    return min(1.0, numerator / denominator)


def sigma_limit(g: Graph, a: float, mode: str = RELAXED,
                custom_settings: Optional[LabSettings] = None) -> float:
    """
    Upper limit for sigma at a given a.

    Raises:
        ParameterWindowError: a outside the window of the active mode
    """
    x0 = solve_x0(g, custom_settings)
    x1 = solve_x1(g, custom_settings) if mode == STRICT else 0.0
    check_a(a, x0, x1, mode)
    return sigma_limit_at(zeta_profile(g), a)


def admissibility_R(g: Graph, a: float, sigma: float, x: float, mode: str = RELAXED,
                    enforce: bool = True, custom_settings: Optional[LabSettings] = None) -> float:
    """
    R = (1 - a z'(a x^s) - a^2 x^s s/(1+s) z''(a x^s)) / (1 - a z'(a)).

    With enforce=False a sigma at or beyond the limit is logged and R is
    still evaluated, so the boundary behaviour can be inspected.
    """
    if not 0 <= x <= 1:
        raise ParameterWindowError(f"x = {x!r} is outside [0, 1]")
    limit = sigma_limit(g, a, mode, custom_settings)
    if not 0 < sigma < limit:
        if enforce:
            raise ParameterWindowError(f"sigma = {sigma!r} is outside (0, {limit!r})")
        logger.warning(f"sigma = {sigma!r} is outside (0, {limit!r}); evaluating R anyway")

    profile = zeta_profile(g)
    x_sigma = x ** sigma
    _, first_inner, second_inner = profile.derivatives(a * x_sigma)
    _, first_a, _ = profile.derivatives(a)
    numerator = 1.0 - a * first_inner - a * a * x_sigma * sigma / (1 + sigma) * second_inner
    return numerator / (1.0 - a * first_a)


@dataclass(frozen=True)
class ParamWindow:
    lam: float
    radius: float
    x0: float
    x1: float
    inv_2m_lambda: float
    mode: str
    a_low: float
    a_high: float
    a_default: Optional[float]
    l_sigma: Optional[float]
    strict_window_nonempty: bool
    chain_holds: bool

    @property
    def sigma_default(self) -> Optional[float]:
        if self.l_sigma is None:
            return None
        return min(self.l_sigma, 1.0) / 2

    def to_dict(self) -> Dict:
        return {
            "lambda": self.lam,
            "radius": self.radius,
            "x0": self.x0,
            "x1": self.x1,
            "inv_2m_lambda": self.inv_2m_lambda,
            "mode": self.mode,
            "a_range": [self.a_low, self.a_high],
            "a_default": self.a_default,
            "l_sigma": self.l_sigma,
            "sigma_default": self.sigma_default,
            "strict_window_nonempty": self.strict_window_nonempty,
            "chain_holds": self.chain_holds,
        }


def parameter_window(g: Graph, mode: str = RELAXED,
                     custom_settings: Optional[LabSettings] = None) -> ParamWindow:
    """
    Assemble lambda, x0, x1 and the a-window for a mode.

    An empty strict window is reported through strict_window_nonempty with
    no default a or sigma limit; callers decide whether that is fatal.
    """
    _check_mode(mode)
    profile = zeta_profile(g)
    x0 = solve_x0(g, custom_settings)
    x1 = solve_x1(g, custom_settings)
    lam = profile.lam
    inv_2m_lambda = 1.0 / (2 * g.m * lam)
    strict_nonempty = x1 < x0
    chain = 0 < x1 < inv_2m_lambda < x0 < profile.radius < 1

    if mode == STRICT:
        a_low, a_high = x1, x0
        a_default = (x0 + x1) / 2 if strict_nonempty else None
    else:
        a_low, a_high = 0.0, x0
        a_default = x0 / 2
    l_sigma = sigma_limit_at(profile, a_default) if a_default is not None else None

    window = ParamWindow(
        lam=lam, radius=profile.radius, x0=x0, x1=x1, inv_2m_lambda=inv_2m_lambda,
        mode=mode, a_low=a_low, a_high=a_high, a_default=a_default, l_sigma=l_sigma,
        strict_window_nonempty=strict_nonempty, chain_holds=chain,
    )
    logger.info(f"Parameter window ({mode}): x0={x0!r}, x1={x1!r}, l_sigma={l_sigma!r}")
    return window


@dataclass(frozen=True)
class AuditEntry:
    claim_id: str
    statement: str
    lhs: float
    rhs: float
    holds: bool
    note: str = ""
    paper_location: str = ""


# Location of each claim; even-trace ids carry a _k suffix
CLAIM_LOCATIONS = {
    "lambda_lower_bound": "Lemma 2",
    "lambda_upper_bound": "Lemma 2",
    "zeta_upper_bound_at_inverse_2m_lambda": "Lemma 6",
    "f_monotone_decreasing": "Lemma 7",
    "trace_sum_at_inverse_2m_lambda": "Lemma 8",
    "h_positive_at_inverse_2m_lambda": "Lemma 9",
    "zeta_above_two_at_inverse_2m_lambda": "Lemma 10",
    "ordering_chain": "Eq. (13)",
    "x1_below_inverse_2m_lambda": "Eq. (13)",
    "inverse_2m_lambda_below_x0": "Eq. (13)",
    "strict_window_nonempty": "Theorem (x1), Eq. (13)",
    "even_trace_at_least_lambda_power": "Lemma 3 (proof)",
    "hashimoto_symmetric": "Section 2",
    "line_graph_edge_count": "Lemma 1",
    "hashimoto_irreducible": "Lemma 2 (proof)",
    "h_monotone_decreasing": "Lemma 5 (proof)",
    "zeta_grows_at_radius": "Lemma 3",
}


def claim_location(claim_id: str) -> str:
    base = claim_id.rsplit("_k", 1)[0] if claim_id.startswith("even_trace") else claim_id
    return CLAIM_LOCATIONS[base]


@dataclass(frozen=True)
class AuditReport:
    n: int
    m: int
    entries: Tuple[AuditEntry, ...] = field(default=())

    def failed(self) -> List[str]:
        return [entry.claim_id for entry in self.entries if not entry.holds]


def power_ratio_f(x: float) -> float:
    """x^x / (e (x-1)^(x+1)) evaluated through logs"""
    return math.exp(x * math.log(x) - 1.0 - (x + 1) * math.log(x - 1))


def trace_sum_truncation(m: int, tolerance: float) -> int:
    """Smallest K >= 2 with 2m / ((2m)^K (2m-1)) below tolerance"""
    K = 2
    while 2 * m / ((2 * m) ** K * (2 * m - 1)) >= tolerance:
        K += 1
    return K


class InequalityAuditor:
    """Measures each claimed inequality about lambda, x0 and x1 on one graph"""

    def __init__(self, custom_settings: Optional[LabSettings] = None):
        self.settings = resolve(custom_settings)
        self.even_powers = (2, 4, 6, 8)
        self.monotone_points = (2.0, 3.0, 4.0, 6.0, 8.0, 12.0, 16.0, 24.0, 32.0)

    def audit(self, g: Graph) -> AuditReport:
        require_valid(g)
        profile = zeta_profile(g)
        spectral = perron_root(g, self.settings)
        window = parameter_window(g, RELAXED, self.settings)
        star = window.inv_2m_lambda

        entries: List[AuditEntry] = []
        entries.extend(self._lambda_bounds(g, spectral))
        entries.append(self._zeta_upper_bound(g, profile, star))
        entries.append(self._f_monotone(g))
        entries.append(self._trace_sum(g, profile))
        entries.append(AuditEntry(
            "h_positive_at_inverse_2m_lambda", "h(1/(2m lambda)) > 0",
            profile.h(star), 0.0, profile.h(star) > 0))
        entries.append(AuditEntry(
            "zeta_above_two_at_inverse_2m_lambda", "zeta(1/(2m lambda)) > 2",
            profile.zeta(star), 2.0, profile.zeta(star) > 2,
            "conflicts with the upper bound on zeta(1/(2m lambda)), which is below 2 for m >= 2"))
        entries.extend(self._chain(window))
        entries.extend(self._even_traces(profile, spectral.lam))
        entries.extend(self._line_graph_checks(g, profile))
        entries.append(self._h_monotone(g))
        entries.append(self._growth(g))

        entries = [replace(entry, paper_location=claim_location(entry.claim_id)) for entry in entries]
        report = AuditReport(g.n, g.m, tuple(entries))
        logger.info(f"Audit finished: {len(entries)} claims, {len(report.failed())} fail")
        return report

    def _lambda_bounds(self, g, spectral) -> List[AuditEntry]:
        return [
            AuditEntry("lambda_lower_bound", "2(d-2)/m <= lambda",
                       spectral.lower_bound, spectral.lam, spectral.lower_bound <= spectral.lam),
            AuditEntry("lambda_upper_bound", "lambda <= D-2",
                       spectral.lam, spectral.upper_bound, spectral.lam <= spectral.upper_bound,
                       f"power iteration {spectral.power_estimate!r}, "
                       f"polynomial root {spectral.root_estimate!r}"),
        ]

    def _zeta_upper_bound(self, g, profile, star) -> AuditEntry:
        two_m = 2 * g.m
        bound = math.exp(two_m * math.log(two_m / (two_m - 1)) - 1.0)
        value = profile.zeta(star)
        return AuditEntry("zeta_upper_bound_at_inverse_2m_lambda",
                          "zeta(1/(2m lambda)) <= (2m)^(2m) / (e (2m-1)^(2m))",
                          value, bound, value <= bound)

    def _f_monotone(self, g) -> AuditEntry:
        points = sorted(set(self.monotone_points) | {float(2 * g.m)})
        values = [power_ratio_f(x) for x in points]
        steps = [b - a for a, b in zip(values, values[1:])]
        largest = max(steps)
        return AuditEntry("f_monotone_decreasing",
                          "f(x) = x^x / (e (x-1)^(x+1)) decreases for x > 1",
                          largest, 0.0, largest < 0,
                          f"f(2m) = {power_ratio_f(2 * g.m)!r}")

    def _trace_sum(self, g, profile) -> AuditEntry:
        two_m = 2 * g.m
        K = trace_sum_truncation(g.m, self.settings.trace_bound_tol)
        traces = trace_powers(profile.hashimoto, K)
        scale = two_m * profile.lam
        partial = NumericUtils.exact_sum(traces[k - 1] / scale ** k for k in range(2, K + 1))
        tail = two_m / (two_m ** K * (two_m - 1))
        value = partial + tail
        bound = 1.0 / (two_m - 1)
        return AuditEntry("trace_sum_at_inverse_2m_lambda",
                          "sum_{k>=2} tr(T^k) / (2m lambda)^k <= 1/(2m-1)",
                          value, bound, value <= bound,
                          f"truncated at K = {K}, tail bound {tail!r} included")

    def _chain(self, window: ParamWindow) -> List[AuditEntry]:
        values = (f"x1 = {window.x1!r}, 1/(2m lambda) = {window.inv_2m_lambda!r}, "
                  f"x0 = {window.x0!r}, 1/lambda = {window.radius!r}")
        return [
            AuditEntry("ordering_chain", "0 < x1 < 1/(2m lambda) < x0 < 1/lambda < 1",
                       window.x1, window.x0, window.chain_holds, values),
            AuditEntry("x1_below_inverse_2m_lambda", "x1 < 1/(2m lambda)",
                       window.x1, window.inv_2m_lambda, window.x1 < window.inv_2m_lambda),
            AuditEntry("inverse_2m_lambda_below_x0", "1/(2m lambda) < x0",
                       window.inv_2m_lambda, window.x0, window.inv_2m_lambda < window.x0),
            AuditEntry("strict_window_nonempty", "x1 < x0",
                       window.x1, window.x0, window.strict_window_nonempty,
                       "x zeta'(x) >= 2 zeta(x) log zeta(x) forces x0 < x1"),
        ]

    def _even_traces(self, profile, lam) -> List[AuditEntry]:
        traces = trace_powers(profile.hashimoto, max(self.even_powers))
        entries = []
        for k in self.even_powers:
            lhs, rhs = traces[k - 1], lam ** k
            entries.append(AuditEntry(f"even_trace_at_least_lambda_power_k{k}",
                                      f"tr(T^{k}) >= lambda^{k}",
                                      float(lhs), rhs, lhs >= rhs))
        return entries

    def _line_graph_checks(self, g, profile) -> List[AuditEntry]:
        T = profile.hashimoto
        asymmetric = int(np.count_nonzero(T.entries != T.entries.T))
        count = line_graph_degree_sum(g)
        return [
            AuditEntry("hashimoto_symmetric", "T is a symmetric matrix",
                       float(asymmetric), 0.0, T.is_symmetric(),
                       "lhs counts entries with T[e,f] != T[f,e]; the directed T is used throughout"),
            AuditEntry("line_graph_edge_count", "degree sum of the oriented line graph = 2 sum (d_u + d_v - 2)",
                       float(count), float(T.degree_sum()), count == T.degree_sum(),
                       f"arc count {T.arc_count()}"),
            AuditEntry("hashimoto_irreducible", "T is irreducible",
                       1.0 if T.is_irreducible() else 0.0, 1.0, T.is_irreducible()),
        ]

    def _h_monotone(self, g) -> AuditEntry:
        values = h_samples(g, self.settings.sample_points)
        largest = max(b - a for a, b in zip(values, values[1:]))
        return AuditEntry("h_monotone_decreasing", "h(x) = 1 - x zeta'(x) decreases on [0, 1/lambda)",
                          largest, 0.0, largest <= 0,
                          f"{self.settings.sample_points} samples on [0, 0.95/lambda]")

    def _growth(self, g) -> AuditEntry:
        values = growth_at_radius(g)
        increasing = all(b[1] > a[1] for a, b in zip(values, values[1:]))
        return AuditEntry("zeta_grows_at_radius", "zeta((1 - 10^-k)/lambda) increases without bound",
                          values[-1][1], values[0][1], increasing,
                          ", ".join(f"k={k}: {v!r}" for k, v in values))


def audit_inequalities(g: Graph, custom_settings: Optional[LabSettings] = None) -> AuditReport:
    return InequalityAuditor(custom_settings).audit(g)
