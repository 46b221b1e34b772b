import math
import random
from fractions import Fraction

import pytest

from entropy import (
    FormalGroupCheck,
    ProbabilityDistribution,
    find_max_p,
    fit_rate_exponent,
    check_window,
    formal_group_axioms,
    formal_group_entropy,
    generator_series,
    ihara_entropy,
    ihara_generator,
    lazard_law,
    load_distribution,
    make_params,
    parse_distribution,
    s_double_prime,
    s_double_prime_fd,
    s_prime,
    s_term,
    s_term_high_precision,
    shannon_entropy,
    shannon_limit_check,
)
from errors import DistributionError, ParameterWindowError
from param_solver import STRICT
from series_engine import BivariateTruncatedSeries, TruncatedSeries, series_compose, series_exp, series_revert


@pytest.fixture
def k4_params(k4):
    return make_params(k4)


def test_parse_distribution():
    P = parse_distribution("0.5 0.25\n0.25\n")
    assert P.W == 3
    assert P.probabilities == (0.5, 0.25, 0.25)


def test_distribution_must_sum_to_one():
    with pytest.raises(DistributionError, match="sum"):
        parse_distribution("0.5 0.4")


def test_distribution_rejects_negative_and_garbage():
    with pytest.raises(DistributionError):
        parse_distribution("1.5 -0.5")
    with pytest.raises(DistributionError):
        parse_distribution("0.5 half")
    with pytest.raises(DistributionError):
        parse_distribution("")


def test_normalize_rescales():
    P = parse_distribution("2 1 1", normalize=True)
    assert P.probabilities == (0.5, 0.25, 0.25)


def test_load_distribution(tmp_path):
    path = tmp_path / "dist.txt"
    path.write_text("0.2 0.8\n", encoding="utf-8")
    assert load_distribution(str(path)).W == 2


def test_make_params_defaults(k4, k4_params):
    window = k4_params.window
    assert k4_params.a == pytest.approx(window.x0 / 2)
    assert k4_params.sigma == pytest.approx(min(k4_params.l_sigma, 1.0) / 2)
    assert k4_params.mode == "relaxed"


def test_make_params_rejects_bad_a_and_sigma(k4, k4_params):
    with pytest.raises(ParameterWindowError):
        make_params(k4, a=k4_params.window.x0 + 0.01)
    with pytest.raises(ParameterWindowError):
        make_params(k4, sigma=k4_params.l_sigma * 2)
    with pytest.raises(ParameterWindowError):
        make_params(k4, sigma=0.0)


def test_make_params_strict_empty_window(k4):
    with pytest.raises(ParameterWindowError, match="empty"):
        make_params(k4, mode=STRICT)


def test_term_vanishes_at_endpoints(k4, k4_params):
    assert s_term(k4, k4_params, 0.0) == 0.0
    assert s_term(k4, k4_params, 1.0) == pytest.approx(0.0, abs=1e-12)


def test_term_positive_inside(k4, k4_params):
    for p in (0.01, 0.2, 0.5, 0.9):
        assert s_term(k4, k4_params, p) > 0


def test_term_rejects_p_outside_unit_interval(k4, k4_params):
    with pytest.raises(DistributionError):
        s_term(k4, k4_params, 1.2)


def test_slope_at_one_is_minus_one(billiard):
    params = make_params(billiard)
    assert s_prime(billiard, params, 1.0) == pytest.approx(-1.0, rel=1e-12)


def test_closed_form_second_derivative_matches_differences(billiard):
    params = make_params(billiard)
    for p in (0.1, 0.3, 0.6, 0.9):
        closed = s_double_prime(billiard, params, p)
        assert closed < 0
        assert closed == pytest.approx(s_double_prime_fd(billiard, params, p), rel=1e-4)


def test_high_precision_agrees(billiard):
    params = make_params(billiard)
    for p in (0.05, 0.4, 0.8):
        assert s_term(billiard, params, p) == pytest.approx(s_term_high_precision(billiard, params, p), rel=1e-10)


def test_entropy_ignores_order_and_zero_events(k4, k4_params):
    P = ProbabilityDistribution((0.5, 0.3, 0.2))
    shuffled = ProbabilityDistribution((0.2, 0.0, 0.5, 0.3))
    assert ihara_entropy(k4, k4_params, P) == ihara_entropy(k4, k4_params, shuffled)


def test_point_mass_has_zero_entropy(k4, k4_params):
    assert ihara_entropy(k4, k4_params, ProbabilityDistribution((1.0,))) == pytest.approx(0.0, abs=1e-12)


def test_uniform_entropy_grows_with_W(billiard):
    params = make_params(billiard)
    values = [ihara_entropy(billiard, params, ProbabilityDistribution.uniform(W)) for W in (2, 3, 5, 8)]
    assert all(b > a for a, b in zip(values, values[1:]))


def test_shannon_entropy_in_nats():
    assert shannon_entropy(ProbabilityDistribution.uniform(4)) == pytest.approx(math.log(4))


def test_shannon_limit_rate_is_linear(k4, k4_params):
    P = ProbabilityDistribution((0.5, 0.3, 0.2))
    sigmas = [0.02, 0.01, 0.005, 0.0025]
    deviations = shannon_limit_check(k4, k4_params.a, P, sigmas)
    assert all(b < a for a, b in zip(deviations, deviations[1:]))
    assert fit_rate_exponent(sigmas, deviations) == pytest.approx(1.0, abs=0.1)


def test_maximiser_is_interior(billiard):
    params = make_params(billiard)
    c = find_max_p(billiard, params)
    assert 0 < c < 1
    assert abs(s_prime(billiard, params, c)) <= 1e-10
    assert s_term(billiard, params, c) > s_term(billiard, params, min(1.0, c * 1.1))
    assert s_term(billiard, params, c) > s_term(billiard, params, c * 0.9)


def test_generator_series_starts_with_t(k4, k4_params):
    G = generator_series(k4, k4_params.a, k4_params.sigma, 6)
    assert G[0] == 0
    assert G[1] == 1


def test_generator_series_order_too_small(k4, k4_params):
    with pytest.raises(ValueError):
        generator_series(k4, k4_params.a, k4_params.sigma, 1)


def test_lazard_law_of_exponential():
    G = series_exp(TruncatedSeries.variable(5)) - 1
    phi = lazard_law(G, 5)
    assert isinstance(phi, BivariateTruncatedSeries)
    assert phi.as_dict() == {(1, 0): 1, (0, 1): 1, (1, 1): 1}


def test_generator_reverts_to_identity(billiard):
    G = generator_series(billiard, Fraction(1, 10), Fraction(1, 4), 8)
    assert series_compose(series_revert(G), G) == TruncatedSeries.variable(8)


def test_lazard_law_of_generator_is_a_formal_group(k4):
    G = generator_series(k4, Fraction(1, 8), Fraction(1, 3), 6)
    check = formal_group_axioms(lazard_law(G, 6))
    assert check == FormalGroupCheck(True, True, True)
    assert check.passed


@pytest.mark.parametrize("graph", ["k4", "billiard"])
@pytest.mark.parametrize("W", [2, 4])
def test_shannon_limit_on_uniform(request, graph, W):
    g = request.getfixturevalue(graph)
    a = make_params(g).window.x0 / 2
    sigmas = [1e-2, 1e-3, 1e-4]
    deviations = shannon_limit_check(g, a, ProbabilityDistribution.uniform(W), sigmas)
    assert all(later < earlier for earlier, later in zip(deviations, deviations[1:]))
    assert fit_rate_exponent(sigmas, deviations) == pytest.approx(1.0, abs=0.2)


def test_concave_on_sample_grid(billiard):
    params = make_params(billiard)
    for i in range(1, 51):
        p = i / 51
        assert s_double_prime_fd(billiard, params, p) < -1e-12


def test_uniform_maximises_entropy(k4, k4_params):
    rng = random.Random(31)
    for W in range(2, 9):
        top = ihara_entropy(k4, k4_params, ProbabilityDistribution.uniform(W))
        for _ in range(100):
            P = ProbabilityDistribution.normalized([rng.random() for _ in range(W)])
            assert ihara_entropy(k4, k4_params, P) <= top + 1e-12


@pytest.mark.parametrize("graph", ["k4", "billiard"])
def test_term_is_p_times_generator_at_log_inverse(graph, request):
    g = request.getfixturevalue(graph)
    params = make_params(g)
    G = ihara_generator(g, params)
    assert G(0.0) == 0.0
    for p in (0.9, 0.5, 0.1, 1e-3):
        assert s_term(g, params, p) / p == pytest.approx(G(math.log(1 / p)), rel=1e-12)


def test_formal_group_entropy_matches_ihara_entropy(billiard):
    params = make_params(billiard)
    G = ihara_generator(billiard, params)
    for P in (ProbabilityDistribution((0.5, 0.3, 0.2, 0.0)), ProbabilityDistribution.uniform(7)):
        assert formal_group_entropy(P, G) == pytest.approx(ihara_entropy(billiard, params, P), rel=1e-12)


def test_formal_group_entropy_with_identity_is_shannon():
    P = ProbabilityDistribution((0.1, 0.2, 0.3, 0.4))
    assert formal_group_entropy(P, lambda t: t) == pytest.approx(shannon_entropy(P), rel=1e-12)


def test_truncated_generator_agrees_with_closed_form_near_zero(k4):
    params = make_params(k4, a=0.125, sigma=0.25)
    G = ihara_generator(k4, params)
    series = generator_series(k4, Fraction(1, 8), Fraction(1, 4), 8)
    for t in (0.01, 0.05):
        assert float(series.evaluate(Fraction(t))) == pytest.approx(G(t), rel=1e-9)


def test_generator_series_checks_the_window(k4, k4_params):
    x0 = k4_params.window.x0
    with pytest.raises(ParameterWindowError):
        generator_series(k4, x0 * 1.01, k4_params.sigma, 4)
    with pytest.raises(ParameterWindowError):
        generator_series(k4, k4_params.a, k4_params.l_sigma * 1.5, 4)
    with pytest.raises(ParameterWindowError):
        generator_series(k4, k4_params.a, k4_params.sigma, 4, mode=STRICT)


def test_check_window(k4, k4_params):
    window = check_window(k4, k4_params.a, k4_params.sigma)
    assert window.x0 == k4_params.window.x0
    with pytest.raises(ParameterWindowError):
        check_window(k4, -0.1, k4_params.sigma)


def test_entropy_is_lipschitz_in_the_distribution(billiard):
    params = make_params(billiard)
    grid = [0.01 * i for i in range(1, 101)]
    L = max(abs(s_prime(billiard, params, p)) for p in grid)
    rng = random.Random(7)
    for _ in range(20):
        P = ProbabilityDistribution.normalized([rng.uniform(0.1, 1.0) for _ in range(5)])
        base = ihara_entropy(billiard, params, P)
        for eps in (1e-2, 1e-4, 1e-6):
            Q = ProbabilityDistribution.normalized([p + eps * rng.random() for p in P.probabilities])
            distance = math.fsum(abs(p - q) for p, q in zip(P.probabilities, Q.probabilities))
            change = abs(ihara_entropy(billiard, params, Q) - base)
            assert change <= 1.5 * L * distance + 1e-12
