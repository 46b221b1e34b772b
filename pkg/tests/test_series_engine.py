import random
from fractions import Fraction

import pytest

from errors import SeriesError
from series_engine import (
    BivariateTruncatedSeries,
    MultivariateTruncatedSeries,
    TruncatedSeries,
    compose_univariate,
    series_compose,
    series_exp,
    series_polyval,
    series_revert,
    univariate_in,
)


def series(*coefficients):
    return TruncatedSeries.from_coefficients(coefficients)


def random_series(rng, order, constant=0, linear=None):
    coeffs = [Fraction(constant)]
    coeffs.append(Fraction(linear) if linear is not None else Fraction(rng.randint(-5, 5), rng.randint(1, 6)))
    coeffs += [Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(order - 1)]
    return TruncatedSeries(tuple(coeffs))


def test_exp_of_zero_is_one():
    assert series_exp(series(0, 0, 0, 0)) == series(1, 0, 0, 0)


def test_exp_of_t():
    assert series_exp(series(0, 1, 0, 0)) == series(1, 1, Fraction(1, 2), Fraction(1, 6))


def test_exp_rejects_constant_term():
    with pytest.raises(SeriesError):
        series_exp(series(1, 1))


def test_exp_is_a_homomorphism():
    rng = random.Random(7)
    for _ in range(5):
        u, v = random_series(rng, 6), random_series(rng, 6)
        assert series_exp(u + v) == series_exp(u) * series_exp(v)


def test_mixed_orders_truncate_to_smaller():
    total = series(1, 2, 3) + series(1, 1)
    assert total.order == 1
    assert total == series(2, 3)


def test_reading_beyond_order_fails():
    with pytest.raises(SeriesError):
        series(1, 2)[2]


def test_compose_with_identity():
    f = series(3, -1, Fraction(2, 7), 5)
    assert series_compose(f, series(0, 1, 0, 0)) == f


def test_compose_square_of_double():
    assert series_compose(series(0, 0, 1, 0, 0), series(0, 2, 0, 0, 0)) == series(0, 0, 4, 0, 0)


def test_compose_rejects_constant_inner():
    with pytest.raises(SeriesError):
        series_compose(series(0, 1), series(1, 1))


def test_revert_identity():
    assert series_revert(series(0, 1, 0, 0)) == series(0, 1, 0, 0)


def test_revert_t_plus_t_squared():
    assert series_revert(series(0, 1, 1, 0)) == series(0, 1, -1, 2)


def test_revert_t_squared_fails():
    with pytest.raises(SeriesError, match="linear coefficient"):
        series_revert(series(0, 0, 1, 0))


def test_revert_then_compose_is_identity_for_random_series():
    rng = random.Random(11)
    for _ in range(10):
        g = random_series(rng, 8, linear=1)
        assert series_compose(series_revert(g), g) == TruncatedSeries.variable(8)


def test_revert_with_non_unit_linear_coefficient():
    g = series(0, 3, 1, -2, 0, 1)
    assert series_compose(series_revert(g), g) == TruncatedSeries.variable(5)


def test_reciprocal_and_polyval():
    f = series(1, -1, 0, 0, 0)
    assert f.reciprocal() == series(1, 1, 1, 1, 1)
    # 1 + 2g + g^2 at g = 1 + t is (2 + t)^2
    assert series_polyval([1, 2, 1], series(1, 1, 0)) == series(4, 4, 1)


def test_evaluate_float_and_exact():
    f = series(1, 2, 3)
    assert f.evaluate(Fraction(1, 2)) == Fraction(11, 4)
    assert f.evaluate(0.5) == pytest.approx(2.75)


def test_to_dict_pairs():
    assert series(1, Fraction(-1, 2)).to_dict() == {"order": 1, "coefficients": [[1, 1], [-1, 2]]}


def test_multivariate_substitution():
    order = 4
    s1 = MultivariateTruncatedSeries.variable(0, 2, order)
    s2 = MultivariateTruncatedSeries.variable(1, 2, order)
    phi = s1 + s2 + s1 * s2
    # (s1 + s2 + s1 s2) with s2 -> 0 gives s1
    zero = MultivariateTruncatedSeries.from_dict(2, order, {})
    assert phi.substitute([s1, zero]) == s1


def test_compose_univariate_exp_minus_one():
    order = 5
    exp_minus_one = series_exp(TruncatedSeries.variable(order)) - 1
    log_one_plus = series_revert(exp_minus_one)
    inner = univariate_in(log_one_plus, 0, 2) + univariate_in(log_one_plus, 1, 2)
    phi = compose_univariate(exp_minus_one, inner)
    expected = MultivariateTruncatedSeries.from_dict(2, order, {(1, 0): 1, (0, 1): 1, (1, 1): 1})
    assert phi == expected


def test_bivariate_matrix_marks_absent_entries():
    b = BivariateTruncatedSeries.from_dict(2, 2, {(1, 0): 1, (0, 1): 1})
    matrix = b.matrix()
    assert matrix[1][0] == 1
    assert matrix[2][1] is None


def test_bivariate_rejects_three_variables():
    with pytest.raises(SeriesError):
        BivariateTruncatedSeries.from_dict(3, 2, {})
