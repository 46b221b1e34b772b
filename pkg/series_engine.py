"""
Exact truncated formal power series over the rationals.

A series of order N knows its coefficients of t^0..t^N and nothing beyond;
combining two series of different order truncates to the smaller one.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Sequence, Tuple, Union

from errors import SeriesError

logger = logging.getLogger(__name__)

Scalar = Union[int, Fraction]


@dataclass(frozen=True)
class TruncatedSeries:
    coefficients: Tuple[Fraction, ...]

    def __post_init__(self):
        if not self.coefficients:
            raise SeriesError("a truncated series needs at least the constant term")
        object.__setattr__(self, "coefficients", tuple(Fraction(c) for c in self.coefficients))

    # construction

    @classmethod
    def from_coefficients(cls, coefficients: Iterable[Scalar], order: int = None) -> "TruncatedSeries":
        """Pad with zeros or cut to the requested order"""
        coeffs = [Fraction(c) for c in coefficients]
        if order is not None:
            coeffs = (coeffs + [Fraction(0)] * (order + 1))[: order + 1]
        return cls(tuple(coeffs))

    @classmethod
    def constant(cls, value: Scalar, order: int) -> "TruncatedSeries":
        return cls.from_coefficients([value], order)

    @classmethod
    def variable(cls, order: int) -> "TruncatedSeries":
        """The series t"""
        return cls.from_coefficients([0, 1], order)

    # shape

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def __getitem__(self, k: int) -> Fraction:
        if k < 0 or k > self.order:
            raise SeriesError(f"coefficient t^{k} is beyond order {self.order}")
        return self.coefficients[k]

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise SeriesError(f"cannot extend order {self.order} series to {order}")
        return TruncatedSeries(self.coefficients[: order + 1])

    # arithmetic

    def _coerce(self, other) -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            return other
        if isinstance(other, (int, Fraction)):
            return TruncatedSeries.constant(other, self.order)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        order = min(self.order, other.order)
        return TruncatedSeries(tuple(self.coefficients[k] + other.coefficients[k] for k in range(order + 1)))

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(tuple(-c for c in self.coefficients))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        order = min(self.order, other.order)
        a, b = self.coefficients, other.coefficients
        out = [Fraction(0)] * (order + 1)
        for i in range(order + 1):
            if a[i] == 0:
                continue
            for j in range(order + 1 - i):
                out[i + j] += a[i] * b[j]
        return TruncatedSeries(tuple(out))

    __rmul__ = __mul__

    def scale(self, factor: Scalar) -> "TruncatedSeries":
        factor = Fraction(factor)
        return TruncatedSeries(tuple(c * factor for c in self.coefficients))

    def shift(self, k: int) -> "TruncatedSeries":
        """Multiply by t^k keeping the order"""
        return TruncatedSeries.from_coefficients([0] * k + list(self.coefficients), self.order)

    def reciprocal(self) -> "TruncatedSeries":
        """1/f for f with invertible constant term (exact long division)"""
        a = self.coefficients
        if a[0] == 0:
            raise SeriesError("reciprocal needs a nonzero constant term")
        out = [Fraction(0)] * (self.order + 1)
        out[0] = 1 / a[0]
        for n in range(1, self.order + 1):
            acc = sum((a[k] * out[n - k] for k in range(1, n + 1)), Fraction(0))
            out[n] = -acc / a[0]
        return TruncatedSeries(tuple(out))

    def derivative(self) -> "TruncatedSeries":
        """Formal derivative; the order drops by one"""
        if self.order == 0:
            return TruncatedSeries.constant(0, 0)
        return TruncatedSeries(tuple(k * self.coefficients[k] for k in range(1, self.order + 1)))

    def evaluate(self, x: Union[float, Fraction]):
        """Value of the truncation (a polynomial) at x"""
        result = 0 * x
        for c in reversed(self.coefficients):
            result = result * x + (c if isinstance(x, Fraction) else float(c))
        return result

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coefficients)

    def to_dict(self) -> Dict:
        return {
            "order": self.order,
            "coefficients": [[c.numerator, c.denominator] for c in self.coefficients],
        }

    def __str__(self):
        terms = []
        for k, c in enumerate(self.coefficients):
            if c == 0:
                continue
            terms.append(f"{c}" if k == 0 else f"{c}*t^{k}")
        return (" + ".join(terms) or "0") + f" + O(t^{self.order + 1})"


def series_exp(u: TruncatedSeries) -> TruncatedSeries:
    """
    exp(u) for u with zero constant term.

    Uses n*e_n = sum_{k=1..n} k*u_k*e_{n-k}, which follows from E' = u'E.
    """
    if u.coefficients[0] != 0:
        raise SeriesError("series_exp needs a zero constant term")
    e = [Fraction(0)] * (u.order + 1)
    e[0] = Fraction(1)
    for n in range(1, u.order + 1):
        acc = sum((k * u.coefficients[k] * e[n - k] for k in range(1, n + 1)), Fraction(0))
        e[n] = acc / n
    return TruncatedSeries(tuple(e))


def series_polyval(coefficients: Sequence[Scalar], g: TruncatedSeries) -> TruncatedSeries:
    """
    Evaluate the polynomial sum c_k x^k at the series g (Horner).

    g may have any constant term because the outer function is a polynomial.
    """
    result = TruncatedSeries.constant(0, g.order)
    for c in reversed(list(coefficients)):
        result = result * g + Fraction(c)
    return result


def series_compose(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    """f(g(t)) to min(order f, order g); g must have zero constant term"""
    if g.coefficients[0] != 0:
        raise SeriesError("series_compose needs g with zero constant term")
    order = min(f.order, g.order)
    return series_polyval(f.coefficients[: order + 1], g.truncate(order))


def series_revert(g: TruncatedSeries) -> TruncatedSeries:
    """
    Compositional inverse F with F(G(t)) = t up to the order of G.

    Coefficients are solved order by order: the t^n coefficient of
    sum_k f_k G^k must vanish for n >= 2, and [t^n] G^n = g_1^n.

    Raises:
        SeriesError: nonzero constant term or zero linear coefficient
    """
    if g.coefficients[0] != 0:
        raise SeriesError("series_revert needs a zero constant term")
    if g.order < 1 or g.coefficients[1] == 0:
        raise SeriesError(
            "series_revert needs a unit linear coefficient; "
            "a series starting at t^2 or higher has no compositional inverse"
        )

    order = g.order
    powers: List[TruncatedSeries] = [TruncatedSeries.constant(1, order), g]
    for _ in range(2, order + 1):
        powers.append(powers[-1] * g)

    g1 = g.coefficients[1]
    f = [Fraction(0)] * (order + 1)
    f[1] = 1 / g1
    for n in range(2, order + 1):
        acc = sum((f[k] * powers[k].coefficients[n] for k in range(1, n)), Fraction(0))
        f[n] = -acc / g1 ** n
    return TruncatedSeries(tuple(f))


@dataclass(frozen=True)
class MultivariateTruncatedSeries:
    """
    Series in several variables truncated at total degree `order`.

    Coefficients are keyed by exponent tuples; zero entries are dropped.
    """

    nvars: int
    order: int
    terms: Tuple[Tuple[Tuple[int, ...], Fraction], ...]

    @classmethod
    def from_dict(cls, nvars: int, order: int, coeffs: Dict[Tuple[int, ...], Scalar]):
        items = []
        for exponents, c in coeffs.items():
            if len(exponents) != nvars:
                raise SeriesError(f"exponent {exponents} does not have {nvars} entries")
            c = Fraction(c)
            if c != 0 and sum(exponents) <= order:
                items.append((tuple(exponents), c))
        return cls(nvars, order, tuple(sorted(items)))

    @classmethod
    def variable(cls, index: int, nvars: int, order: int):
        exponents = tuple(1 if i == index else 0 for i in range(nvars))
        return cls.from_dict(nvars, order, {exponents: 1})

    @classmethod
    def constant(cls, value: Scalar, nvars: int, order: int):
        return cls.from_dict(nvars, order, {(0,) * nvars: value})

    def as_dict(self) -> Dict[Tuple[int, ...], Fraction]:
        return dict(self.terms)

    def coefficient(self, *exponents: int) -> Fraction:
        if sum(exponents) > self.order:
            raise SeriesError(f"total degree {sum(exponents)} is beyond order {self.order}")
        return self.as_dict().get(tuple(exponents), Fraction(0))

    def _check(self, other: "MultivariateTruncatedSeries"):
        if self.nvars != other.nvars:
            raise SeriesError("cannot combine series in different numbers of variables")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MultivariateTruncatedSeries.constant(other, self.nvars, self.order)
        self._check(other)
        order = min(self.order, other.order)
        out = self.as_dict()
        for k, c in other.terms:
            out[k] = out.get(k, Fraction(0)) + c
        return MultivariateTruncatedSeries.from_dict(self.nvars, order, out)

    __radd__ = __add__

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return MultivariateTruncatedSeries.from_dict(
                self.nvars, self.order, {k: c * other for k, c in self.terms})
        self._check(other)
        order = min(self.order, other.order)
        out: Dict[Tuple[int, ...], Fraction] = {}
        for ka, ca in self.terms:
            da = sum(ka)
            for kb, cb in other.terms:
                if da + sum(kb) > order:
                    continue
                key = tuple(x + y for x, y in zip(ka, kb))
                out[key] = out.get(key, Fraction(0)) + ca * cb
        return MultivariateTruncatedSeries.from_dict(self.nvars, order, out)

    __rmul__ = __mul__

    def permute(self, permutation: Sequence[int]) -> "MultivariateTruncatedSeries":
        """Rename variable i to permutation[i]"""
        out = {}
        for k, c in self.terms:
            new = [0] * self.nvars
            for i, e in enumerate(k):
                new[permutation[i]] = e
            out[tuple(new)] = c
        return type(self).from_dict(self.nvars, self.order, out)

    def substitute(self, values: Sequence["MultivariateTruncatedSeries"]) -> "MultivariateTruncatedSeries":
        """Replace variable i by values[i] (all in a common ring, zero constant terms)"""
        if len(values) != self.nvars:
            raise SeriesError(f"need {self.nvars} substitutions, got {len(values)}")
        ring_vars = values[0].nvars
        order = min([self.order] + [v.order for v in values])
        for v in values:
            if v.nvars != ring_vars:
                raise SeriesError("substituted series must share a ring")
            if v.as_dict().get((0,) * ring_vars, 0) != 0:
                raise SeriesError("substituted series must have zero constant term")

        one = MultivariateTruncatedSeries.constant(1, ring_vars, order)
        power_cache: Dict[Tuple[int, int], MultivariateTruncatedSeries] = {}

        def power(i: int, e: int) -> MultivariateTruncatedSeries:
            if e == 0:
                return one
            key = (i, e)
            if key not in power_cache:
                power_cache[key] = power(i, e - 1) * values[i]
            return power_cache[key]

        result = MultivariateTruncatedSeries.from_dict(ring_vars, order, {})
        for k, c in self.terms:
            term = one * c
            for i, e in enumerate(k):
                if e:
                    term = term * power(i, e)
            result = result + term
        return result

    def truncate(self, order: int):
        return type(self).from_dict(self.nvars, min(order, self.order), self.as_dict())

    def __eq__(self, other):
        if not isinstance(other, MultivariateTruncatedSeries):
            return NotImplemented
        order = min(self.order, other.order)
        return (self.nvars == other.nvars
                and self.truncate(order).terms == other.truncate(order).terms)

    def __hash__(self):
        return hash((self.nvars, self.order, self.terms))


class BivariateTruncatedSeries(MultivariateTruncatedSeries):
    """Series in s1, s2 truncated at total degree N"""

    @classmethod
    def from_dict(cls, nvars: int, order: int, coeffs):
        if nvars != 2:
            raise SeriesError("a bivariate series has exactly two variables")
        return super().from_dict(nvars, order, coeffs)

    def matrix(self) -> List[List[Fraction]]:
        """Coefficient of s1^i s2^j at [i][j]; entries with i+j > N are absent (None)"""
        coeffs = self.as_dict()
        return [
            [coeffs.get((i, j), Fraction(0)) if i + j <= self.order else None
             for j in range(self.order + 1)]
            for i in range(self.order + 1)
        ]

    def to_dict(self) -> Dict:
        return {
            "order": self.order,
            "terms": [[i, j, c.numerator, c.denominator] for (i, j), c in self.terms],
        }


def compose_univariate(f: TruncatedSeries, inner: MultivariateTruncatedSeries) -> MultivariateTruncatedSeries:
    """f(inner) for a multivariate inner series with zero constant term"""
    if inner.as_dict().get((0,) * inner.nvars, 0) != 0:
        raise SeriesError("inner series must have zero constant term")
    order = min(f.order, inner.order)
    result = MultivariateTruncatedSeries.constant(0, inner.nvars, order)
    for c in reversed(f.coefficients[: order + 1]):
        result = result * inner + c
    return result


def univariate_in(f: TruncatedSeries, index: int, nvars: int) -> MultivariateTruncatedSeries:
    """f viewed as a series in variable `index` of an nvars-variable ring"""
    coeffs = {}
    for k, c in enumerate(f.coefficients):
        exponents = tuple(k if i == index else 0 for i in range(nvars))
        coeffs[exponents] = c
    return MultivariateTruncatedSeries.from_dict(nvars, f.order, coeffs)
