"""Exact real scalars for valuation values.

Two representations share one interface (``+``, ``-``, integer scaling,
``sign``):

* :class:`RadicalScalar` is a rational combination of square roots of
  distinct squarefree integers. Square roots of distinct squarefree integers
  are linearly independent over Q, so the zero test is exact and every sign
  determination terminates.
* :class:`DecimalScalar` is an integer combination of user-measured decimal
  inputs, each carrying a declared error radius. A sign test whose enclosing
  interval touches zero raises :class:`IndependenceViolation` instead of
  guessing.

Both expose their terms as a sorted tuple of ``(basis, coefficient)`` pairs
with no zero coefficients, so structural equality is value equality.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt, lcm
from typing import Iterable, Mapping, Sequence, Union

from .errors import DomainError, IndependenceViolation

Rational = Union[int, Fraction]

START_BITS = 64


def squarefree_split(d: int) -> tuple[int, int]:
    """Return ``(s, f)`` with ``d == s * s * f`` and ``f`` squarefree."""
    if d <= 0:
        raise DomainError(f"radicand must be positive, got {d}")
    s, f = 1, d
    p = 2
    while p * p <= f:
        while f % (p * p) == 0:
            f //= p * p
            s *= p
        p += 1 if p == 2 else 2
    return s, f


def is_squarefree(d: int) -> bool:
    return d >= 1 and squarefree_split(d)[0] == 1


@lru_cache(maxsize=1 << 14)
def _scaled_isqrt(d: int, bits: int) -> int:
    # floor(sqrt(d) * 2**bits)
    return isqrt(d << (2 * bits))


class _LinearForm:
    """Rational linear form over a basis; subclasses fix the basis, storage and sign rule."""

    __slots__ = ()

    def __init__(self, terms: Mapping | Iterable = ()):
        raise TypeError(f"use the {type(self).__name__} constructors")

    @classmethod
    def zero(cls):
        return cls._make({})

    def as_dict(self) -> dict:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def _check_kind(self, other) -> None:
        if type(other) is not type(self):
            raise TypeError(f"cannot mix {type(self).__name__} and {type(other).__name__}")

    def __add__(self, other):
        if not isinstance(other, _LinearForm):
            return NotImplemented
        self._check_kind(other)
        table = dict(self.terms)
        for k, c in other.terms:
            table[k] = table.get(k, 0) + c
        return self._make(table)

    def __sub__(self, other):
        if not isinstance(other, _LinearForm):
            return NotImplemented
        self._check_kind(other)
        table = dict(self.terms)
        for k, c in other.terms:
            table[k] = table.get(k, 0) - c
        return self._make(table)

    def __neg__(self):
        return self._make({k: -c for k, c in self.terms})

    def __mul__(self, scale):
        if isinstance(scale, bool) or not isinstance(scale, (int, Fraction)):
            return NotImplemented
        return self._make({k: c * scale for k, c in self.terms})

    __rmul__ = __mul__

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash((type(self).__name__, self.terms))

    # ordering is by value, decided by exact sign
    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def sign(self) -> int:
        raise NotImplementedError

    def enclosure(self, bits: int) -> tuple[Fraction, Fraction]:
        raise NotImplementedError

    def __float__(self) -> float:
        lo, hi = self.enclosure(START_BITS)
        return float((lo + hi) / 2)

    def __reduce__(self):
        return (self._make, (dict(self.terms),))


def _normalized(rad: tuple, num: list, den: int):
    """Drop zero terms and divide out the common factor of numerators and denominator."""
    if 0 in num:
        keep = [x for x, c in enumerate(num) if c]
        rad = tuple(rad[x] for x in keep)
        num = [num[x] for x in keep]
    if not num:
        return (), (), 1
    if den != 1:
        g = gcd(den, *num)
        if g != 1:
            den //= g
            num = [c // g for c in num]
    return rad, tuple(num), den


class RadicalScalar(_LinearForm):
    """``sum(c_d * sqrt(d))`` with rational ``c_d`` and distinct squarefree ``d``.

    Radicand 1 carries the rational part. Stored as sorted radicands with
    integer numerators over one positive common denominator in lowest terms,
    which keeps the arithmetic on machine-friendly integers.
    """

    __slots__ = ("_rad", "_num", "_den")

    @classmethod
    def _raw(cls, rad: tuple, num: tuple, den: int) -> "RadicalScalar":
        obj = object.__new__(cls)
        obj._rad, obj._num, obj._den = rad, num, den
        return obj

    @classmethod
    def _make(cls, table: Mapping) -> "RadicalScalar":
        items = sorted((d, Fraction(c)) for d, c in table.items() if c != 0)
        den = lcm(*(c.denominator for _, c in items)) if items else 1
        return cls._raw(*_normalized(tuple(d for d, _ in items),
                                     [c.numerator * (den // c.denominator) for _, c in items], den))

    @classmethod
    def from_terms(cls, terms: Mapping[int, Rational] | Iterable[tuple[int, Rational]]) -> "RadicalScalar":
        """Build from ``{radicand: coefficient}``; non-squarefree radicands are reduced."""
        items = terms.items() if isinstance(terms, Mapping) else terms
        table: dict[int, Fraction] = {}
        for d, c in items:
            if isinstance(d, bool) or not isinstance(d, int):
                raise TypeError(f"radicand must be an int, got {d!r}")
            s, f = squarefree_split(d)
            table[f] = table.get(f, Fraction(0)) + Fraction(c) * s
        return cls._make(table)

    @classmethod
    def rational(cls, q: Rational) -> "RadicalScalar":
        return cls._make({1: Fraction(q)})

    @property
    def terms(self) -> tuple[tuple[int, Fraction], ...]:
        return tuple((d, Fraction(c, self._den)) for d, c in zip(self._rad, self._num))

    @property
    def radicands(self) -> tuple[int, ...]:
        return self._rad

    def is_zero(self) -> bool:
        return not self._num

    def _linear(self, other, s: int):
        # self + s * other
        if type(other) is not RadicalScalar:
            if not isinstance(other, _LinearForm):
                return NotImplemented
            self._check_kind(other)
        da, db = self._den, other._den
        if da == db:
            den, fa, fb = da, 1, 1
        else:
            den = lcm(da, db)
            fa, fb = den // da, den // db
        if self._rad == other._rad:
            num = [fa * x + s * fb * y for x, y in zip(self._num, other._num)]
            return RadicalScalar._raw(*_normalized(self._rad, num, den))
        table = {d: fa * c for d, c in zip(self._rad, self._num)}
        for d, c in zip(other._rad, other._num):
            table[d] = table.get(d, 0) + s * fb * c
        rad = tuple(sorted(table))
        return RadicalScalar._raw(*_normalized(rad, [table[d] for d in rad], den))

    def __add__(self, other):
        return self._linear(other, 1)

    def __sub__(self, other):
        return self._linear(other, -1)

    def __neg__(self):
        return RadicalScalar._raw(self._rad, tuple(-c for c in self._num), self._den)

    def __mul__(self, scale):
        if isinstance(scale, bool) or not isinstance(scale, (int, Fraction)):
            return NotImplemented
        scale = Fraction(scale)
        num = [c * scale.numerator for c in self._num]
        return RadicalScalar._raw(*_normalized(self._rad, num, self._den * scale.denominator))

    __rmul__ = __mul__

    def __eq__(self, other):
        if type(other) is not RadicalScalar:
            return NotImplemented
        return self._num == other._num and self._rad == other._rad and self._den == other._den

    def __hash__(self):
        return hash((self._rad, self._num, self._den))

    def __reduce__(self):
        return (RadicalScalar._raw, (self._rad, self._num, self._den))

    def enclosure(self, bits: int) -> tuple[Fraction, Fraction]:
        """Rational interval of width ``O(2**-bits)`` containing the value."""
        lo, hi = self._scaled_bounds(bits)
        scale = self._den << bits
        return Fraction(lo, scale), Fraction(hi, scale)

    def _scaled_bounds(self, bits: int) -> tuple[int, int]:
        # bounds on value * den * 2**bits
        lo = hi = 0
        for d, c in zip(self._rad, self._num):
            if d == 1:
                lo += c << bits
                hi += c << bits
                continue
            s = _scaled_isqrt(d, bits)
            if c > 0:
                lo += c * s
                hi += c * (s + 1)
            else:
                lo += c * (s + 1)
                hi += c * s
        return lo, hi

    def sign(self) -> int:
        num = self._num
        if not num:
            return 0
        if all(c > 0 for c in num):
            return 1
        if all(c < 0 for c in num):
            return -1
        bits = START_BITS
        while True:
            lo, hi = self._scaled_bounds(bits)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            bits *= 2

    def __repr__(self):
        if not self._num:
            return "RadicalScalar(0)"
        return f"RadicalScalar({self})"

    def __str__(self):
        if not self._num:
            return "0"
        parts = []
        for d, c in self.terms:
            mag = abs(c)
            body = ("" if mag == 1 and d != 1 else str(mag)) + ("" if d == 1 else ("*" if mag != 1 else "") + f"sqrt({d})")
            parts.append(("-" if c < 0 else "+", body))
        text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for s, body in parts[1:]:
            text += f" {s} {body}"
        return text


def radical(coefficient: Rational = 1, radicand: int = 1) -> RadicalScalar:
    """``coefficient * sqrt(radicand)``."""
    return RadicalScalar.from_terms({radicand: coefficient})


class DecimalScalar(_LinearForm):
    """Integer combination of measured decimal inputs.

    Each basis element is a ``(value, radius)`` pair: the input is only known
    to lie within ``radius`` of ``value``. Error radii add up through
    combinations, so the enclosure is always sound.
    """

    __slots__ = ("terms",)

    @classmethod
    def _make(cls, table: Mapping) -> "DecimalScalar":
        obj = object.__new__(cls)
        obj.terms = tuple(sorted((k, c) for k, c in table.items() if c != 0))
        return obj

    @classmethod
    def measured(cls, value: Rational | str, radius: Rational | str = 0) -> "DecimalScalar":
        value, radius = Fraction(value), Fraction(radius)
        if radius < 0:
            raise DomainError("tolerance must be nonnegative")
        if value == 0 and radius == 0:
            return cls.zero()
        return cls._make({(value, radius): Fraction(1)})

    def nominal(self) -> Fraction:
        return sum((c * val for (val, _), c in self.terms), Fraction(0))

    def radius(self) -> Fraction:
        return sum((abs(c) * rad for (_, rad), c in self.terms), Fraction(0))

    def enclosure(self, bits: int) -> tuple[Fraction, Fraction]:
        mid, rad = self.nominal(), self.radius()
        return mid - rad, mid + rad

    def sign(self) -> int:
        if not self.terms:
            return 0
        mid, rad = self.nominal(), self.radius()
        if mid > rad:
            return 1
        if mid < -rad:
            return -1
        raise IndependenceViolation(
            f"sign of {float(mid):.6g} is undecidable within tolerance {float(rad):.3g}"
        )

    def __repr__(self):
        return f"DecimalScalar({float(self.nominal())!r} +/- {float(self.radius())!r})"


Scalar = Union[RadicalScalar, DecimalScalar]


def combine(coeffs: Sequence[int], scalars: Sequence[Scalar]) -> Scalar:
    """``sum(coeffs[t] * scalars[t])`` in canonical form."""
    if len(coeffs) != len(scalars):
        raise ValueError(f"length mismatch: {len(coeffs)} coefficients, {len(scalars)} scalars")
    if not scalars:
        return RadicalScalar.zero()
    kind = type(scalars[0])
    if kind is RadicalScalar and all(type(x) is RadicalScalar for x in scalars):
        return _combine_radicals(coeffs, scalars)
    table: dict = {}
    for c, x in zip(coeffs, scalars):
        if type(x) is not kind:
            raise TypeError(f"cannot mix {kind.__name__} and {type(x).__name__}")
        if c == 0:
            continue
        for k, a in x.terms:
            table[k] = table.get(k, 0) + c * a
    return kind._make(table)


def _combine_radicals(coeffs: Sequence[int], scalars: Sequence[RadicalScalar]) -> RadicalScalar:
    den = lcm(*(x._den for c, x in zip(coeffs, scalars) if c)) if any(coeffs) else 1
    table: dict[int, int] = {}
    for c, x in zip(coeffs, scalars):
        if c == 0:
            continue
        f = c * (den // x._den)
        for d, a in zip(x._rad, x._num):
            table[d] = table.get(d, 0) + f * a
    rad = tuple(sorted(table))
    return RadicalScalar._raw(*_normalized(rad, [table[d] for d in rad], den))


def sign(x: Scalar) -> int:
    return x.sign()


def compare(a: Scalar, b: Scalar) -> int:
    """-1, 0 or 1 as ``a`` is less than, equal to or greater than ``b``."""
    return (a - b).sign()


def floor_quotient(a: Scalar, b: Scalar) -> int:
    """Exact ``floor(a / b)`` for ``a >= 0`` and ``b > 0``."""
    if b.sign() <= 0:
        raise DomainError("divisor must be positive")
    if a.sign() < 0:
        raise DomainError("dividend must be nonnegative")
    bits = START_BITS
    while True:
        lo_a, hi_a = a.enclosure(bits)
        lo_b, hi_b = b.enclosure(bits)
        if lo_b > 0:
            lo, hi = max(lo_a, Fraction(0)) / hi_b, hi_a / lo_b
            if hi - lo < 1 or isinstance(a, DecimalScalar):
                break
        bits *= 2
    m = int(lo)  # floor, lo >= 0
    # settle the candidate with exact sign tests; a == m*b is decided by the zero test
    while (a - b * m).sign() < 0:
        m -= 1
    while (a - b * (m + 1)).sign() >= 0:
        m += 1
    return m
