"""Exact scaled-integer arithmetic.

Three value types cover every number this library produces:

* ``Dyadic``         -- p / 2**k, the value class of all truncated measures
* ``GaussianScaled`` -- (a + b*i) / 2**k, matrix entries and event sums
* ``RootTwoScaled``  -- (a + b*sqrt(2)) / 2**k, closed forms with cos(m*pi/4)

Nothing here touches floats except the explicit ``float()`` conversions, so
zero tests (preclusion decisions in particular) are always settled by integer
comparison, never by tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering


def _reduce(parts: list[int], log2_den: int) -> tuple[list[int], int]:
    """Strip common factors of two from numerators and denominator exponent."""
    if log2_den < 0:
        raise ValueError("denominator exponent must be nonnegative")
    while log2_den and all(p & 1 == 0 for p in parts):
        parts = [p >> 1 for p in parts]
        log2_den -= 1
    return parts, log2_den


@total_ordering
@dataclass(frozen=True, eq=False)
class Dyadic:
    """Exact dyadic rational num / 2**log2_den, kept in lowest terms."""

    num: int
    log2_den: int = 0

    def __post_init__(self) -> None:
        (num,), den = _reduce([self.num], self.log2_den)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "log2_den", den)

    @classmethod
    def from_fraction(cls, value) -> "Dyadic":
        frac = Fraction(value)
        k = frac.denominator.bit_length() - 1
        if 1 << k != frac.denominator:
            raise ValueError(f"{value!r} is not a dyadic rational")
        return cls(frac.numerator, k)

    def is_zero(self) -> bool:
        return self.num == 0

    def as_fraction(self) -> Fraction:
        return Fraction(self.num, 1 << self.log2_den)

    def numerator_at(self, log2_den: int) -> int:
        """Numerator when written over 2**log2_den; exact or ValueError."""
        shift = log2_den - self.log2_den
        if shift < 0:
            raise ValueError(f"{self} has no exact form over 2**{log2_den}")
        return self.num << shift

    def _coerced(self, other):
        if isinstance(other, Dyadic):
            return other
        if isinstance(other, int):
            return Dyadic(other)
        return None

    def __add__(self, other):
        other = self._coerced(other)
        if other is None:
            return NotImplemented
        den = max(self.log2_den, other.log2_den)
        num = (self.num << (den - self.log2_den)) + (other.num << (den - other.log2_den))
        return Dyadic(num, den)

    __radd__ = __add__

    def __neg__(self) -> "Dyadic":
        return Dyadic(-self.num, self.log2_den)

    def __sub__(self, other):
        other = self._coerced(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerced(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerced(other)
        if other is None:
            return NotImplemented
        return Dyadic(self.num * other.num, self.log2_den + other.log2_den)

    __rmul__ = __mul__

    def __eq__(self, other):
        other = self._coerced(other)
        if other is None:
            return NotImplemented
        return self.num == other.num and self.log2_den == other.log2_den

    def __hash__(self):
        return hash((self.num, self.log2_den))

    def __lt__(self, other):
        other = self._coerced(other)
        if other is None:
            return NotImplemented
        return (self.num << other.log2_den) < (other.num << self.log2_den)

    def __float__(self) -> float:
        return float(self.as_fraction())

    def __str__(self) -> str:
        return str(self.as_fraction())


@dataclass(frozen=True, eq=False)
class GaussianScaled:
    """Gaussian integer over a power of two: (re + im*i) / 2**log2_den."""

    re: int
    im: int
    log2_den: int = 0

    def __post_init__(self) -> None:
        (re, im), den = _reduce([self.re, self.im], self.log2_den)
        object.__setattr__(self, "re", re)
        object.__setattr__(self, "im", im)
        object.__setattr__(self, "log2_den", den)

    @classmethod
    def unit_power(cls, k: int, log2_den: int = 0) -> "GaussianScaled":
        """i**k over 2**log2_den."""
        re, im = ((1, 0), (0, 1), (-1, 0), (0, -1))[k & 3]
        return cls(re, im, log2_den)

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def conjugate(self) -> "GaussianScaled":
        return GaussianScaled(self.re, -self.im, self.log2_den)

    @property
    def real(self) -> Dyadic:
        return Dyadic(self.re, self.log2_den)

    @property
    def imag(self) -> Dyadic:
        return Dyadic(self.im, self.log2_den)

    def abs_squared(self) -> Dyadic:
        return Dyadic(self.re * self.re + self.im * self.im, 2 * self.log2_den)

    def _coerced(self, other):
        if isinstance(other, GaussianScaled):
            return other
        if isinstance(other, int):
            return GaussianScaled(other, 0)
        return None

    def __add__(self, other):
        other = self._coerced(other)
        if other is None:
            return NotImplemented
        den = max(self.log2_den, other.log2_den)
        s, o = den - self.log2_den, den - other.log2_den
        return GaussianScaled((self.re << s) + (other.re << o), (self.im << s) + (other.im << o), den)

    __radd__ = __add__

    def __neg__(self) -> "GaussianScaled":
        return GaussianScaled(-self.re, -self.im, self.log2_den)

    def __sub__(self, other):
        other = self._coerced(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        other = self._coerced(other)
        if other is None:
            return NotImplemented
        re = self.re * other.re - self.im * other.im
        im = self.re * other.im + self.im * other.re
        return GaussianScaled(re, im, self.log2_den + other.log2_den)

    __rmul__ = __mul__

    def __eq__(self, other):
        other = self._coerced(other)
        if other is None:
            return NotImplemented
        return (self.re, self.im, self.log2_den) == (other.re, other.im, other.log2_den)

    def __hash__(self):
        return hash((self.re, self.im, self.log2_den))

    def as_complex(self) -> complex:
        scale = 1 << self.log2_den
        return complex(self.re / scale, self.im / scale)

    def __str__(self) -> str:
        return f"({self.real}) + ({self.imag})i"


# cos(m*pi/4) for m = 0..7, as (int_part, root_part) over denominator 2
_COS_EIGHTH = ((2, 0), (0, 1), (0, 0), (0, -1), (-2, 0), (0, -1), (0, 0), (0, 1))


@dataclass(frozen=True, eq=False)
class RootTwoScaled:
    """Element of Z[sqrt(2)] over a power of two: (a + b*sqrt(2)) / 2**log2_den."""

    int_part: int
    root_part: int
    log2_den: int = 0

    def __post_init__(self) -> None:
        (a, b), den = _reduce([self.int_part, self.root_part], self.log2_den)
        object.__setattr__(self, "int_part", a)
        object.__setattr__(self, "root_part", b)
        object.__setattr__(self, "log2_den", den)

    @classmethod
    def from_int(cls, value: int) -> "RootTwoScaled":
        return cls(value, 0, 0)

    @classmethod
    def pow2_half(cls, half_exponent: int) -> "RootTwoScaled":
        """2**(half_exponent / 2), exact for any integer half_exponent."""
        q, r = divmod(half_exponent, 2)
        a, b = (1, 0) if r == 0 else (0, 1)
        if q >= 0:
            return cls(a << q, b << q, 0)
        return cls(a, b, -q)

    @classmethod
    def cos_eighth(cls, m: int) -> "RootTwoScaled":
        """cos(m * pi / 4), exact."""
        a, b = _COS_EIGHTH[m & 7]
        return cls(a, b, 1)

    def _coerced(self, other):
        if isinstance(other, RootTwoScaled):
            return other
        if isinstance(other, int):
            return RootTwoScaled(other, 0, 0)
        return None

    def __add__(self, other):
        other = self._coerced(other)
        if other is None:
            return NotImplemented
        den = max(self.log2_den, other.log2_den)
        s, o = den - self.log2_den, den - other.log2_den
        return RootTwoScaled(
            (self.int_part << s) + (other.int_part << o),
            (self.root_part << s) + (other.root_part << o),
            den,
        )

    __radd__ = __add__

    def __neg__(self) -> "RootTwoScaled":
        return RootTwoScaled(-self.int_part, -self.root_part, self.log2_den)

    def __sub__(self, other):
        other = self._coerced(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerced(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerced(other)
        if other is None:
            return NotImplemented
        a = self.int_part * other.int_part + 2 * self.root_part * other.root_part
        b = self.int_part * other.root_part + self.root_part * other.int_part
        return RootTwoScaled(a, b, self.log2_den + other.log2_den)

    __rmul__ = __mul__

    def __eq__(self, other):
        other = self._coerced(other)
        if other is None:
            return NotImplemented
        return (self.int_part, self.root_part, self.log2_den) == (
            other.int_part,
            other.root_part,
            other.log2_den,
        )

    def __hash__(self):
        return hash((self.int_part, self.root_part, self.log2_den))

    def is_dyadic(self) -> bool:
        return self.root_part == 0

    def to_dyadic(self) -> Dyadic:
        if not self.is_dyadic():
            raise ValueError(f"{self} has an irrational part")
        return Dyadic(self.int_part, self.log2_den)

    def __float__(self) -> float:
        return (self.int_part + self.root_part * 2 ** 0.5) / (1 << self.log2_den)

    def __str__(self) -> str:
        return f"({self.int_part} + {self.root_part}*sqrt(2)) / 2**{self.log2_den}"
