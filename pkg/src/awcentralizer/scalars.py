"""Exact arithmetic in the rational function field Q(v), with q = v**2.

Every coefficient in this package lives in Q(v).  Half-integer powers of q,
as they appear in spin representations of q^H, are integer powers of v, so
no algebraic extension is ever needed.

A :class:`Scalar` is stored canonically as ``v**shift * num / den`` where
``num`` and ``den`` are flint ``fmpq_poly`` objects with

* ``num`` not divisible by ``v`` (or zero, in which case ``shift == 0``),
* ``den`` monic with nonzero constant term,
* ``gcd(num, den) == 1``.

Structural equality of canonical forms is equality in Q(v).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

import flint

from .errors import PoleAtOne, PoleAtSample

_Poly = flint.fmpq_poly
_ONE_POLY = _Poly([1])
_ZERO_POLY = _Poly([])

Rational = Union[int, Fraction]


def _valuation(p: flint.fmpq_poly) -> int:
    for i, c in enumerate(p.coeffs()):
        if c != 0:
            return i
    raise ValueError("valuation of zero polynomial")


def _to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, flint.fmpq):
        return Fraction(int(x.p), int(x.q))
    if isinstance(x, flint.fmpz):
        return Fraction(int(x))
    return Fraction(x)


def _to_fmpq(x: Rational) -> flint.fmpq:
    x = _to_fraction(x)
    return flint.fmpq(x.numerator, x.denominator)


class LaurentPoly:
    """Laurent polynomial in v with rational coefficients.

    Built from a mapping ``{exponent: coefficient}``; zero coefficients are
    dropped, so two instances are equal iff their coefficient maps agree.
    """

    __slots__ = ("_poly", "_shift")

    def __init__(self, coeffs: Mapping[int, Rational] | None = None):
        coeffs = {e: _to_fraction(c) for e, c in (coeffs or {}).items() if c != 0}
        if not coeffs:
            self._poly, self._shift = _ZERO_POLY, 0
            return
        lo = min(coeffs)
        dense = [Fraction(0)] * (max(coeffs) - lo + 1)
        for e, c in coeffs.items():
            dense[e - lo] = c
        self._poly = _Poly([_to_fmpq(c) for c in dense])
        self._shift = lo

    @classmethod
    def _raw(cls, poly: flint.fmpq_poly, shift: int) -> "LaurentPoly":
        out = cls.__new__(cls)
        if poly.is_zero():
            out._poly, out._shift = _ZERO_POLY, 0
        else:
            k = _valuation(poly)
            out._poly = poly.right_shift(k) if k else poly
            out._shift = shift + k
        return out

    @property
    def coeffs(self) -> dict[int, Fraction]:
        return {
            self._shift + i: _to_fraction(c)
            for i, c in enumerate(self._poly.coeffs())
            if c != 0
        }

    def is_zero(self) -> bool:
        return self._poly.is_zero()

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._shift == other._shift and self._poly == other._poly

    def __hash__(self) -> int:
        return hash((self._shift, tuple(self.coeffs.items())))

    def __repr__(self) -> str:
        return f"LaurentPoly({self.coeffs})"

    def __str__(self) -> str:
        return _poly_str(self._poly, self._shift)


def _poly_str(poly: flint.fmpq_poly, shift: int) -> str:
    terms = []
    for i, c in enumerate(poly.coeffs()):
        if c == 0:
            continue
        e = i + shift
        c = _to_fraction(c)
        if e == 0:
            mono = ""
        elif e == 1:
            mono = "v"
        else:
            mono = f"v^{e}"
        if mono and c == 1:
            body = mono
        elif mono and c == -1:
            body = "-" + mono
        elif mono:
            body = f"{c}*{mono}"
        else:
            body = str(c)
        terms.append(body)
    if not terms:
        return "0"
    return " + ".join(terms).replace("+ -", "- ")


class Scalar:
    """Element of Q(v) in canonical reduced form."""

    __slots__ = ("num", "den", "shift", "_hash")

    def __init__(self, value: Rational | "Scalar" | LaurentPoly = 0):
        if isinstance(value, Scalar):
            self.num, self.den, self.shift = value.num, value.den, value.shift
        elif isinstance(value, LaurentPoly):
            self.num, self.den, self.shift = value._poly, _ONE_POLY, value._shift
        else:
            f = _to_fraction(value)
            self.num = _Poly([_to_fmpq(f)]) if f else _ZERO_POLY
            self.den, self.shift = _ONE_POLY, 0
        self._hash = None

    @classmethod
    def _make(cls, num, den, shift: int, reduce: bool = True) -> "Scalar":
        out = cls.__new__(cls)
        out._hash = None
        if num.is_zero():
            out.num, out.den, out.shift = _ZERO_POLY, _ONE_POLY, 0
            return out
        if reduce and not den.is_one():
            g = num.gcd(den)
            if not g.is_one():
                num, den = num // g, den // g
        if num.coeffs()[0] == 0:
            k = _valuation(num)
            num = num.right_shift(k)
            shift += k
        lc = den.leading_coefficient()
        if lc != 1:
            num, den = num / lc, den / lc
        out.num, out.den, out.shift = num, den, shift
        return out

    @classmethod
    def from_laurent(cls, coeffs: Mapping[int, Rational]) -> "Scalar":
        return cls(LaurentPoly(coeffs))

    @classmethod
    def fraction(cls, num: "Scalar", den: "Scalar") -> "Scalar":
        return _coerce(num) / _coerce(den)

    # -- inspection -------------------------------------------------------
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_laurent(self) -> bool:
        return self.den.is_one()

    def is_constant(self) -> bool:
        return self.shift == 0 and self.den.is_one() and self.num.degree() <= 0

    @property
    def numerator(self) -> LaurentPoly:
        return LaurentPoly._raw(self.num, self.shift)

    @property
    def denominator(self) -> LaurentPoly:
        return LaurentPoly._raw(self.den, 0)

    def exponents(self) -> set[int]:
        """All v-exponents occurring in numerator and denominator."""
        out = {self.shift + i for i, c in enumerate(self.num.coeffs()) if c != 0}
        out |= {i for i, c in enumerate(self.den.coeffs()) if c != 0}
        return out

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not a constant")
        return _to_fraction(self.num.coeffs()[0]) if not self.is_zero() else Fraction(0)

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other) -> "Scalar":
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if self.num.is_zero():
            return other
        if other.num.is_zero():
            return self
        s1, s2 = self.shift, other.shift
        n1, n2 = self.num, other.num
        if s1 > s2:
            n1, s = n1.left_shift(s1 - s2), s2
        elif s2 > s1:
            n2, s = n2.left_shift(s2 - s1), s1
        else:
            s = s1
        if self.den == other.den:
            return Scalar._make(n1 + n2, self.den, s)
        return Scalar._make(n1 * other.den + n2 * self.den, self.den * other.den, s)

    __radd__ = __add__

    def __neg__(self) -> "Scalar":
        out = Scalar.__new__(Scalar)
        out.num, out.den, out.shift, out._hash = -self.num, self.den, self.shift, None
        return out

    def __sub__(self, other) -> "Scalar":
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "Scalar":
        return _coerce(other) - self

    def __mul__(self, other) -> "Scalar":
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if self.num.is_zero() or other.num.is_zero():
            return ZERO
        d1, d2 = self.den, other.den
        n1, n2 = self.num, other.num
        if d1.is_one() and d2.is_one():
            return Scalar._make(n1 * n2, _ONE_POLY, self.shift + other.shift, reduce=False)
        # inputs are reduced, so cross cancellation suffices
        if not d2.is_one():
            g = n1.gcd(d2)
            if not g.is_one():
                n1, d2 = n1 // g, d2 // g
        if not d1.is_one():
            g = n2.gcd(d1)
            if not g.is_one():
                n2, d1 = n2 // g, d1 // g
        return Scalar._make(n1 * n2, d1 * d2, self.shift + other.shift, reduce=False)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(v)")
        return Scalar._make(self.den, self.num, -self.shift, reduce=False)

    def __truediv__(self, other) -> "Scalar":
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other) -> "Scalar":
        return _coerce(other) * self.inverse()

    def __pow__(self, n: int) -> "Scalar":
        if n < 0:
            return self.inverse() ** (-n)
        if n == 0:
            return ONE
        return Scalar._make(self.num**n, self.den**n, self.shift * n, reduce=False)

    # -- comparison -------------------------------------------------------
    def __eq__(self, other) -> bool:
        other = _coerce(other)
        if other is NotImplemented:
            return False
        return (
            self.shift == other.shift
            and self.num == other.num
            and self.den == other.den
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(
                (self.shift, tuple(self.num.coeffs()), tuple(self.den.coeffs()))
            )
        return self._hash

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def __repr__(self) -> str:
        return f"Scalar({self})"

    def __str__(self) -> str:
        top = _poly_str(self.num, self.shift)
        if self.den.is_one():
            return top
        return f"({top})/({_poly_str(self.den, 0)})"

    # -- evaluation -------------------------------------------------------
    def evaluate_v(self, v: Rational) -> Fraction:
        """Value at a rational v; raises PoleAtSample on a vanishing denominator."""
        x = _to_fmpq(v)
        d = self.den(x)
        if d == 0:
            raise PoleAtSample(f"denominator of {self} vanishes at v={v}")
        if self.num.is_zero():
            return Fraction(0)
        if x == 0:
            if self.shift < 0:
                raise PoleAtSample(f"{self} has a pole at v=0")
            if self.shift > 0:
                return Fraction(0)
        return _to_fraction(self.num(x) * x**self.shift / d)


def _coerce(x):
    if isinstance(x, Scalar):
        return x
    if isinstance(x, (int, Fraction)):
        return Scalar(x)
    if isinstance(x, LaurentPoly):
        return Scalar(x)
    return NotImplemented


def as_scalar(x) -> Scalar:
    out = _coerce(x)
    if out is NotImplemented:
        raise TypeError(f"cannot interpret {x!r} as an element of Q(v)")
    return out


ZERO = Scalar(0)
ONE = Scalar(1)
v = Scalar._make(_Poly([1]), _ONE_POLY, 1)
q = v * v


def vpow(n: int) -> Scalar:
    """v**n for any integer n."""
    return Scalar._make(_Poly([1]), _ONE_POLY, n, reduce=False)


def qpow(x: Rational) -> Scalar:
    """q**x where 2x is an integer."""
    x = _to_fraction(x)
    if (2 * x).denominator != 1:
        raise ValueError(f"q-exponent {x} is not a half-integer")
    return vpow(int(2 * x))


def _half(j) -> Fraction:
    j = _to_fraction(j)
    if (2 * j).denominator != 1:
        raise ValueError(f"{j} is not an integer or half-integer")
    return j


def qint(n: Rational) -> Scalar:
    """The q-number [n]_q = (q^n - q^-n)/(q - q^-1); n may be a half-integer."""
    n = _half(n)
    if n < 0:
        return -qint(-n)
    if n.denominator == 1:
        k = int(n)
        # [k]_q = q^(k-1) + q^(k-3) + ... + q^(1-k)
        return Scalar.from_laurent({2 * (k - 1 - 2 * i): 1 for i in range(k)})
    m = int(2 * n)
    return (vpow(m) - vpow(-m)) / (vpow(2) - vpow(-2))


def chi(j: Rational) -> Scalar:
    """Casimir eigenvalue q^(2j+1) + q^(-2j-1) on the spin-j irrep."""
    j = _half(j)
    if j < 0:
        raise ValueError(f"spin must be nonnegative, got {j}")
    e = int(2 * (2 * j + 1))
    return Scalar.from_laurent({e: 1, -e: 1})


def chi_tilde(j: Rational) -> Scalar:
    """Tilde-transformed Casimir eigenvalue [j]_q [j+1]_q."""
    j = _half(j)
    if j < 0:
        raise ValueError(f"spin must be nonnegative, got {j}")
    return qint(j) * qint(j + 1)


def qfactorial(n: int) -> Scalar:
    out = ONE
    for k in range(1, n + 1):
        out = out * qint(k)
    return out


# ---------------------------------------------------------------------------
# sample points
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SamplePoint:
    """A rational value of q (and optionally of v = q**(1/2)).

    Values 0 and +-1 are excluded: a rational other than these is never a
    root of unity.
    """

    value: Fraction
    v: Fraction | None = None

    def __post_init__(self):
        object.__setattr__(self, "value", _to_fraction(self.value))
        if self.v is not None:
            object.__setattr__(self, "v", _to_fraction(self.v))
            if self.v * self.v != self.value:
                raise ValueError("v must square to q")
        if self.value in (0, 1, -1) or (self.v is not None and self.v in (0, 1, -1)):
            # q - q^-1 and friends vanish here; treat it like any other pole
            raise PoleAtSample(f"sample point {self.value} is forbidden")

    @classmethod
    def from_v(cls, v: Rational) -> "SamplePoint":
        v = _to_fraction(v)
        return cls(v * v, v)


def eval_at(s: Scalar, p: SamplePoint) -> Fraction:
    """Exact value of ``s`` at the sample point ``p``.

    If ``p`` carries a value of v it is used.  Otherwise ``p.value`` is read
    as q when every v-exponent of ``s`` is even, and as v when some exponent
    is odd.
    """
    s = as_scalar(s)
    if p.v is not None:
        return s.evaluate_v(p.v)
    if all(e % 2 == 0 for e in s.exponents()):
        num = _Poly(s.num.coeffs()[::2]) if not s.num.is_zero() else _ZERO_POLY
        den = _Poly(s.den.coeffs()[::2])
        x = _to_fmpq(p.value)
        d = den(x)
        if d == 0:
            raise PoleAtSample(f"denominator of {s} vanishes at q={p.value}")
        if num.is_zero():
            return Fraction(0)
        return _to_fraction(num(x) * x ** (s.shift // 2) / d)
    return s.evaluate_v(p.value)


def limit_q_to_1(s: Scalar) -> Fraction:
    """Value at v = 1 (hence q = 1) of a canonical fraction."""
    s = as_scalar(s)
    one = flint.fmpq(1)
    d = s.den(one)
    if d == 0:
        raise PoleAtOne(f"{s} has a pole at q=1")
    return _to_fraction(s.num(one) / d)


def random_sample_points(
    rng: random.Random, count: int, bound: int = 1000
) -> list[SamplePoint]:
    """Distinct random points with v = a/b, |a|, b <= bound."""
    out: list[SamplePoint] = []
    seen = set()
    while len(out) < count:
        a = rng.randint(-bound, bound)
        b = rng.randint(1, bound)
        x = Fraction(a, b)
        if x in (0, 1, -1) or x in seen:
            continue
        seen.add(x)
        out.append(SamplePoint.from_v(x))
    return out


def sum_scalars(items: Iterable[Scalar]) -> Scalar:
    total = ZERO
    for x in items:
        total = total + x
    return total
