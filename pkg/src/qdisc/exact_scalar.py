"""Exact scalars: rationals, one real quadratic extension Q(sqrt d), and complex pairs.

Rationals are :class:`fractions.Fraction`.  Elements of Q(sqrt d) are
:class:`QuadExt` with the radicand normalised to a square-free integer, so
``QuadExt.sqrt(Fraction(33, 100))`` is ``(0) + (1/10)*sqrt(33)``.  Mixing two
different radicands in one operation raises :class:`MixedRadicalError`.
"""
from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Union

Rational = Fraction


class InvalidFloat(ValueError):
    """Raised when a non-finite float is converted to a rational."""


class MixedRadicalError(ValueError):
    """Raised when two different square roots meet in one operation."""


def float_to_rational(x) -> Fraction:
    """Exact rational value of a binary float (no rounding)."""
    x = float(x)
    if not math.isfinite(x):
        raise InvalidFloat(f"cannot convert non-finite float {x!r}")
    return Fraction(x)


def parse_rational(text) -> Fraction:
    """Parse ``"num/den"``, an integer, or a decimal string such as ``"0.67"`` exactly."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, float):
        raise TypeError("floats are ambiguous here; pass a string or use float_to_rational")
    return Fraction(str(text).strip())


def rational_to_str(q: Fraction) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def _squarefree_split(n: int) -> tuple[int, int]:
    """Write ``n = s**2 * f`` with ``f`` square-free; return ``(s, f)``."""
    if n <= 0:
        raise ValueError("radicand must be positive")
    s, f = 1, 1
    p = 2
    while p * p <= n:
        while n % (p * p) == 0:
            n //= p * p
            s *= p
        if n % p == 0:
            n //= p
            f *= p
        p += 1 if p == 2 else 2
    return s, f * n


def _coerce(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, _RationalABC)):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


_ZERO = Fraction(0)


class QuadExt:
    """Element ``a + b*sqrt(d)`` of Q(sqrt d), ``d`` a square-free integer > 1."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b, d: int):
        d = int(d)
        if d < 2 or _squarefree_split(d)[0] != 1:
            raise ValueError(f"radicand must be a square-free integer > 1, got {d}")
        self.a = _coerce(a)
        self.b = _coerce(b)
        self.d = d

    @classmethod
    def sqrt(cls, r) -> Union["QuadExt", Fraction]:
        """Exact square root of a non-negative rational.

        Returns a :class:`Fraction` when ``r`` is a perfect rational square.
        """
        r = _coerce(r)
        if r < 0:
            raise ValueError("square root of a negative rational")
        if r == 0:
            return Fraction(0)
        # sqrt(p/q) = sqrt(p*q)/q
        s, f = _squarefree_split(r.numerator * r.denominator)
        coeff = Fraction(s, r.denominator)
        if f == 1:
            return coeff
        return cls(0, coeff, f)

    # arithmetic -------------------------------------------------------
    def _pair(self, other):
        """Common-field coordinates ``(a1, b1, a2, b2, d)`` or None if not exact."""
        if isinstance(other, QuadExt):
            if other.d == self.d or other.b == 0 or self.b == 0:
                d = self.d if self.b != 0 or other.b == 0 else other.d
                return self.a, self.b, other.a, other.b, d
            raise MixedRadicalError(f"sqrt({self.d}) mixed with sqrt({other.d})")
        if isinstance(other, (int, Fraction)):
            return self.a, self.b, Fraction(other), _ZERO, self.d
        return None

    def __add__(self, other):
        p = self._pair(other)
        if p is None:
            return NotImplemented
        a1, b1, a2, b2, d = p
        return _make(a1 + a2, b1 + b2, d)

    __radd__ = __add__

    def __sub__(self, other):
        p = self._pair(other)
        if p is None:
            return NotImplemented
        a1, b1, a2, b2, d = p
        return _make(a1 - a2, b1 - b2, d)

    def __rsub__(self, other):
        p = self._pair(other)
        if p is None:
            return NotImplemented
        a1, b1, a2, b2, d = p
        return _make(a2 - a1, b2 - b1, d)

    def __mul__(self, other):
        p = self._pair(other)
        if p is None:
            return NotImplemented
        a1, b1, a2, b2, d = p
        return _make(a1 * a2 + d * b1 * b2, a1 * b2 + b1 * a2, d)

    __rmul__ = __mul__

    def conjugate_radical(self) -> "QuadExt":
        return QuadExt(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        """Field norm ``a**2 - d*b**2``."""
        return self.a * self.a - self.d * self.b * self.b

    def inverse(self):
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt d)")
        return _make(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            return _make(self.a / other, self.b / other, self.d)
        if isinstance(other, QuadExt):
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.inverse() * other
        return NotImplemented

    def __neg__(self):
        return QuadExt(-self.a, -self.b, self.d)

    def __pos__(self):
        return self

    # ordering ---------------------------------------------------------
    def sign(self) -> int:
        return sign(self)

    def __eq__(self, other):
        if isinstance(other, QuadExt):
            if self.b == 0 and other.b == 0:
                return self.a == other.a
            return self.d == other.d and self.a == other.a and self.b == other.b
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __lt__(self, other):
        return sign(self - other) < 0

    def __le__(self, other):
        return sign(self - other) <= 0

    def __gt__(self, other):
        return sign(self - other) > 0

    def __ge__(self, other):
        return sign(self - other) >= 0

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def __repr__(self):
        return f"QuadExt({self.a}, {self.b}, {self.d})"

    def __str__(self):
        return f"{self.a} + {self.b}*sqrt({self.d})"


def _make(a, b, d):
    """Arithmetic result: collapses to a Fraction when the radical part vanishes."""
    if b == 0:
        return a
    return QuadExt(a, b, d)


def sign(x) -> int:
    """Exact sign of a rational or of ``a + b*sqrt(d)``."""
    if not isinstance(x, QuadExt):
        x = _coerce(x)
        return (x > 0) - (x < 0)
    sa = (x.a > 0) - (x.a < 0)
    sb = (x.b > 0) - (x.b < 0)
    if sa >= 0 and sb >= 0:
        return 1 if (sa or sb) else 0
    if sa <= 0 and sb <= 0:
        return -1
    # opposite signs: compare a^2 with b^2 d
    diff = x.a * x.a - x.b * x.b * x.d
    s = (diff > 0) - (diff < 0)
    return s if sa > 0 else -s


def sign_of_sum(terms) -> int:
    """Exact sign of a sum of rationals and elements of at most two quadratic fields.

    ``u + v`` with ``u`` in Q(sqrt d1) and ``v`` in Q(sqrt d2): if the signs
    of ``u`` and ``-v`` differ the answer is immediate; otherwise compare the
    squares, and ``u**2 - v**2`` lives in Q(sqrt d1) once ``v = c*sqrt(d2)``.
    """
    groups: dict[int, object] = {}
    rat = Fraction(0)
    for t in terms:
        if isinstance(t, QuadExt):
            if t.b == 0:
                rat += t.a
                continue
            rat += t.a
            groups[t.d] = groups.get(t.d, Fraction(0)) + t.b
        else:
            rat += _coerce(t)
    radicals = [(d, c) for d, c in groups.items() if c != 0]
    if not radicals:
        return sign(rat)
    if len(radicals) == 1:
        d, c = radicals[0]
        return sign(QuadExt(rat, c, d))
    if len(radicals) > 2:
        raise MixedRadicalError("sign of a sum with more than two radicals is not supported")
    (d1, c1), (d2, c2) = radicals
    u = QuadExt(rat, c1, d1)
    # v = c2*sqrt(d2); sign(u + v) = sign(u - w) with w = -v
    su = sign(u)
    sw = -((c2 > 0) - (c2 < 0))
    if su != sw:
        return su if su != 0 else -sw
    if su == 0:
        return 0
    # same sign s: sign(u - w) = s * sign(u^2 - w^2)
    diff = u * u - c2 * c2 * d2
    return su * sign(diff)


def rational_floor_bound(x, scale: int = 10**15) -> Fraction:
    """Largest ``k/scale`` that is ``<= x``, verified exactly."""
    if not isinstance(x, QuadExt):
        x = _coerce(x)
        return Fraction(math.floor(x * scale), scale)
    guess = Fraction(math.floor(float(x) * scale) - 2, scale)
    # walk up then back down so the result is the exact floor at this granularity
    while sign(x - (guess + Fraction(1, scale))) >= 0:
        guess += Fraction(1, scale)
    while sign(x - guess) < 0:
        guess -= Fraction(1, scale)
    return guess


class ExactComplex:
    """Complex number with exact real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re, im=0):
        self.re = re if isinstance(re, QuadExt) else _coerce(re)
        self.im = im if isinstance(im, QuadExt) else _coerce(im)

    def conjugate(self) -> "ExactComplex":
        return ExactComplex(self.re, -self.im)

    def __add__(self, other):
        other = _as_complex(other)
        if other is None:
            return NotImplemented
        return ExactComplex(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_complex(other)
        if other is None:
            return NotImplemented
        return ExactComplex(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = _as_complex(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = _as_complex(other)
        if other is None:
            return NotImplemented
        return ExactComplex(self.re * other.re - self.im * other.im,
                            self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_complex(other)
        if other is None:
            return NotImplemented
        den = other.re * other.re + other.im * other.im
        num = self * other.conjugate()
        return ExactComplex(num.re / den, num.im / den)

    def __neg__(self):
        return ExactComplex(-self.re, -self.im)

    def __eq__(self, other):
        other = _as_complex(other)
        if other is None:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"ExactComplex({self.re!r}, {self.im!r})"


def _as_complex(x):
    if isinstance(x, ExactComplex):
        return x
    if isinstance(x, (int, Fraction, QuadExt)):
        return ExactComplex(x, 0)
    return None


# serialisation -------------------------------------------------------------

def scalar_to_json(x):
    """``"num/den"`` for rationals, ``{"a", "b", "d"}`` for quadratic elements."""
    if isinstance(x, QuadExt):
        return {"a": rational_to_str(x.a), "b": rational_to_str(x.b), "d": str(x.d)}
    return rational_to_str(_coerce(x))


def scalar_from_json(obj):
    if isinstance(obj, dict):
        return QuadExt(parse_rational(obj["a"]), parse_rational(obj["b"]), int(obj["d"]))
    return parse_rational(obj)
