"""Exact Gaussian rationals.

A ``Scalar`` is ``(re + im*i) / den`` with integer ``re``, ``im`` and a
positive ``den`` sharing no common factor.  Nothing here ever rounds.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational

__all__ = ["Scalar", "as_scalar", "ZERO", "ONE", "I"]


class Scalar:
    __slots__ = ("re_num", "im_num", "den")

    def __init__(self, re=0, im=0):
        re = Fraction(re)
        im = Fraction(im)
        den = re.denominator * im.denominator // math.gcd(re.denominator, im.denominator)
        self._set(re.numerator * (den // re.denominator),
                  im.numerator * (den // im.denominator), den)

    def _set(self, a, b, d):
        g = math.gcd(a, b, d)
        if g != 1:
            a //= g
            b //= g
            d //= g
        object.__setattr__(self, "re_num", a)
        object.__setattr__(self, "im_num", b)
        object.__setattr__(self, "den", d)

    @classmethod
    def raw(cls, a: int, b: int, d: int) -> "Scalar":
        """Build from an unreduced triple; ``d`` must be positive."""
        s = object.__new__(cls)
        s._set(a, b, d)
        return s

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    @property
    def real(self) -> Fraction:
        return Fraction(self.re_num, self.den)

    @property
    def imag(self) -> Fraction:
        return Fraction(self.im_num, self.den)

    def is_zero(self) -> bool:
        return self.re_num == 0 and self.im_num == 0

    def is_real(self) -> bool:
        return self.im_num == 0

    def conjugate(self) -> "Scalar":
        return Scalar.raw(self.re_num, -self.im_num, self.den)

    def __neg__(self):
        return Scalar.raw(-self.re_num, -self.im_num, self.den)

    def __pos__(self):
        return self

    def __add__(self, other):
        o = as_scalar(other, strict=False)
        if o is None:
            return NotImplemented
        d1, d2 = self.den, o.den
        return Scalar.raw(self.re_num * d2 + o.re_num * d1,
                          self.im_num * d2 + o.im_num * d1, d1 * d2)

    __radd__ = __add__

    def __sub__(self, other):
        o = as_scalar(other, strict=False)
        if o is None:
            return NotImplemented
        d1, d2 = self.den, o.den
        return Scalar.raw(self.re_num * d2 - o.re_num * d1,
                          self.im_num * d2 - o.im_num * d1, d1 * d2)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        o = as_scalar(other, strict=False)
        if o is None:
            return NotImplemented
        a, b, c, e = self.re_num, self.im_num, o.re_num, o.im_num
        return Scalar.raw(a * c - b * e, a * e + b * c, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = as_scalar(other, strict=False)
        if o is None:
            return NotImplemented
        if o.is_zero():
            raise ZeroDivisionError("division by zero Scalar")
        # (a+bi)/d1 / ((c+ei)/d2) = (a+bi)(c-ei) d2 / (d1 (c^2+e^2))
        a, b, c, e = self.re_num, self.im_num, o.re_num, o.im_num
        norm = c * c + e * e
        return Scalar.raw((a * c + b * e) * o.den, (b * c - a * e) * o.den, self.den * norm)

    def __rtruediv__(self, other):
        return as_scalar(other) / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return ONE / (self ** -k)
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        o = as_scalar(other, strict=False)
        if o is None:
            return NotImplemented
        return self.re_num == o.re_num and self.im_num == o.im_num and self.den == o.den

    def __hash__(self):
        if self.im_num == 0:
            return hash(Fraction(self.re_num, self.den))
        return hash((self.re_num, self.im_num, self.den))

    def __bool__(self):
        return not self.is_zero()

    def sign(self) -> int:
        """Sign of a real scalar."""
        if self.im_num:
            raise ValueError(f"sign of non-real scalar {self}")
        return (self.re_num > 0) - (self.re_num < 0)

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __complex__(self):
        return complex(self.re_num / self.den, self.im_num / self.den)

    def __float__(self):
        if self.im_num:
            raise TypeError("cannot convert non-real Scalar to float")
        return self.re_num / self.den

    def __str__(self):
        re, im = self.real, self.imag
        if im == 0:
            return str(re)
        if re == 0:
            return f"{im}i"
        sign = "+" if im > 0 else "-"
        return f"{re}{sign}{abs(im)}i"

    def __repr__(self):
        return f"Scalar({self})"

    @classmethod
    def parse(cls, text: str) -> "Scalar":
        """Parse ``"3/4"``, ``"-2i"``, ``"1/2+3/4i"`` and similar."""
        t = text.strip().replace(" ", "")
        if not t:
            raise ValueError("empty scalar")
        if t.endswith("i"):
            body = t[:-1]
            # split at the last sign that is not leading
            cut = max(body.rfind("+"), body.rfind("-"))
            if cut > 0:
                re_part, im_part = body[:cut], body[cut:]
            else:
                re_part, im_part = "0", body
            if im_part in ("", "+", "-"):
                im_part += "1"
            return cls(Fraction(re_part), Fraction(im_part))
        return cls(Fraction(t))


def as_scalar(x, strict: bool = True):
    if isinstance(x, Scalar):
        return x
    if isinstance(x, (int, Fraction, Rational)):
        f = Fraction(x)
        return Scalar.raw(f.numerator, 0, f.denominator)
    if isinstance(x, complex):
        return Scalar(Fraction(x.real), Fraction(x.imag))
    if isinstance(x, float):
        return Scalar(Fraction(x))
    if strict:
        raise TypeError(f"cannot convert {type(x).__name__} to Scalar")
    return None


ZERO = Scalar.raw(0, 0, 1)
ONE = Scalar.raw(1, 0, 1)
I = Scalar.raw(0, 1, 1)
