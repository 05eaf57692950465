"""Exact Gaussian-rational scalars.

Series internals store plain ``gmpy2.mpq`` values for real numbers and only
fall back to :class:`Coeff` when an imaginary part is present, so real data
never pays for complex arithmetic.  Every arithmetic result is normalized the
same way.  Public accessors hand out :class:`Coeff` objects via
:func:`as_coeff`.
"""

from __future__ import annotations

from fractions import Fraction

import gmpy2
from gmpy2 import mpq

__all__ = [
    "Coeff",
    "scalar",
    "as_coeff",
    "qsqrt",
    "rational_sqrt",
    "sort_key",
    "fmt",
    "parse_rational",
    "is_rational",
    "ZERO",
    "ONE",
]

_MPQ = type(mpq(0))


class Coeff:
    """A Gaussian rational ``re + im*i`` with exact ``mpq`` parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, Coeff):
            re, im = re.re, re.im + _q(im)
        self.re = _q(re)
        self.im = _q(im)

    # arithmetic returns normalized scalars (mpq when the result is real)
    def __add__(self, other):
        o = _pair(other)
        if o is None:
            return NotImplemented
        return _mk(self.re + o[0], self.im + o[1])

    __radd__ = __add__

    def __sub__(self, other):
        o = _pair(other)
        if o is None:
            return NotImplemented
        return _mk(self.re - o[0], self.im - o[1])

    def __rsub__(self, other):
        o = _pair(other)
        if o is None:
            return NotImplemented
        return _mk(o[0] - self.re, o[1] - self.im)

    def __mul__(self, other):
        o = _pair(other)
        if o is None:
            return NotImplemented
        a, b = self.re, self.im
        c, d = o
        return _mk(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _pair(other)
        if o is None:
            return NotImplemented
        c, d = o
        n = c * c + d * d
        if not n:
            raise ZeroDivisionError("division by zero Gaussian rational")
        a, b = self.re, self.im
        return _mk((a * c + b * d) / n, (b * c - a * d) / n)

    def __rtruediv__(self, other):
        o = _pair(other)
        if o is None:
            return NotImplemented
        return Coeff(*o) / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return 1 / (self**-k)
        result = mpq(1)
        base = _mk(self.re, self.im)
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __neg__(self):
        return _mk(-self.re, -self.im)

    def __pos__(self):
        return self

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        o = _pair(other)
        if o is None:
            return NotImplemented
        return self.re == o[0] and self.im == o[1]

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def conjugate(self):
        return _mk(self.re, -self.im)

    def norm(self):
        return self.re * self.re + self.im * self.im

    @property
    def real(self):
        return self.re

    @property
    def imag(self):
        return self.im

    def __repr__(self):
        return f"Coeff({fmt(self)})"

    def __str__(self):
        return fmt(self)


def _q(x) -> mpq:
    if isinstance(x, _MPQ):
        return x
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, (int, str)) or type(x).__name__ == "mpz":
        return mpq(x)
    if isinstance(x, float):
        raise TypeError("floats are not exact; pass a Fraction or string")
    raise TypeError(f"cannot convert {type(x).__name__} to a rational")


def _pair(x):
    if isinstance(x, Coeff):
        return x.re, x.im
    if isinstance(x, _MPQ):
        return x, _Z
    if isinstance(x, (int, Fraction)) or type(x).__name__ == "mpz":
        return _q(x), _Z
    return None


def _mk(re, im):
    if im:
        c = Coeff.__new__(Coeff)
        c.re = re
        c.im = im
        return c
    return re


_Z = mpq(0)
ZERO = mpq(0)
ONE = mpq(1)


def scalar(x):
    """Normalize ``x`` to the internal scalar type (mpq, or Coeff if complex)."""
    if isinstance(x, Coeff):
        return _mk(x.re, x.im)
    if isinstance(x, complex):
        raise TypeError("complex floats are not exact")
    return _q(x)


def as_coeff(x) -> Coeff:
    """Wrap any scalar as a public :class:`Coeff`."""
    if isinstance(x, Coeff):
        return x
    return Coeff(x)


def is_rational(x) -> bool:
    return not isinstance(x, Coeff) or not x.im


def rational_sqrt(q) -> mpq | None:
    """Exact square root of a nonnegative rational, or None."""
    q = _q(q)
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    if not (gmpy2.is_square(n) and gmpy2.is_square(d)):
        return None
    return mpq(gmpy2.isqrt(n), gmpy2.isqrt(d))


def qsqrt(x):
    """Square root in Q(i) on the canonical branch, or None if x is not a square.

    The branch has positive real part; a purely imaginary root is taken with
    positive imaginary part.
    """
    a, b = _pair(x) if _pair(x) is not None else _pair(scalar(x))
    if not b:
        if a >= 0:
            r = rational_sqrt(a)
            return None if r is None else r
        r = rational_sqrt(-a)
        return None if r is None else _mk(_Z, r)
    m = rational_sqrt(a * a + b * b)
    if m is None:
        return None
    x2 = rational_sqrt((m + a) / 2)
    y2 = rational_sqrt((m - a) / 2)
    if x2 is None or y2 is None:
        return None
    if b < 0:
        y2 = -y2
    # x2 > 0 whenever b != 0
    return _mk(x2, y2)


def sort_key(x) -> tuple:
    a, b = _pair(scalar(x)) if not isinstance(x, Coeff) else (x.re, x.im)
    return (a, b)


def _fmt_q(q: mpq) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def fmt(x) -> str:
    """Deterministic text form: ``3/4``, ``-i``, ``1/2+3i``."""
    if isinstance(x, Coeff):
        a, b = x.re, x.im
    else:
        a, b = _q(x), _Z
    if not b:
        return _fmt_q(a)
    if b == 1:
        ims = "i"
    elif b == -1:
        ims = "-i"
    else:
        ims = _fmt_q(b) + "i"
    if not a:
        return ims
    if ims.startswith("-"):
        return f"{_fmt_q(a)}{ims}"
    return f"{_fmt_q(a)}+{ims}"


def parse_rational(text: str) -> mpq:
    """Parse ``-3``, ``3/4`` or ``-5/3`` exactly."""
    t = text.strip()
    try:
        return mpq(Fraction(t))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational number: {text!r}") from exc
