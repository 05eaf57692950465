"""Truncated formal power series in one and two variables with exact coefficients.

A :class:`Series2` of order ``N`` stores every monomial ``z1^i z2^j`` with
``i + j <= N``, grouped by total degree: ``comps[d][j]`` is the coefficient of
``z1^(d-j) z2^j``.  Working degree by degree lets inversion, square roots,
logarithms, exponentials and real powers run as single-pass recurrences over
homogeneous components instead of Newton iterations.

``precision_loss`` counts how many top degrees are unreliable because an
operation (a derivative, a division by a monomial) consumed them.  Callers
compare series only up to :attr:`Series2.certified_order`.
"""

from __future__ import annotations

import gmpy2
from gmpy2 import mpq

from .coeff import Coeff, ONE, ZERO, as_coeff, fmt, qsqrt, scalar
from .errors import NonSquareConstant, NotASquare, NotAUnit, SeriesError, UnsupportedSqrt

__all__ = [
    "DEFAULT_ORDER",
    "Series1",
    "Series2",
    "NoExactRoot",
    "ps_inv",
    "ps_sqrt",
    "ps_log",
    "ps_exp",
    "ps_pow",
    "ps_compose",
    "ps_shift",
    "exact_power",
]

DEFAULT_ORDER = 16


class NoExactRoot(SeriesError):
    """A constant term has no exact rational power in the Gaussian rationals."""


# ---------------------------------------------------------------------------
# homogeneous component helpers


def _czero(d: int) -> list:
    return [ZERO] * (d + 1)


def _is_zero(c) -> bool:
    for x in c:
        if x:
            return False
    return True


def _cmul_into(acc: list, a, b) -> None:
    """acc += a*b for homogeneous coefficient lists a, b."""
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            if y:
                acc[i + j] = acc[i + j] + x * y


def _cscale(c, k) -> list:
    return [x * k if x else ZERO for x in c]


def exact_power(c, r: mpq):
    """``c**r`` for a scalar c and rational r, when it is a Gaussian rational."""
    c = scalar(c)
    r = mpq(r)
    if not c:
        if r > 0:
            return ZERO
        raise NoExactRoot("zero to a non-positive power")
    p, q = int(r.numerator), int(r.denominator)
    if q == 1:
        return c**p if not isinstance(c, Coeff) else Coeff(c) ** p
    if c == 1:
        return ONE
    if isinstance(c, Coeff):
        if q == 2:
            root = qsqrt(c)
            if root is not None:
                return root**p
        raise NoExactRoot(f"({fmt(c)})^({p}/{q}) is not a Gaussian rational")
    if c < 0:
        if q == 2:
            root = qsqrt(c)
            if root is not None:
                return Coeff(root) ** p
        raise NoExactRoot(f"({fmt(c)})^({p}/{q}) is not a Gaussian rational")
    n_root, n_exact = gmpy2.iroot(gmpy2.mpz(c.numerator), q)
    d_root, d_exact = gmpy2.iroot(gmpy2.mpz(c.denominator), q)
    if not (n_exact and d_exact):
        raise NoExactRoot(f"({fmt(c)})^({p}/{q}) is not a Gaussian rational")
    return mpq(n_root, d_root) ** p


# ---------------------------------------------------------------------------


class Series2:
    """Truncated power series in ``z1, z2`` up to total degree ``order``."""

    __slots__ = ("order", "comps", "precision_loss")

    def __init__(self, order: int, coeffs=None, precision_loss: int = 0):
        if order < 0:
            raise SeriesError("order must be nonnegative")
        comps = [_czero(d) for d in range(order + 1)]
        if coeffs:
            for (i, j), c in coeffs.items():
                if i < 0 or j < 0:
                    raise SeriesError(f"negative exponent {(i, j)}")
                if i + j <= order:
                    comps[i + j][j] = comps[i + j][j] + scalar(c)
        self.order = order
        self.comps = tuple(tuple(c) for c in comps)
        self.precision_loss = precision_loss

    @classmethod
    def _raw(cls, order: int, comps, loss: int = 0) -> "Series2":
        s = cls.__new__(cls)
        s.order = order
        s.comps = tuple(tuple(c) for c in comps)
        s.precision_loss = loss
        return s

    @classmethod
    def zero(cls, order: int = DEFAULT_ORDER) -> "Series2":
        return cls(order)

    @classmethod
    def const(cls, c, order: int = DEFAULT_ORDER) -> "Series2":
        return cls(order, {(0, 0): c})

    @classmethod
    def var(cls, k: int, order: int = DEFAULT_ORDER) -> "Series2":
        if k not in (1, 2):
            raise SeriesError("variables are z1 and z2")
        return cls(order, {(1, 0) if k == 1 else (0, 1): 1})

    @classmethod
    def from_series1(cls, s: "Series1", var: int, order: int | None = None) -> "Series2":
        """Embed a univariate series as a function of ``z1`` or ``z2``."""
        order = s.order if order is None else order
        data = {}
        for k, c in enumerate(s.coeffs[: order + 1]):
            if c:
                data[(k, 0) if var == 1 else (0, k)] = c
        loss = s.precision_loss + max(0, order - s.order)
        return cls(order, data, loss)

    # -- inspection ---------------------------------------------------------

    @property
    def certified_order(self) -> int:
        return self.order - self.precision_loss

    def __getitem__(self, ij):
        i, j = ij
        if i < 0 or j < 0 or i + j > self.order:
            return ZERO
        return self.comps[i + j][j]

    @property
    def coeffs(self) -> dict:
        """Nonzero coefficients as ``{(i, j): Coeff}``."""
        return {
            (d - j, j): as_coeff(c)
            for d, comp in enumerate(self.comps)
            for j, c in enumerate(comp)
            if c
        }

    @property
    def constant(self):
        return self.comps[0][0]

    def is_unit(self) -> bool:
        return bool(self.comps[0][0])

    def is_zero(self, upto: int | None = None) -> bool:
        upto = self.certified_order if upto is None else upto
        return all(_is_zero(self.comps[d]) for d in range(min(upto, self.order) + 1))

    def valuation(self, upto: int | None = None) -> int | None:
        upto = self.certified_order if upto is None else upto
        for d in range(min(upto, self.order) + 1):
            if not _is_zero(self.comps[d]):
                return d
        return None

    def eq_to(self, other: "Series2", k: int | None = None) -> bool:
        """Coefficients of total degree <= k agree (k defaults to the certified order)."""
        if isinstance(other, (int, mpq, Coeff)):
            other = Series2.const(other, self.order)
        limit = min(self.certified_order, other.certified_order)
        if k is None:
            k = limit
        elif k > limit:
            raise SeriesError(f"cannot compare to order {k}; only {limit} is certified")
        for d in range(k + 1):
            if self.comps[d] != other.comps[d]:
                return False
        return True

    def __eq__(self, other):
        if not isinstance(other, Series2):
            return NotImplemented
        return (
            self.order == other.order
            and self.precision_loss == other.precision_loss
            and self.comps == other.comps
        )

    def __hash__(self):
        return hash((self.order, self.precision_loss, self.comps))

    def to_text(self, names=("z1", "z2"), upto: int | None = None) -> str:
        upto = self.certified_order if upto is None else upto
        parts = []
        for d in range(min(upto, self.order) + 1):
            for j, c in enumerate(self.comps[d]):
                if not c:
                    continue
                mono = []
                for name, e in ((names[0], d - j), (names[1], j)):
                    if e == 1:
                        mono.append(name)
                    elif e > 1:
                        mono.append(f"{name}^{e}")
                cs = fmt(c)
                if isinstance(c, Coeff):
                    cs = f"({cs})"
                if mono:
                    term = "*".join(mono) if cs == "1" else ("-" + "*".join(mono) if cs == "-1" else cs + "*" + "*".join(mono))
                else:
                    term = cs
                parts.append(term)
        if not parts:
            return "0"
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    def __repr__(self):
        return f"Series2({self.to_text()} + O({self.certified_order + 1}))"

    # -- ring operations ----------------------------------------------------

    def _coerce(self, other) -> "Series2":
        if isinstance(other, Series2):
            if other.order != self.order:
                raise SeriesError(f"order mismatch: {self.order} vs {other.order}")
            return other
        return Series2.const(other, self.order)

    def __add__(self, other):
        if not isinstance(other, Series2):
            try:
                c = scalar(other)
            except TypeError:
                return NotImplemented
            comps = list(self.comps)
            comps[0] = (comps[0][0] + c,)
            return Series2._raw(self.order, comps, self.precision_loss)
        o = self._coerce(other)
        comps = [
            tuple(x + y for x, y in zip(a, b)) for a, b in zip(self.comps, o.comps)
        ]
        return Series2._raw(self.order, comps, max(self.precision_loss, o.precision_loss))

    __radd__ = __add__

    def __neg__(self):
        return Series2._raw(
            self.order, [tuple(-x for x in c) for c in self.comps], self.precision_loss
        )

    def __sub__(self, other):
        if isinstance(other, Series2):
            return self + (-self._coerce(other))
        try:
            return self + (-scalar(other))
        except TypeError:
            return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "Series2":
        c = scalar(c)
        return Series2._raw(self.order, [_cscale(comp, c) for comp in self.comps], self.precision_loss)

    def __mul__(self, other):
        if not isinstance(other, Series2):
            try:
                return self.scale(other)
            except TypeError:
                return NotImplemented
        o = self._coerce(other)
        n = self.order
        res = [_czero(d) for d in range(n + 1)]
        b_nz = [not _is_zero(c) for c in o.comps]
        for da, ca in enumerate(self.comps):
            if _is_zero(ca):
                continue
            for db in range(n - da + 1):
                if b_nz[db]:
                    _cmul_into(res[da + db], ca, o.comps[db])
        return Series2._raw(n, res, max(self.precision_loss, o.precision_loss))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Series2):
            return self * ps_inv(other)
        return self.scale(ONE / scalar(other))

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        result = Series2.const(1, self.order)
        result.precision_loss = self.precision_loss
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def deriv(self, var: int) -> "Series2":
        """Partial derivative in ``z1`` (var=1) or ``z2`` (var=2)."""
        n = self.order
        res = [_czero(d) for d in range(n + 1)]
        for d in range(1, n + 1):
            for j, c in enumerate(self.comps[d]):
                if not c:
                    continue
                i = d - j
                if var == 1 and i:
                    res[d - 1][j] = c * i
                elif var == 2 and j:
                    res[d - 1][j - 1] = c * j
        return Series2._raw(n, res, self.precision_loss + 1)

    def integrate(self, var: int) -> "Series2":
        """Formal antiderivative with zero constant term in the integrated variable."""
        n = self.order
        res = [_czero(d) for d in range(n + 1)]
        for d in range(n):
            for j, c in enumerate(self.comps[d]):
                if not c:
                    continue
                i = d - j
                if var == 1:
                    res[d + 1][j] = c / (i + 1)
                else:
                    res[d + 1][j + 1] = c / (j + 1)
        return Series2._raw(n, res, self.precision_loss)

    def euler(self) -> "Series2":
        """``z1 d/dz1 + z2 d/dz2``: multiplies each degree-d part by d."""
        return Series2._raw(
            self.order, [_cscale(c, d) for d, c in enumerate(self.comps)], self.precision_loss
        )

    def truncate(self, order: int) -> "Series2":
        if order > self.order:
            comps = list(self.comps) + [_czero(d) for d in range(self.order + 1, order + 1)]
            return Series2._raw(order, comps, self.precision_loss + order - self.order)
        return Series2._raw(order, self.comps[: order + 1], max(0, self.precision_loss - (self.order - order)))

    def with_loss(self, loss: int) -> "Series2":
        return Series2._raw(self.order, self.comps, loss)

    def divide_monomial(self, a: int, b: int) -> "Series2":
        """Exact quotient by ``z1^a z2^b``; raises if it does not divide."""
        n = self.order
        res = [_czero(d) for d in range(n + 1)]
        for d, comp in enumerate(self.comps):
            for j, c in enumerate(comp):
                if not c:
                    continue
                i = d - j
                if i < a or j < b:
                    raise SeriesError(f"z1^{a} z2^{b} does not divide the series")
                res[d - a - b][j - b] = c
        return Series2._raw(n, res, self.precision_loss + a + b)

    def times_monomial(self, a: int, b: int) -> "Series2":
        n = self.order
        res = [_czero(d) for d in range(n + 1)]
        for d, comp in enumerate(self.comps):
            if d + a + b > n:
                break
            for j, c in enumerate(comp):
                if c:
                    res[d + a + b][j + b] = c
        return Series2._raw(n, res, self.precision_loss)

    def swap(self) -> "Series2":
        """Exchange the roles of ``z1`` and ``z2``."""
        return Series2._raw(self.order, [tuple(reversed(c)) for c in self.comps], self.precision_loss)

    def monomial_valuation(self) -> tuple[int, int] | None:
        """Largest ``(a, b)`` with ``z1^a z2^b`` dividing the certified part."""
        a = b = None
        for d in range(self.certified_order + 1):
            for j, c in enumerate(self.comps[d]):
                if c:
                    i = d - j
                    a = i if a is None else min(a, i)
                    b = j if b is None else min(b, j)
        if a is None:
            return None
        return a, b

    # -- restriction and substitution ---------------------------------------

    def axis(self, var: int) -> "Series1":
        """Restriction to the ``z1`` axis (var=1, z2=0) or the ``z2`` axis."""
        coeffs = [c[0] if var == 1 else c[-1] for c in self.comps]
        return Series1(self.order, coeffs, self.precision_loss)

    def along(self, v1, v2, base: tuple = (0, 0)) -> "Series1":
        """The univariate series ``t -> s(base + t*(v1, v2))``; base must be the origin."""
        if base != (0, 0):
            return ps_shift(self, base).along(v1, v2)
        v1, v2 = scalar(v1), scalar(v2)
        p1 = [ONE]
        p2 = [ONE]
        for _ in range(self.order):
            p1.append(p1[-1] * v1)
            p2.append(p2[-1] * v2)
        out = []
        for d, comp in enumerate(self.comps):
            acc = ZERO
            for j, c in enumerate(comp):
                if c:
                    acc = acc + c * p1[d - j] * p2[j]
            out.append(acc)
        return Series1(self.order, out, self.precision_loss)

    def subs(self, x1: "Series2", x2: "Series2") -> "Series2":
        """Composition ``s(x1(z), x2(z))`` for series x1, x2 without constant term."""
        if x1.constant or x2.constant:
            raise SeriesError("substituted series must have zero constant term")
        n = self.order
        if x1.order != x2.order:
            raise SeriesError("substituted series must share an order")
        m = x1.order
        pw2 = [Series2.const(1, m)]
        for _ in range(n):
            pw2.append(pw2[-1] * x2)
        pw1 = Series2.const(1, m)
        total = Series2.zero(m)
        for i in range(n + 1):
            inner = Series2.zero(m)
            for j in range(n - i + 1):
                c = self.comps[i + j][j]
                if c:
                    inner = inner + pw2[j].scale(c)
            if not inner.is_zero(m):
                total = total + pw1 * inner
            if i < n:
                pw1 = pw1 * x1
        loss = max(x1.precision_loss, x2.precision_loss, self.precision_loss + max(0, m - n))
        return total.with_loss(loss)

    def inv(self):
        return ps_inv(self)

    def sqrt(self):
        return ps_sqrt(self)

    def log(self):
        return ps_log(self)

    def exp(self):
        return ps_exp(self)


# ---------------------------------------------------------------------------
# transcendental operations on Series2


def _unit_split(u: Series2):
    c = u.constant
    if not c:
        raise NotAUnit("series has zero constant term")
    return c, u.scale(ONE / c)


def ps_inv(u: Series2) -> Series2:
    """Multiplicative inverse of a unit."""
    c0 = u.constant
    if not c0:
        raise NotAUnit("cannot invert a series with zero constant term")
    inv0 = ONE / c0
    n = u.order
    comps = u.comps
    nz = [not _is_zero(c) for c in comps]
    out = [[inv0]]
    for d in range(1, n + 1):
        acc = _czero(d)
        for k in range(1, d + 1):
            if nz[k]:
                _cmul_into(acc, comps[k], out[d - k])
        out.append(_cscale(acc, -inv0))
    return Series2._raw(n, out, u.precision_loss)


def _unit_sqrt(u: Series2, root0) -> Series2:
    n = u.order
    comps = u.comps
    half = ONE / (2 * root0)
    out = [[root0]]
    for d in range(1, n + 1):
        acc = _czero(d)
        for k in range(1, d):
            _cmul_into(acc, out[k], out[d - k])
        out.append([(x - y) * half for x, y in zip(comps[d], acc)])
    return Series2._raw(n, out, u.precision_loss)


def ps_sqrt(s: Series2) -> Series2:
    """Square root on the canonical branch.

    A monomial factor ``z1^a z2^b`` is split off first; odd ``a`` or ``b``, or
    a leading coefficient that is not a square in Q(i), raises NotASquare
    (the latter as its subclass NonSquareConstant).
    """
    val = s.monomial_valuation()
    if val is None:
        return Series2.zero(s.order).with_loss(s.precision_loss)
    a, b = val
    if not s[a, b]:
        raise UnsupportedSqrt("leading form is not a monomial times a unit")
    if a % 2 or b % 2:
        raise NotASquare(f"odd monomial valuation z1^{a} z2^{b}")
    unit = s.divide_monomial(a, b) if (a or b) else s
    root0 = qsqrt(unit.constant)
    if root0 is None:
        raise NonSquareConstant(f"leading coefficient {fmt(unit.constant)} is not a square in Q(i)")
    r = _unit_sqrt(unit, root0)
    if a or b:
        r = r.times_monomial(a // 2, b // 2).with_loss(s.precision_loss + (a + b) // 2)
    return r


def ps_log(u: Series2) -> Series2:
    """``log(u / u(0))``: the constant of the unit is split off, result has zero constant term."""
    c, m = _unit_split(u)
    q = m.euler() * ps_inv(m)
    comps = [_czero(0)] + [
        [x / d if x else ZERO for x in q.comps[d]] for d in range(1, u.order + 1)
    ]
    return Series2._raw(u.order, comps, u.precision_loss)


def ps_exp(s: Series2) -> Series2:
    """Exponential of a series with zero constant term."""
    if s.constant:
        raise SeriesError("ps_exp needs a zero constant term")
    n = s.order
    es = [_cscale(c, d) for d, c in enumerate(s.comps)]
    nz = [not _is_zero(c) for c in es]
    out = [[ONE]]
    for d in range(1, n + 1):
        acc = _czero(d)
        for k in range(1, d + 1):
            if nz[k]:
                _cmul_into(acc, es[k], out[d - k])
        out.append([x / d if x else ZERO for x in acc])
    return Series2._raw(n, out, s.precision_loss)


def ps_pow(u: Series2, r) -> Series2:
    """``u**r`` for a unit u and rational r (constant term must have an exact root)."""
    r = mpq(r)
    c, m = _unit_split(u)
    c_r = exact_power(c, r)
    n = u.order
    comps = m.comps
    nz = [not _is_zero(x) for x in comps]
    out = [[ONE]]
    for d in range(1, n + 1):
        acc = _czero(d)
        for k in range(1, d + 1):
            if nz[k]:
                w = r * k - (d - k)
                if w:
                    _cmul_into(acc, _cscale(comps[k], w), out[d - k])
        out.append([x / d if x else ZERO for x in acc])
    return Series2._raw(n, out, u.precision_loss).scale(c_r)


def ps_compose(outer: "Series1", inner: Series2) -> Series2:
    """``outer(inner(z))`` for inner with zero constant term."""
    if inner.constant:
        raise SeriesError("inner series must have zero constant term; recenter with ps_shift")
    n = inner.order
    total = Series2.const(outer.coeffs[0] if outer.coeffs else 0, n)
    pw = Series2.const(1, n)
    for k in range(1, min(n, outer.order) + 1):
        pw = pw * inner
        c = outer.coeffs[k]
        if c:
            total = total + pw.scale(c)
    loss = max(inner.precision_loss, outer.precision_loss + max(0, n - outer.order))
    return total.with_loss(loss)


def ps_shift(s: Series2, p) -> Series2:
    """``s(z + p)``, re-expanding the stored (polynomial) coefficients binomially."""
    p1, p2 = scalar(p[0]), scalar(p[1])
    if not p1 and not p2:
        return s
    n = s.order
    binom = [[1]]
    for k in range(1, n + 1):
        prev = binom[-1]
        binom.append([1] + [prev[i - 1] + prev[i] for i in range(1, k)] + [1])
    pw1 = [ONE]
    pw2 = [ONE]
    for _ in range(n):
        pw1.append(pw1[-1] * p1)
        pw2.append(pw2[-1] * p2)
    res = [_czero(d) for d in range(n + 1)]
    for d, comp in enumerate(s.comps):
        for j, c in enumerate(comp):
            if not c:
                continue
            i = d - j
            for a in range(i + 1):
                ca = c * binom[i][a] * pw1[i - a]
                if not ca:
                    continue
                for b in range(j + 1):
                    term = ca * binom[j][b] * pw2[j - b]
                    if term:
                        res[a + b][b] = res[a + b][b] + term
    return Series2._raw(n, res, s.precision_loss)


# ---------------------------------------------------------------------------


class Series1:
    """Truncated univariate power series ``sum c_k t^k`` for ``k <= order``."""

    __slots__ = ("order", "coeffs", "precision_loss")

    def __init__(self, order: int, coeffs=None, precision_loss: int = 0):
        cs = [scalar(c) for c in (coeffs or [])][: order + 1]
        cs += [ZERO] * (order + 1 - len(cs))
        self.order = order
        self.coeffs = tuple(cs)
        self.precision_loss = precision_loss

    @classmethod
    def const(cls, c, order: int = DEFAULT_ORDER) -> "Series1":
        return cls(order, [c])

    @classmethod
    def var(cls, order: int = DEFAULT_ORDER) -> "Series1":
        return cls(order, [0, 1])

    @property
    def certified_order(self) -> int:
        return self.order - self.precision_loss

    def __getitem__(self, k):
        return self.coeffs[k] if 0 <= k <= self.order else ZERO

    def __eq__(self, other):
        if not isinstance(other, Series1):
            return NotImplemented
        return (self.order, self.coeffs, self.precision_loss) == (
            other.order,
            other.coeffs,
            other.precision_loss,
        )

    def __hash__(self):
        return hash((self.order, self.coeffs, self.precision_loss))

    def eq_to(self, other: "Series1", k: int | None = None) -> bool:
        limit = min(self.certified_order, other.certified_order)
        k = limit if k is None else k
        if k > limit:
            raise SeriesError(f"cannot compare to order {k}; only {limit} is certified")
        return self.coeffs[: k + 1] == other.coeffs[: k + 1]

    def valuation(self) -> int | None:
        for k, c in enumerate(self.coeffs[: self.certified_order + 1]):
            if c:
                return k
        return None

    def to_text(self, name: str = "t") -> str:
        parts = []
        for k, c in enumerate(self.coeffs[: self.certified_order + 1]):
            if not c:
                continue
            cs = fmt(c)
            if isinstance(c, Coeff):
                cs = f"({cs})"
            mono = "" if k == 0 else (name if k == 1 else f"{name}^{k}")
            if not mono:
                parts.append(cs)
            elif cs == "1":
                parts.append(mono)
            elif cs == "-1":
                parts.append("-" + mono)
            else:
                parts.append(f"{cs}*{mono}")
        if not parts:
            return "0"
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    def __repr__(self):
        return f"Series1({self.to_text()} + O({self.certified_order + 1}))"

    def _coerce(self, other) -> "Series1":
        if isinstance(other, Series1):
            if other.order != self.order:
                raise SeriesError(f"order mismatch: {self.order} vs {other.order}")
            return other
        return Series1.const(other, self.order)

    def __add__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return Series1(
            self.order,
            [x + y for x, y in zip(self.coeffs, o.coeffs)],
            max(self.precision_loss, o.precision_loss),
        )

    __radd__ = __add__

    def __neg__(self):
        return Series1(self.order, [-x for x in self.coeffs], self.precision_loss)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "Series1":
        c = scalar(c)
        return Series1(self.order, [x * c for x in self.coeffs], self.precision_loss)

    def __mul__(self, other):
        if not isinstance(other, Series1):
            try:
                return self.scale(other)
            except TypeError:
                return NotImplemented
        o = self._coerce(other)
        n = self.order
        out = [ZERO] * (n + 1)
        for i, x in enumerate(self.coeffs):
            if not x:
                continue
            for j in range(n - i + 1):
                y = o.coeffs[j]
                if y:
                    out[i + j] = out[i + j] + x * y
        return Series1(n, out, max(self.precision_loss, o.precision_loss))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Series1):
            return self * other.inv()
        c = scalar(other)
        return self.scale(ONE / c)

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        result = Series1(self.order, [1], self.precision_loss)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def deriv(self) -> "Series1":
        cs = [self.coeffs[k] * k for k in range(1, self.order + 1)] + [ZERO]
        return Series1(self.order, cs, self.precision_loss + 1)

    def integrate(self) -> "Series1":
        cs = [ZERO] + [self.coeffs[k] / (k + 1) for k in range(self.order)]
        return Series1(self.order, cs, self.precision_loss)

    def truncate(self, order: int) -> "Series1":
        if order >= self.order:
            return Series1(order, self.coeffs, self.precision_loss + order - self.order)
        return Series1(order, self.coeffs[: order + 1], max(0, self.precision_loss - (self.order - order)))

    def with_loss(self, loss: int) -> "Series1":
        return Series1(self.order, self.coeffs, loss)

    def shift_down(self, k: int) -> "Series1":
        """Divide by ``t^k`` (which must divide the certified part exactly)."""
        if any(self.coeffs[:k]):
            raise SeriesError(f"t^{k} does not divide the series")
        return Series1(self.order, self.coeffs[k:], self.precision_loss + k)

    def inv(self) -> "Series1":
        c0 = self.coeffs[0]
        if not c0:
            raise NotAUnit("cannot invert a series with zero constant term")
        inv0 = ONE / c0
        out = [inv0]
        for d in range(1, self.order + 1):
            acc = ZERO
            for k in range(1, d + 1):
                a = self.coeffs[k]
                if a:
                    acc = acc + a * out[d - k]
            out.append(-acc * inv0)
        return Series1(self.order, out, self.precision_loss)

    def exp(self) -> "Series1":
        if self.coeffs[0]:
            raise SeriesError("exp needs a zero constant term")
        out = [ONE]
        for d in range(1, self.order + 1):
            acc = ZERO
            for k in range(1, d + 1):
                a = self.coeffs[k]
                if a:
                    acc = acc + a * k * out[d - k]
            out.append(acc / d)
        return Series1(self.order, out, self.precision_loss)

    def log(self) -> "Series1":
        """``log(s / s(0))``."""
        c0 = self.coeffs[0]
        if not c0:
            raise NotAUnit("log of a non-unit")
        q = self.deriv() * self.inv()
        cs = [ZERO] + [q.coeffs[k - 1] / k for k in range(1, self.order + 1)]
        return Series1(self.order, cs, self.precision_loss)

    def pow(self, r) -> "Series1":
        """``s**r`` for a unit s and rational r."""
        r = mpq(r)
        c0 = self.coeffs[0]
        if not c0:
            raise NotAUnit("rational power of a non-unit")
        c_r = exact_power(c0, r)
        inv0 = ONE / c0
        m = [x * inv0 for x in self.coeffs]
        out = [ONE]
        for d in range(1, self.order + 1):
            acc = ZERO
            for k in range(1, d + 1):
                if m[k]:
                    acc = acc + (r * k - (d - k)) * m[k] * out[d - k]
            out.append(acc / d)
        return Series1(self.order, out, self.precision_loss).scale(c_r)

    def compose(self, inner: "Series1") -> "Series1":
        """``self(inner(t))`` for inner with zero constant term."""
        if inner.coeffs[0]:
            raise SeriesError("inner series must have zero constant term")
        n = inner.order
        total = Series1(n, [self.coeffs[0]])
        pw = Series1(n, [1])
        for k in range(1, min(n, self.order) + 1):
            pw = pw * inner
            if self.coeffs[k]:
                total = total + pw.scale(self.coeffs[k])
        loss = max(inner.precision_loss, self.precision_loss + max(0, n - self.order))
        return total.with_loss(loss)

    def revert(self) -> "Series1":
        """Compositional inverse of a series ``a1 t + a2 t^2 + ...`` with a1 != 0."""
        if self.coeffs[0] or not self.coeffs[1]:
            raise SeriesError("reversion needs zero constant term and nonzero linear term")
        n = self.order
        a1 = self.coeffs[1]
        inv1 = ONE / a1
        rest = Series1(n, [ZERO, ZERO] + list(self.coeffs[2:]))
        g = Series1(n, [ZERO, inv1])
        t = Series1.var(n)
        # g <- (t - rest(g)) / a1 gains one correct degree per pass
        for _ in range(n):
            g = (t - rest.compose(g)).scale(inv1)
        return g.with_loss(self.precision_loss)
