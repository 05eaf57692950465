"""Symmetric 2-differentials on a two-dimensional chart.

``w = a11 dz1^2 + a12 dz1 dz2 + a22 dz2^2`` with truncated-series
coefficients.  The main entry points are :func:`p2` (the closedness operator
built from the complexified Brioschi curvature formula),
:func:`split_local`, :func:`flatten_to_web` and :func:`exact_decomposition`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from gmpy2 import mpq

from .coeff import Coeff, ONE, ZERO, as_coeff, fmt, scalar, sort_key
from .errors import (
    DegenerateAtPoint,
    DegenerateJacobian,
    IdenticallyDegenerate,
    FieldExtensionRequired,
    NonSplitHere,
    NonSquareConstant,
    NotASquare,
    NotClosedHere,
    SeriesError,
    VanishingAtOrigin,
)
from .series import Series1, Series2, ps_compose, ps_inv, ps_log, ps_shift, ps_sqrt

__all__ = [
    "SymDiff2",
    "OneForm2",
    "WebChart",
    "ExactDecomposition",
    "ClosedCheck",
    "det_w",
    "disc_w",
    "brioschi_R",
    "p2",
    "is_closed",
    "rank_of",
    "rank1_closed",
    "split_local",
    "first_integral",
    "flatten_to_web",
    "exact_decomposition",
    "decompositions_agree",
]


@dataclass(frozen=True)
class OneForm2:
    """The 1-form ``p dz1 + q dz2``."""

    p: Series2
    q: Series2

    def __post_init__(self):
        if self.p.order != self.q.order:
            raise SeriesError("1-form components must share an order")

    @property
    def order(self) -> int:
        return self.p.order

    @property
    def certified_order(self) -> int:
        return min(self.p.certified_order, self.q.certified_order)

    def at_origin(self) -> tuple:
        return self.p.constant, self.q.constant

    def vanishes_at_origin(self) -> bool:
        return not self.p.constant and not self.q.constant

    def wedge(self, other: "OneForm2") -> Series2:
        """Coefficient of ``dz1 ^ dz2`` in ``self ^ other``."""
        return self.p * other.q - self.q * other.p

    def scale(self, c) -> "OneForm2":
        if isinstance(c, Series2):
            return OneForm2(self.p * c, self.q * c)
        return OneForm2(self.p.scale(c), self.q.scale(c))

    def __mul__(self, other):
        if isinstance(other, OneForm2):
            return SymDiff2(
                self.p * other.p,
                self.p * other.q + self.q * other.p,
                self.q * other.q,
            )
        return self.scale(other)

    __rmul__ = scale

    def truncate(self, order: int) -> "OneForm2":
        return OneForm2(self.p.truncate(order), self.q.truncate(order))

    def eq_to(self, other: "OneForm2", k: int | None = None) -> bool:
        return self.p.eq_to(other.p, k) and self.q.eq_to(other.q, k)

    @classmethod
    def exact(cls, f: Series2) -> "OneForm2":
        """``df`` for a series ``f``."""
        return cls(f.deriv(1), f.deriv(2))

    def __str__(self):
        return f"({self.p.to_text()}) dz1 + ({self.q.to_text()}) dz2"


@dataclass(frozen=True)
class SymDiff2:
    """``a11 dz1^2 + a12 dz1 dz2 + a22 dz2^2`` on a chart centered at the origin."""

    a11: Series2
    a12: Series2
    a22: Series2

    def __post_init__(self):
        if not (self.a11.order == self.a12.order == self.a22.order):
            raise SeriesError("coefficients of a symmetric differential must share an order")

    @property
    def order(self) -> int:
        return self.a11.order

    @property
    def certified_order(self) -> int:
        return min(s.certified_order for s in self.coeffs)

    @property
    def coeffs(self) -> tuple:
        return (self.a11, self.a12, self.a22)

    def is_zero(self) -> bool:
        return all(s.is_zero(self.certified_order) for s in self.coeffs)

    def scale(self, c) -> "SymDiff2":
        if isinstance(c, Series2):
            return SymDiff2(self.a11 * c, self.a12 * c, self.a22 * c)
        return SymDiff2(self.a11.scale(c), self.a12.scale(c), self.a22.scale(c))

    def __add__(self, other: "SymDiff2") -> "SymDiff2":
        return SymDiff2(self.a11 + other.a11, self.a12 + other.a12, self.a22 + other.a22)

    def __sub__(self, other: "SymDiff2") -> "SymDiff2":
        return SymDiff2(self.a11 - other.a11, self.a12 - other.a12, self.a22 - other.a22)

    def __neg__(self):
        return self.scale(-1)

    def shift(self, p) -> "SymDiff2":
        """Recenter at the point ``p`` (coefficients treated as polynomials)."""
        return SymDiff2(*(ps_shift(s, p) for s in self.coeffs))

    def truncate(self, order: int) -> "SymDiff2":
        return SymDiff2(*(s.truncate(order) for s in self.coeffs))

    def eq_to(self, other: "SymDiff2", k: int | None = None) -> bool:
        if k is None:
            k = min(self.certified_order, other.certified_order)
        return all(a.eq_to(b, k) for a, b in zip(self.coeffs, other.coeffs))

    @classmethod
    def product(cls, phi1: OneForm2, phi2: OneForm2) -> "SymDiff2":
        return phi1 * phi2

    def __str__(self):
        return (
            f"({self.a11.to_text()}) dz1^2 + ({self.a12.to_text()}) dz1 dz2"
            f" + ({self.a22.to_text()}) dz2^2"
        )


# ---------------------------------------------------------------------------
# determinant, discriminant, curvature


def det_w(w: SymDiff2) -> Series2:
    """``a11 a22 - a12^2 / 4``."""
    return w.a11 * w.a22 - (w.a12 * w.a12).scale(mpq(1, 4))


def disc_w(w: SymDiff2) -> Series2:
    """``a12^2 - 4 a11 a22``; its vanishing locus is the degeneracy divisor."""
    return w.a12 * w.a12 - (w.a11 * w.a22).scale(4)


def is_degenerate_at_origin(w: SymDiff2) -> bool:
    return not disc_w(w).constant


def _det3(m) -> Series2:
    """Cofactor expansion of a 3x3 matrix of series; None entries are zero."""
    def prod(*xs):
        if any(x is None for x in xs):
            return None
        r = xs[0]
        for x in xs[1:]:
            r = r * x
        return r

    terms = [
        (1, prod(m[0][0], m[1][1], m[2][2])),
        (1, prod(m[0][1], m[1][2], m[2][0])),
        (1, prod(m[0][2], m[1][0], m[2][1])),
        (-1, prod(m[0][2], m[1][1], m[2][0])),
        (-1, prod(m[0][0], m[1][2], m[2][1])),
        (-1, prod(m[0][1], m[1][0], m[2][2])),
    ]
    total = None
    for sign, t in terms:
        if t is None:
            continue
        t = t if sign > 0 else -t
        total = t if total is None else total + t
    return total


def _brioschi_numerator(w: SymDiff2) -> Series2:
    half = mpq(1, 2)
    a11, a12, a22 = w.coeffs
    a11_1, a11_2 = a11.deriv(1), a11.deriv(2)
    a12_1, a12_2 = a12.deriv(1), a12.deriv(2)
    a22_1, a22_2 = a22.deriv(1), a22.deriv(2)
    top_left = (a11_2.deriv(2) + a22_1.deriv(1) - a12_1.deriv(2)).scale(-half)
    f = a12.scale(half)
    first = [
        [top_left, a11_1.scale(half), (a12_1 - a11_2).scale(half)],
        [(a12_2 - a22_1).scale(half), a11, f],
        [a22_2.scale(half), f, a22],
    ]
    e_v = a11_2.scale(half)
    g_u = a22_1.scale(half)
    second = [
        [None, e_v, g_u],
        [e_v, a11, f],
        [g_u, f, a22],
    ]
    return _det3(first) - _det3(second)


def brioschi_R(w: SymDiff2) -> tuple[Series2, Series2]:
    """Complexified Gaussian curvature as ``(numerator, det(w)^2)``."""
    det = det_w(w)
    if det.is_zero():
        raise IdenticallyDegenerate("det(w) vanishes identically: rank 1 input")
    return _brioschi_numerator(w), det * det


def p2(w: SymDiff2) -> Series2:
    """The closedness operator ``det(w)^2 * R(w)``, a holomorphic series."""
    return _brioschi_numerator(w)


@dataclass(frozen=True)
class ClosedCheck:
    """Result of :func:`is_closed`; truthy when ``p2(w)`` vanishes to ``certified_order``."""

    closed: bool
    certified_order: int

    def __bool__(self):
        return self.closed


def is_closed(w: SymDiff2) -> ClosedCheck:
    p = p2(w)
    k = p.certified_order
    return ClosedCheck(p.is_zero(k), k)


def rank_of(w: SymDiff2) -> int:
    """2 when ``det(w)`` is not identically zero to the certified order, else 1."""
    return 1 if det_w(w).is_zero() else 2


def rank1_closed(w: SymDiff2) -> bool | None:
    """For ``w = f dz1^2`` decide closedness by ``df ^ dz1 == 0``.

    Returns None when w is not already of that normal form.
    """
    if not (w.a12.is_zero() and w.a22.is_zero()):
        return None
    return w.a11.deriv(2).is_zero()


# ---------------------------------------------------------------------------
# splitting


def _leading(form: OneForm2):
    p0, q0 = form.at_origin()
    return p0 if p0 else q0


def _largest_common_monomial(w: SymDiff2) -> tuple[int, int]:
    vals = [s.monomial_valuation() for s in w.coeffs]
    vals = [v for v in vals if v is not None]
    if not vals:
        return 0, 0
    return min(v[0] for v in vals), min(v[1] for v in vals)


def split_local(w: SymDiff2, *, swap: bool = False) -> tuple[OneForm2, OneForm2]:
    """Factor ``w = phi1 * phi2`` into holomorphic 1-forms near the origin.

    The discriminant's square root decides splitting; NotASquare becomes
    NonSplitHere, except a square root whose constant term lies outside Q(i),
    which raises FieldExtensionRequired.  Factors are normalized so that the second one has leading
    coefficient 1 at the origin, and ordered by descending ``(p(0), q(0))``.
    ``swap`` reverses that order (used to probe uniqueness).
    """
    a, b = _largest_common_monomial(w)
    if a or b:
        w = SymDiff2(*(s.divide_monomial(a, b) for s in w.coeffs))
    disc = disc_w(w)
    try:
        s = ps_sqrt(disc)
    except NonSquareConstant as exc:
        raise FieldExtensionRequired(f"discriminant splits only over an extension of Q(i): {exc}") from exc
    except NotASquare as exc:
        raise NonSplitHere(f"discriminant is not a square: {exc}") from exc
    a11, a12, a22 = w.coeffs
    half = mpq(1, 2)
    if (a12 + s).is_unit() or (a12 - s).is_unit():
        t = a12 + s if (a12 + s).is_unit() else a12 - s
        phi1 = OneForm2(t.scale(half), a22)
        phi2 = OneForm2((a11 * ps_inv(t)).scale(2), Series2.const(1, w.order))
    elif a22.is_unit():
        inv22 = ps_inv(a22)
        phi1 = OneForm2((a12 + s).scale(half), a22)
        phi2 = OneForm2(((a12 - s) * inv22).scale(half), Series2.const(1, w.order))
    elif a11.is_unit():
        inv11 = ps_inv(a11)
        phi1 = OneForm2(a11, (a12 + s).scale(half))
        phi2 = OneForm2(Series2.const(1, w.order), ((a12 - s) * inv11).scale(half))
    else:
        raise NonSplitHere("no unit pivot for the quadratic formula at this point")

    lam = ONE
    normed = []
    for phi in (phi1, phi2):
        lead = _leading(phi)
        if lead:
            phi = phi.scale(ONE / lead)
            lam = lam * lead
        normed.append(phi)
    normed.sort(key=lambda f: tuple(k for c in f.at_origin() for k in sort_key(c)), reverse=True)
    if swap:
        normed.reverse()
    first, second = normed
    first = first.scale(lam)
    if a or b:
        mono = Series2(w.order, {(a, b): 1})
        first = first.scale(mono)
    return first, second


def _solve_integral(p: Series2, q: Series2, order: int) -> Series2:
    """u with ``u(0, z2) = z2`` and ``u_z1 = (p/q) u_z2``, to total degree ``order``."""
    n = order
    r = (p * ps_inv(q)).truncate(n)
    # r_a(z2): coefficient of z1^a in r, as univariate series in z2
    r_cols = [[r[a, j] for j in range(n + 1)] for a in range(n + 1)]
    cols = [[ZERO, ONE] + [ZERO] * (n - 1)]  # c_0(z2) = z2
    dcols = [[ONE] + [ZERO] * n]  # c_0'
    for k in range(0, n):
        acc = [ZERO] * (n + 1)
        for a in range(k + 1):
            ra = r_cols[a]
            cb = dcols[k - a]
            for i, x in enumerate(ra):
                if not x:
                    continue
                for j in range(n + 1 - i):
                    y = cb[j]
                    if y:
                        acc[i + j] = acc[i + j] + x * y
        nxt = [x / (k + 1) for x in acc]
        cols.append(nxt)
        dcols.append([nxt[j + 1] * (j + 1) for j in range(n)] + [ZERO])
    data = {}
    for k, col in enumerate(cols):
        for j, c in enumerate(col):
            if c and k + j <= n:
                data[(k, j)] = c
    return Series2(n, data, max(p.precision_loss, q.precision_loss))


def _first_integral_ext(mu: OneForm2, scale=1) -> Series2:
    """First integral computed one degree beyond mu's order (exactly)."""
    p0, q0 = mu.at_origin()
    if not p0 and not q0:
        raise VanishingAtOrigin("1-form vanishes at the origin")
    n = mu.order + 1
    p, q = mu.p.truncate(n), mu.q.truncate(n)
    loss = max(mu.p.precision_loss, mu.q.precision_loss)
    if q0:
        u = _solve_integral(p, q, n)
        if p0:
            u = u.scale(q0 / p0)
    else:
        u = _solve_integral(q.swap(), p.swap(), n).swap()
    u = u.with_loss(loss)
    if scale != 1:
        u = u.scale(scale)
    return u


def first_integral(mu: OneForm2, *, scale=1) -> Series2:
    """u with ``du ^ mu == 0``, zero constant term, and unit dominant linear coefficient.

    u is linear along the ``z2`` axis when that axis is transverse to the
    leaves (``q(0) != 0``), otherwise along the ``z1`` axis; the dominant
    variable is ``z1`` when ``p(0) != 0``.  ``scale`` multiplies the result.
    """
    return _first_integral_ext(mu, scale).truncate(mu.order)


# ---------------------------------------------------------------------------
# webs and exact decompositions


@dataclass(frozen=True)
class WebChart:
    """``w = f(u) du1 du2``: f is a unit series in the web coordinates ``(u1, u2)``."""

    u1: Series2
    u2: Series2
    f: Series2
    u_ext: tuple = field(default=(), repr=False, compare=False)

    def density_in_z(self) -> Series2:
        return self.f.subs(self.u1, self.u2)

    def reassemble(self) -> SymDiff2:
        u1, u2 = self.u_ext or (self.u1, self.u2)
        n = self.f.order
        du1 = OneForm2.exact(u1).truncate(n)
        du2 = OneForm2.exact(u2).truncate(n)
        return (du1 * du2).scale(self.density_in_z())


def _linear_part(u: Series2):
    return u[1, 0], u[0, 1]


def invert_map(u1: Series2, u2: Series2) -> tuple[Series2, Series2]:
    """Series ``(z1(u), z2(u))`` inverting ``z -> (u1(z), u2(z))`` (invertible linear part)."""
    n = u1.order
    a, b = _linear_part(u1)
    c, d = _linear_part(u2)
    det = a * d - b * c
    if not det:
        raise DegenerateJacobian("du1 ^ du2 vanishes at the origin")
    ia, ib, ic, id_ = d / det, -b / det, -c / det, a / det
    nl1 = u1 - Series2(n, {(1, 0): a, (0, 1): b})
    nl2 = u2 - Series2(n, {(1, 0): c, (0, 1): d})
    x1 = Series2.var(1, n)
    x2 = Series2.var(2, n)
    z1 = (x1.scale(ia) + x2.scale(ib))
    z2 = (x1.scale(ic) + x2.scale(id_))
    for k in range(2, n + 1):
        # z <- L^{-1}(x - NL(z)); each pass fixes degree k
        e1 = nl1.truncate(k).subs(z1.truncate(k), z2.truncate(k))
        e2 = nl2.truncate(k).subs(z1.truncate(k), z2.truncate(k))
        r1 = x1.truncate(k) - e1
        r2 = x2.truncate(k) - e2
        z1 = (r1.scale(ia) + r2.scale(ib)).truncate(n)
        z2 = (r1.scale(ic) + r2.scale(id_)).truncate(n)
    loss = max(u1.precision_loss, u2.precision_loss)
    return z1.with_loss(loss), z2.with_loss(loss)


def _integrating_ratio(phi: OneForm2, u_ext: Series2, n: int) -> Series2:
    """g with ``phi = g du``."""
    p0, _ = phi.at_origin()
    if p0:
        return phi.p * ps_inv(u_ext.deriv(1).truncate(n))
    return phi.q * ps_inv(u_ext.deriv(2).truncate(n))


def flatten_to_web(w: SymDiff2, *, swap: bool = False, scales=(1, 1)) -> WebChart:
    """Present w as ``f(u) du1 du2`` near a nondegenerate origin."""
    phi1, phi2 = split_local(w, swap=swap)
    if is_degenerate_at_origin(w):
        raise DegenerateAtPoint("w is degenerate at the origin; the web is singular here")
    n = w.order
    e1 = _first_integral_ext(phi1, scales[0])
    e2 = _first_integral_ext(phi2, scales[1])
    u1, u2 = e1.truncate(n), e2.truncate(n)
    g1 = _integrating_ratio(phi1, e1, n)
    g2 = _integrating_ratio(phi2, e2, n)
    f_z = g1 * g2
    z1, z2 = invert_map(u1, u2)
    f = f_z.subs(z1, z2)
    return WebChart(u1, u2, f, (e1, e2))


@dataclass(frozen=True)
class ExactDecomposition:
    """``w = scalar * dF1 * dF2`` with potentials vanishing at the origin."""

    F1: Series2
    F2: Series2
    scalar: object
    F_ext: tuple = field(default=(), repr=False, compare=False)

    def factors(self) -> tuple[OneForm2, OneForm2]:
        """The closed 1-forms ``(scalar * dF1, dF2)``."""
        f1, f2 = self.F_ext or (self.F1, self.F2)
        n = self.F1.order
        d1 = OneForm2.exact(f1).truncate(n)
        d2 = OneForm2.exact(f2).truncate(n)
        return d1.scale(self.scalar), d2

    def reassemble(self) -> SymDiff2:
        a, b = self.factors()
        return a * b


def _potential(f: Series1) -> Series1:
    """Antiderivative one degree beyond f's order, zero at 0."""
    cs = [ZERO] + [c / (k + 1) for k, c in enumerate(f.coeffs)]
    return Series1(f.order + 1, cs, f.precision_loss)


def exact_decomposition(w: SymDiff2, *, swap: bool = False, scales=(1, 1)) -> ExactDecomposition:
    """Holomorphic exact decomposition at a nondegenerate origin, or NotClosedHere."""
    web = flatten_to_web(w, swap=swap, scales=scales)
    f = web.f
    c = f.constant
    logf = ps_log(f)
    mixed = logf.deriv(1).deriv(2)
    if not mixed.is_zero():
        raise NotClosedHere(
            f"d^2 log f / du1 du2 is nonzero (order {mixed.valuation()} term)"
        )
    A = logf.axis(1)
    B = logf.axis(2)
    F1 = _potential(A.exp())
    F2 = _potential(B.exp())
    e1, e2 = web.u_ext
    F1z = ps_compose(F1, e1)
    F2z = ps_compose(F2, e2)
    n = w.order
    dec = ExactDecomposition(F1z.truncate(n), F2z.truncate(n), c, (F1z, F2z))
    back = dec.reassemble()
    if not back.eq_to(w, min(back.certified_order, w.certified_order)):
        raise NotClosedHere("reassembled decomposition does not reproduce w")
    return dec


def decompositions_agree(d1: ExactDecomposition, d2: ExactDecomposition):
    """Return the constant c with ``psi1 = c*phi1, psi2 = phi2/c`` (up to swap), or None."""
    a1, a2 = d1.factors()
    b1, b2 = d2.factors()
    for x1, x2 in ((b1, b2), (b2, b1)):
        c = _ratio(a1, x1)
        if c is None:
            continue
        c2 = _ratio(a2, x2)
        if c2 is not None and c * c2 == 1:
            return c
    return None


def _ratio(a: OneForm2, b: OneForm2):
    """Constant c with ``b == c*a`` exactly to the common certified order, else None."""
    k = min(a.certified_order, b.certified_order)
    lead_a = _leading(a)
    lead_b = _leading(b)
    if not lead_a or not lead_b:
        return None
    c = lead_b / lead_a
    if a.scale(c).eq_to(b, k):
        return c
    return None
