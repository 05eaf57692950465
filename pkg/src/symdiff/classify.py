"""First-kind classification of a symmetric 2-differential at a point.

Three levels of failure are distinguished, in order: the quadratic form does
not split (``NonSplit``), the exact decomposition is multivalued around the
degeneracy divisor (``FiniteMonodromy`` / ``InfiniteMonodromy``), or the
factors are single-valued but singular (``EssentialSingularity`` /
``MeromorphicFactors``).

Levels 2 and 3 are decided on products ``g * d(h1) * d(h2)``.  For those,
``log g`` is separated over the web ``u_i = h_i - h_i(x)`` by restricting the
rational 1-forms ``rho_i = d log g (du_i-component)`` to a line through the
point and reverting the first integral along it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from gmpy2 import mpq

from .coeff import ONE, ZERO, Coeff, fmt, scalar
from .errors import (
    AnalysisError,
    ExpansionError,
    IdenticallyDegenerate,
    IrrationalConstant,
    FieldExtensionRequired,
    NonSplitHere,
    NonUnitBase,
    NotClosedHere,
    NotSeparable,
    SeriesError,
    SymbolicExponentInNumericContext,
    WebDegenerate,
)
from .expr import (
    Add,
    D,
    Document,
    Exp,
    Expr,
    Mul,
    Num,
    ParamRef,
    Pow,
    Var,
    _exponent_value,
    expand_expr_at,
    substitute_power,
)
from .laurent import Laurent, LaurentLog1, Lin, ParamLaurent
from .series import DEFAULT_ORDER, NoExactRoot, Series1, Series2, exact_power, ps_exp, ps_inv, ps_pow
from .surface import (
    ExactDecomposition,
    disc_w,
    exact_decomposition,
    is_closed,
    is_degenerate_at_origin,
    rank_of,
    split_local,
)

__all__ = [
    "FIRST_KIND",
    "NON_SPLIT",
    "FINITE_MONODROMY",
    "INFINITE_MONODROMY",
    "ESSENTIAL",
    "MEROMORPHIC",
    "UNDETERMINED",
    "SeparatedDensity",
    "Classification",
    "structured_parts",
    "separate_log_density",
    "classify_point",
    "pullback_log_residues",
]

FIRST_KIND = "FirstKind"
NON_SPLIT = "NonSplit"
FINITE_MONODROMY = "FiniteMonodromy"
INFINITE_MONODROMY = "InfiniteMonodromy"
ESSENTIAL = "EssentialSingularity"
MEROMORPHIC = "MeromorphicFactors"
UNDETERMINED = "Undetermined"

STRUCTURED_NOTICE = "structured form g*d(h1)*d(h2) required for the monodromy and singularity levels"

# directions tried when restricting to a line through the point
_DIRECTIONS = [(1, 0), (0, 1), (1, 1), (1, -1), (1, 2), (2, 1), (1, -2), (2, -1), (1, 3), (3, 1), (2, 3), (3, -2)]


# ---------------------------------------------------------------------------
# structured products


def _flatten(e: Expr) -> list:
    if isinstance(e, Mul):
        out = []
        for f in e.factors:
            out.extend(_flatten(f))
        return out
    return [e]


def structured_parts(e: Expr):
    """Split ``e`` as ``(g_factors, h1, h2)`` when it is ``g * d(h1) * d(h2)``, else None."""
    if isinstance(e, Document):
        e = e.expr
    g, hs = [], []
    for f in _flatten(e):
        if isinstance(f, D):
            hs.append(f.arg)
        elif isinstance(f, Pow) and isinstance(f.base, D) and f.exponent == 2:
            hs.extend([f.base.arg, f.base.arg])
        elif _has_d(f):
            return None
        else:
            g.append(f)
    if len(hs) != 2:
        return None
    return g, hs[0], hs[1]


def _has_d(e: Expr) -> bool:
    if isinstance(e, D):
        return True
    if isinstance(e, (Num, Var)):
        return False
    if isinstance(e, Add):
        return any(_has_d(t) for _, t in e.terms)
    if isinstance(e, Mul):
        return any(_has_d(f) for f in e.factors)
    if isinstance(e, Pow):
        return _has_d(e.base)
    if isinstance(e, Exp):
        return _has_d(e.arg)
    return False


# ---------------------------------------------------------------------------
# meromorphic evaluation: num/den pairs of series


def _mero(e: Expr, pt, n: int, params) -> tuple:
    if isinstance(e, Num):
        return Series2.const(e.value, n), Series2.const(1, n)
    if isinstance(e, Var):
        return Series2.var(e.index, n) + pt[e.index - 1], Series2.const(1, n)
    if isinstance(e, Add):
        num, den = Series2.zero(n), Series2.const(1, n)
        for sign, t in e.terms:
            a, b = _mero(t, pt, n, params)
            if sign < 0:
                a = -a
            num, den = num * b + a * den, den * b
        return num, den
    if isinstance(e, Mul):
        num, den = Series2.const(1, n), Series2.const(1, n)
        for f in e.factors:
            a, b = _mero(f, pt, n, params)
            num, den = num * a, den * b
        return num, den
    if isinstance(e, Pow):
        a, b = _mero(e.base, pt, n, params)
        r = _exponent_value(e.exponent, params)
        if r.denominator == 1:
            k = int(r)
            return (a ** k, b ** k) if k >= 0 else (b ** -k, a ** -k)
        if not (a.is_unit() and b.is_unit()):
            raise NonUnitBase(f"{e.base} vanishes or has a pole at the point; ^{fmt(r)} is multivalued there")
        try:
            return ps_pow(a * ps_inv(b), r), Series2.const(1, n)
        except NoExactRoot as exc:
            raise IrrationalConstant(str(exc)) from None
    if isinstance(e, Exp):
        a, b = _mero(e.arg, pt, n, params)
        if not b.is_unit():
            raise NonUnitBase(f"exp({e.arg}) has an essential singularity at the point")
        s = a * ps_inv(b)
        if s.constant:
            raise IrrationalConstant(f"exp({e.arg}) has value e^({fmt(s.constant)}) at the point")
        return ps_exp(s), Series2.const(1, n)
    raise ExpansionError(f"cannot evaluate {e} as a function")


def _holo(e: Expr, pt, n: int, params) -> Series2:
    a, b = _mero(e, pt, n, params)
    if not b.is_unit():
        raise NonUnitBase(f"{e} is not holomorphic at the point")
    return a * ps_inv(b)


def _const_value(e: Expr, pt, params):
    """Value at the point, or None when it is not a finite Gaussian rational."""
    if isinstance(e, Pow) and isinstance(e.exponent, ParamRef):
        base = _const_value(e.base, pt, params)
        decl = params.get(e.exponent.name)
        if base == 1:
            return ONE
        if base is None or decl is None or decl.irrational:
            return None
        try:
            return exact_power(base, decl.value)
        except (NoExactRoot, ZeroDivisionError):
            return None
    if isinstance(e, Mul):
        out = ONE
        for f in e.factors:
            v = _const_value(f, pt, params)
            if v is None:
                return None
            out = out * v
        return out
    try:
        a, b = _mero(e, pt, 0, params)
    except (ExpansionError, SeriesError):
        return None
    if not b.constant:
        return None
    return a.constant / b.constant


# ---------------------------------------------------------------------------
# contributions to d log g


@dataclass(frozen=True)
class _Term:
    """``coef * symbol * (p dz1 + q dz2) / den`` coming from an exp or a power."""

    symbol: object
    coef: object
    source: str
    p: Series2
    q: Series2
    den: Series2


def _log_terms(e: Expr, coef, symbol, pt, n, params, out: list):
    if isinstance(e, Num):
        return
    if isinstance(e, Mul):
        for f in e.factors:
            _log_terms(f, coef, symbol, pt, n, params, out)
        return
    if isinstance(e, Pow):
        ex = e.exponent
        if isinstance(ex, ParamRef):
            decl = params[ex.name]
            if not decl.irrational:
                _log_terms(e.base, coef * decl.value, symbol, pt, n, params, out)
                return
            if symbol is not None:
                raise ExpansionError("a product of two symbolic exponents is not supported")
            _log_terms(e.base, coef, ex.name, pt, n, params, out)
            return
        _log_terms(e.base, coef * ex, symbol, pt, n, params, out)
        return
    if isinstance(e, Exp):
        a, b = _mero(e.arg, pt, n, params)
        p = a.deriv(1) * b - a * b.deriv(1)
        q = a.deriv(2) * b - a * b.deriv(2)
        out.append(_Term(symbol, coef, "exp", p, q, b * b))
        return
    a, b = _mero(e, pt, n, params)
    p = a.deriv(1) * b - a * b.deriv(1)
    q = a.deriv(2) * b - a * b.deriv(2)
    out.append(_Term(symbol, coef, "power", p, q, a * b))


# ---------------------------------------------------------------------------
# separation


@dataclass(frozen=True)
class SeparatedDensity:
    """``log g = A(u1) + B(u2) + log(scale)`` over the web ``u_i = h_i - h_i(x)``.

    ``scale`` is ``g(x)`` when g is a holomorphic unit at the point and None
    otherwise; ``prefactor`` is the product of the literal constant factors.
    """

    A: ParamLaurent
    B: ParamLaurent
    scale: object
    prefactor: object
    h1: Expr
    h2: Expr
    pole_sources: frozenset = frozenset()
    certified_order: int = 0

    def log_coeffs(self) -> tuple:
        return self.A.log_coeff(), self.B.log_coeff()

    def to_dict(self) -> dict:
        return {
            "A": self.A.to_text("u1"),
            "B": self.B.to_text("u2"),
            "log_coeff_A": str(self.A.log_coeff()),
            "log_coeff_B": str(self.B.log_coeff()),
            "pole_part_A": [fmt(c) for c in self.A.pole_part()],
            "pole_part_B": [fmt(c) for c in self.B.pole_part()],
            "pole_sources": sorted(self.pole_sources),
            "prefactor": fmt(self.prefactor),
            "scale": None if self.scale is None else fmt(self.scale),
            "u1": str(self.h1),
            "u2": str(self.h2),
        }


def _resolve(e, params):
    if isinstance(e, Document):
        return e.expr, dict(e.params)
    return e, dict(params or {})


def _restrict(s: Series2, v) -> Laurent:
    return Laurent(0, s.along(*v)).normalized()


def _quotient(P: Series2, Q: Series2, v) -> Laurent | None:
    num = _restrict(P, v)
    den = _restrict(Q, v)
    if den.series.valuation() is None:
        return None
    if num.series.valuation() is None:
        return Laurent(0, Series1(den.series.order))
    return Laurent(num.val - den.val, num.series * den.series.inv())


def _in_web_coordinate(R: Laurent, sigma: Series1) -> Laurent:
    """``R(tau(s))`` where tau inverts sigma (valuation 1)."""
    tau = sigma.revert()
    body = R.series.compose(tau)
    unit = tau.shift_down(1)
    k = R.val
    factor = unit ** k if k >= 0 else unit.inv() ** -k
    return Laurent(k, body * factor.truncate(body.order))


def _separable(terms: list, du: tuple) -> bool:
    """``d(sum P_i/Q_i) ^ du == 0`` with all denominators cleared."""
    pieces = []
    for P, Q in terms:
        dP = (P.deriv(1), P.deriv(2))
        dQ = (Q.deriv(1), Q.deriv(2))
        w1 = Q * dP[0] - P * dQ[0]
        w2 = Q * dP[1] - P * dQ[1]
        pieces.append((w1 * du[1] - w2 * du[0], Q * Q))
    total = None
    for i, (num, _) in enumerate(pieces):
        t = num
        for j, (_, q2) in enumerate(pieces):
            if j != i:
                t = t * q2
        total = t if total is None else total + t
    return total is None or total.is_zero()


def _web(h1: Expr, h2: Expr, pt, n, params):
    u1 = _holo(h1, pt, n, params)
    u2 = _holo(h2, pt, n, params)
    u1 = u1 - u1.constant
    u2 = u2 - u2.constant
    du1 = (u1.deriv(1), u1.deriv(2))
    du2 = (u2.deriv(1), u2.deriv(2))
    delta = du1[0] * du2[1] - du1[1] * du2[0]
    if delta.is_zero():
        raise WebDegenerate("dh1 ^ dh2 vanishes identically")
    return u1, u2, du1, du2, delta


def _side_terms(terms, side, du1, du2, delta):
    """Numerator/denominator of rho_side for each contribution."""
    out = []
    for t in terms:
        if side == 1:
            P = t.p * du2[1] - t.q * du2[0]
        else:
            P = t.q * du1[0] - t.p * du1[1]
        out.append((P, t.den * delta))
    return out


def _choose_line(u: Series2, denominators) -> tuple:
    best = None
    for v in _DIRECTIONS:
        sigma = u.along(*v)
        e = sigma.valuation()
        if e is None:
            continue
        if any(Q.along(*v).valuation() is None for Q in denominators):
            continue
        if best is None or e < best[1]:
            best = (v, e)
        if e == 1:
            break
    if best is None:
        raise WebDegenerate("no line through the point separates the web")
    return best


def _prepare(e, point, params, order):
    expr, params = _resolve(e, params)
    parts = structured_parts(expr)
    if parts is None:
        raise ExpansionError("expression is not of the form g*d(h1)*d(h2)")
    g, h1, h2 = parts
    pt = (scalar(point[0]), scalar(point[1]))
    n = order + 2
    u1, u2, du1, du2, delta = _web(h1, h2, pt, n, params)
    terms = []
    prefactor = ONE
    for f in g:
        if isinstance(f, Num):
            prefactor = prefactor * f.value
        _log_terms(f, ONE, None, pt, n, params, terms)
    return expr, params, g, h1, h2, pt, n, (u1, u2), (du1, du2), delta, terms, prefactor


def _group(terms) -> dict:
    groups: dict = {}
    for t in terms:
        groups.setdefault(t.symbol, []).append(t)
    return groups


def separate_log_density(e, point=(0, 0), params: dict | None = None, order: int = DEFAULT_ORDER) -> SeparatedDensity:
    """Separate ``log g`` over the web of a product ``g * d(h1) * d(h2)``."""
    expr, params, g, h1, h2, pt, n, us, dus, delta, terms, prefactor = _prepare(e, point, params, order)
    groups = _group(terms)
    for sym, ts in groups.items():
        for side in (1, 2):
            weighted = [(P.scale(t.coef), Q) for t, (P, Q) in zip(ts, _side_terms(ts, side, *dus, delta))]
            if not _separable(weighted, dus[side - 1]):
                raise NotSeparable(
                    "log g is not a sum of a function of u1 and a function of u2"
                    + (f" (coefficient of {sym})" if sym else "")
                )
    sides = []
    pole_sources = set()
    cert = order
    for side in (1, 2):
        u = us[side - 1]
        side_terms = _side_terms(terms, side, *dus, delta)
        v, e_val = _choose_line(u, [Q for _, Q in side_terms])
        if e_val != 1:
            raise WebDegenerate(f"u{side} is not a local coordinate along any line through the point")
        sigma = u.along(*v)
        by_key: dict = {}
        for t, (P, Q) in zip(terms, side_terms):
            R = _quotient(P, Q, v)
            if R is None:
                raise WebDegenerate("density denominator vanishes identically along the chosen line")
            R = R.scale(t.coef)
            key = (t.symbol, t.source)
            by_key[key] = R if key not in by_key else by_key[key] + R
        parts = {}
        for (sym, source), R in sorted(by_key.items(), key=lambda kv: (kv[0][0] or "", kv[0][1])):
            dA = _in_web_coordinate(R, sigma)
            L = LaurentLog1.from_derivative(dA)
            cert = min(cert, L.taylor_part.certified_order)
            if L.pole_part:
                pole_sources.add(source)
            parts[sym] = L if sym not in parts else parts[sym] + L
        sides.append(ParamLaurent(parts))
    scale = None
    value = _const_value(Mul(tuple(g)) if g else Num(ONE), pt, params)
    if value and all(side.is_holomorphic() for side in sides):
        scale = value
    return SeparatedDensity(sides[0], sides[1], scale, prefactor, h1, h2, frozenset(pole_sources), cert)


def pullback_log_residues(e, var: int, q: int, point=(0, 0), params: dict | None = None, order: int = DEFAULT_ORDER) -> tuple:
    """Log coefficients of the separated factors after substituting ``z_var -> z_var^q``.

    Along a line through the point each first integral ``u_i`` restricts to
    ``sigma_i(t)`` and ``A(u_i)`` to ``A(sigma_i(t))``; the returned values are
    the residues of ``d(A o sigma_1)`` and ``d(B o sigma_2)`` at ``t = 0``, so a
    log coefficient ``lambda`` of a web coordinate vanishing to order ``e``
    contributes ``e * lambda``.
    """
    expr, params = _resolve(e, params)
    pulled = substitute_power(expr, var, q)
    _, params, g, h1, h2, pt, n, us, dus, delta, terms, _ = _prepare(pulled, point, params, order)
    out = []
    for side in (1, 2):
        u = us[side - 1]
        side_terms = _side_terms(terms, side, *dus, delta)
        v, _ = _choose_line(u, [Q for _, Q in side_terms])
        sigma = Laurent(0, u.along(*v)).normalized()
        dsigma = Laurent(sigma.val - 1, sigma.series.scale(sigma.val) + _tail_deriv(sigma.series))
        consts: dict = {}
        for t, (P, Q) in zip(terms, side_terms):
            R = _quotient(P, Q, v).scale(t.coef)
            prod = Laurent(R.val + dsigma.val, R.series * dsigma.series)
            consts[t.symbol] = consts.get(t.symbol, ZERO) + prod.coeff(-1)
        out.append(Lin.build(consts.pop(None, ZERO), consts))
    return tuple(out)


def _tail_deriv(s: Series1) -> Series1:
    # d/dt (t^k s) = t^(k-1) (k s + t s'); this returns t s'
    cs = [ZERO] + [s.coeffs[k] * k for k in range(1, s.order)]
    return Series1(s.order, cs, s.precision_loss)


# ---------------------------------------------------------------------------
# classification


@dataclass(frozen=True)
class Classification:
    verdict: str
    cover_order: int | None = None
    evidence: object = None
    notice: str | None = None
    certified_order: int | None = None
    disc_at_point: object = None
    closed: bool | None = None

    @property
    def label(self) -> str:
        if self.verdict == FINITE_MONODROMY:
            return f"{self.verdict}({self.cover_order})"
        return self.verdict

    @property
    def negative(self) -> bool:
        return self.verdict != FIRST_KIND

    def evidence_dict(self):
        ev = self.evidence
        if ev is None:
            return None
        if isinstance(ev, SeparatedDensity):
            return {"separated_density": ev.to_dict()}
        if isinstance(ev, ExactDecomposition):
            return {
                "F1": ev.F1.to_text(upto=4),
                "F2": ev.F2.to_text(upto=4),
                "scalar": fmt(ev.scalar),
            }
        return {"witness": str(ev)}

    def __str__(self):
        return self.label


def _monodromy_and_singularity(sd: SeparatedDensity) -> tuple:
    logs = sd.log_coeffs()
    if any(l.symbolic for l in logs):
        return INFINITE_MONODROMY, None
    consts = [l.const for l in logs]
    if any(isinstance(c, Coeff) for c in consts):
        # |exp(2 pi i c)| != 1 for non-real c
        return INFINITE_MONODROMY, None
    dens = [int(c.denominator) for c in consts]
    if any(d != 1 for d in dens):
        return FINITE_MONODROMY, math.lcm(*dens)
    if "exp" in sd.pole_sources:
        return ESSENTIAL, None
    if sd.pole_sources or any(c < 0 for c in consts):
        return MEROMORPHIC, None
    return FIRST_KIND, None


def _structured_disc(e, pt, params, n):
    parts = structured_parts(e)
    g, h1, h2 = parts
    try:
        u1 = _holo(h1, pt, 1, params)
        u2 = _holo(h2, pt, 1, params)
    except (ExpansionError, SeriesError):
        return None
    d0 = u1[1, 0] * u2[0, 1] - u1[0, 1] * u2[1, 0]
    gv = _const_value(Mul(tuple(g)) if g else Num(ONE), pt, params)
    if gv is None:
        return ZERO if not d0 and _finite_at(g, pt, params) else None
    return gv * gv * d0 * d0


def _finite_at(g, pt, params) -> bool:
    return all(_holomorphic_at(f, pt, params) for f in g)


def _holomorphic_at(e: Expr, pt, params) -> bool:
    """Whether ``e`` is holomorphic near the point; decided syntactically."""
    if isinstance(e, (Num, Var)):
        return True
    if isinstance(e, Add):
        return all(_holomorphic_at(t, pt, params) for _, t in e.terms)
    if isinstance(e, Mul):
        # a pole cancelled by a zero is not detected; callers only lose a value
        return all(_holomorphic_at(f, pt, params) for f in e.factors)
    if isinstance(e, Exp):
        return _holomorphic_at(e.arg, pt, params)
    if isinstance(e, Pow):
        if not _holomorphic_at(e.base, pt, params):
            return False
        if not isinstance(e.exponent, ParamRef) and e.exponent.denominator == 1 and e.exponent >= 0:
            return True
        try:
            a, b = _mero(e.base, pt, 0, params)
        except (ExpansionError, SeriesError):
            return False
        return bool(a.constant) and bool(b.constant)
    return False


def classify_point(e, point=(0, 0), params: dict | None = None, order: int = DEFAULT_ORDER) -> Classification:
    """Verdict of the first-kind pipeline at ``point``."""
    expr, params = _resolve(e, params)
    pt = (scalar(point[0]), scalar(point[1]))
    w = None
    try:
        w = expand_expr_at(expr, pt, order, params)
    except (NonUnitBase, SymbolicExponentInNumericContext, IrrationalConstant):
        if structured_parts(expr) is None:
            raise
    disc0 = None
    if w is not None:
        disc0 = disc_w(w).constant
        if rank_of(w) == 1:
            return Classification(UNDETERMINED, evidence="det(w) vanishes identically (rank 1)", notice="rank-1 differentials are out of scope", certified_order=w.certified_order, disc_at_point=disc0)
        try:
            split_local(w)
        except NonSplitHere as exc:
            return Classification(NON_SPLIT, evidence=str(exc), certified_order=w.certified_order, disc_at_point=disc0)
        except FieldExtensionRequired as exc:
            if structured_parts(expr) is None:
                # nondegenerate here, so closedness alone decides the first kind
                check = is_closed(w)
                return Classification(
                    FIRST_KIND if check.closed else NotClosedHere.verdict,
                    evidence=f"p2 {'vanishes' if check.closed else 'does not vanish'} to order {check.certified_order}",
                    notice=f"{exc}; no exact decomposition is produced",
                    certified_order=check.certified_order,
                    disc_at_point=disc0,
                    closed=check.closed,
                )
    parts = structured_parts(expr)
    if parts is not None:
        if disc0 is None:
            disc0 = _structured_disc(expr, pt, params, order)
        try:
            sd = separate_log_density(expr, pt, params, order)
        except NotSeparable as exc:
            # at a nondegenerate point this is exactly p2 != 0
            certified = None
            if w is not None:
                certified = is_closed(w).certified_order
            return Classification(NotClosedHere.verdict, evidence=f"not separable: {exc}", certified_order=certified, disc_at_point=disc0, closed=False)
        except WebDegenerate as exc:
            return Classification(exc.verdict, evidence=str(exc), disc_at_point=disc0)
        verdict, cover = _monodromy_and_singularity(sd)
        return Classification(verdict, cover, sd, certified_order=sd.certified_order, disc_at_point=disc0, closed=True)
    if not is_degenerate_at_origin(w):
        try:
            dec = exact_decomposition(w)
        except NotClosedHere as exc:
            return Classification(exc.verdict, evidence=str(exc), certified_order=w.certified_order, disc_at_point=disc0, closed=False)
        return Classification(FIRST_KIND, evidence=dec, certified_order=dec.reassemble().certified_order, disc_at_point=disc0, closed=True)
    try:
        check = is_closed(w)
    except IdenticallyDegenerate as exc:
        return Classification(UNDETERMINED, evidence=str(exc), notice=STRUCTURED_NOTICE, disc_at_point=disc0)
    return Classification(
        UNDETERMINED,
        evidence=f"p2 {'vanishes' if check.closed else 'does not vanish'} to order {check.certified_order}",
        notice=STRUCTURED_NOTICE,
        certified_order=check.certified_order,
        disc_at_point=disc0,
        closed=bool(check),
    )
