"""Univariate Laurent series with a single logarithmic term.

A :class:`LaurentLog1` represents::

    sum_k pole_part[k] * u^(k - K)  +  taylor_part(u)  +  log_coeff * log(u)

where ``K = len(pole_part)``.  Symbolic exponent parameters enter linearly,
so a separated density is stored as a :class:`ParamLaurent`, a map from
parameter name (``None`` for the numeric part) to a LaurentLog1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .coeff import Coeff, ZERO, fmt, is_rational, scalar
from .series import Series1

__all__ = ["LaurentLog1", "Lin", "ParamLaurent", "Laurent"]


@dataclass(frozen=True)
class Laurent:
    """``t^val * series(t)``; a plain Laurent series used during restriction."""

    val: int
    series: Series1

    def __add__(self, other: "Laurent") -> "Laurent":
        lo, hi = (self, other) if self.val <= other.val else (other, self)
        d = hi.val - lo.val
        n = lo.series.order
        shifted = Series1(n, [ZERO] * d + list(hi.series.coeffs[: n + 1 - d]), hi.series.precision_loss)
        return Laurent(lo.val, lo.series + shifted)

    def scale(self, c) -> "Laurent":
        return Laurent(self.val, self.series.scale(c))

    def coeff(self, j: int):
        """Coefficient of ``t^j``."""
        return self.series[j - self.val]

    def normalized(self) -> "Laurent":
        v = self.series.valuation()
        if v is None or v == 0:
            return self
        return Laurent(self.val + v, self.series.shift_down(v))

    @property
    def top(self) -> int:
        """Highest exponent whose coefficient is certified."""
        return self.val + self.series.certified_order


@dataclass(frozen=True)
class LaurentLog1:
    pole_part: tuple = ()
    taylor_part: Series1 = field(default_factory=lambda: Series1(0))
    log_coeff: object = ZERO

    def __post_init__(self):
        pp = tuple(scalar(c) for c in self.pole_part)
        k = 0
        while k < len(pp) and not pp[k]:
            k += 1
        object.__setattr__(self, "pole_part", pp[k:])
        object.__setattr__(self, "log_coeff", scalar(self.log_coeff))

    @classmethod
    def from_derivative(cls, dA: Laurent) -> "LaurentLog1":
        """Integrate a Laurent series ``A'(u)``; the constant of integration is zero."""
        top = dA.top
        poles = []
        for j in range(min(dA.val, -1), -1):
            # coefficient of u^(j+1) in A, j+1 < 0
            poles.append(dA.coeff(j) / (j + 1))
        log_c = dA.coeff(-1)
        n = max(0, top + 1)
        taylor = [ZERO] * (n + 1)
        for e in range(1, n + 1):
            taylor[e] = dA.coeff(e - 1) / e
        return cls(tuple(poles), Series1(n, taylor), log_c)

    def pole(self, k: int):
        """Coefficient of ``u^(-k)``."""
        K = len(self.pole_part)
        return self.pole_part[K - k] if 1 <= k <= K else ZERO

    @property
    def pole_order(self) -> int:
        return len(self.pole_part)

    def is_holomorphic(self) -> bool:
        return not self.pole_part and not self.log_coeff

    def scale(self, c) -> "LaurentLog1":
        c = scalar(c)
        return LaurentLog1(tuple(x * c for x in self.pole_part), self.taylor_part.scale(c), self.log_coeff * c)

    def __add__(self, other: "LaurentLog1") -> "LaurentLog1":
        K = max(self.pole_order, other.pole_order)
        poles = tuple(self.pole(k) + other.pole(k) for k in range(K, 0, -1))
        n = min(self.taylor_part.order, other.taylor_part.order)
        return LaurentLog1(poles, self.taylor_part.truncate(n) + other.taylor_part.truncate(n), self.log_coeff + other.log_coeff)

    def to_text(self, name: str = "u", upto: int = 4) -> str:
        parts = []
        for k in range(self.pole_order, 0, -1):
            c = self.pole(k)
            if c:
                mono = f"{name}^{k}" if k > 1 else name
                parts.append(_term(c, f"1/{mono}", division=True))
        if self.log_coeff:
            parts.append(_term(self.log_coeff, f"log({name})"))
        tp = Series1(min(upto, self.taylor_part.order), self.taylor_part.coeffs)
        for e, c in enumerate(tp.coeffs):
            if c:
                parts.append(_term(c, name if e == 1 else f"{name}^{e}"))
        if self.taylor_part.order > upto and any(self.taylor_part.coeffs[upto + 1 :]):
            parts.append(f"O({name}^{upto + 1})")
        return _join(parts)

    def __str__(self):
        return self.to_text()


def _term(c, mono: str, division: bool = False) -> str:
    if c == 1:
        return mono
    if c == -1:
        return "-" + mono
    cs = fmt(c)
    if isinstance(c, Coeff):
        cs = f"({cs})"
    if division:
        # c/u reads better than c*1/u
        return f"{cs}{mono[1:]}" if mono.startswith("1/") else f"{cs}*{mono}"
    return f"{cs}*{mono}"


def _join(parts) -> str:
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


@dataclass(frozen=True)
class Lin:
    """``const + sum coef * name`` over exponent parameter names."""

    const: object = ZERO
    terms: tuple = ()  # sorted (name, coef) pairs with coef != 0

    @classmethod
    def build(cls, const, terms: dict) -> "Lin":
        return cls(scalar(const), tuple(sorted((k, scalar(v)) for k, v in terms.items() if v)))

    @property
    def symbolic(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.const and not self.terms

    def is_real_rational(self) -> bool:
        return not self.terms and is_rational(self.const)

    def __str__(self):
        parts = [_term(c, name) for name, c in self.terms]
        if self.const or not parts:
            parts.append(fmt(self.const))
        return _join(parts)


class ParamLaurent:
    """``sum_s s * L_s`` with ``s`` ranging over parameter names and ``None`` (= 1)."""

    def __init__(self, parts: dict):
        self.parts = {k: v for k, v in parts.items()}

    def component(self, symbol=None) -> LaurentLog1:
        return self.parts.get(symbol, LaurentLog1())

    @property
    def symbols(self) -> list:
        return sorted(k for k in self.parts if k is not None)

    def log_coeff(self) -> Lin:
        return Lin.build(
            self.component(None).log_coeff,
            {s: self.parts[s].log_coeff for s in self.symbols},
        )

    def has_pole(self) -> bool:
        return any(p.pole_part for p in self.parts.values())

    def pole_part(self, symbol=None) -> tuple:
        return self.component(symbol).pole_part

    def is_holomorphic(self) -> bool:
        return all(p.is_holomorphic() for p in self.parts.values())

    def scale(self, c) -> "ParamLaurent":
        return ParamLaurent({k: v.scale(c) for k, v in self.parts.items()})

    def to_text(self, name: str = "u", upto: int = 4) -> str:
        out = []
        num = self.component(None)
        if None in self.parts:
            t = num.to_text(name, upto)
            if t != "0":
                out.append(t)
        for s in self.symbols:
            t = self.parts[s].to_text(name, upto)
            if t == "0":
                continue
            out.append(f"{s}*({t})")
        return " + ".join(out) if out else "0"

    def __str__(self):
        return self.to_text()

    def __eq__(self, other):
        if not isinstance(other, ParamLaurent):
            return NotImplemented
        return self.to_text(upto=8) == other.to_text(upto=8)

    def __hash__(self):
        return hash(self.to_text(upto=8))

