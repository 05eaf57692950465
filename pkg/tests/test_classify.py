from fractions import Fraction
from pathlib import Path

import pytest

from symdiff.classify import (
    ESSENTIAL,
    FINITE_MONODROMY,
    FIRST_KIND,
    INFINITE_MONODROMY,
    MEROMORPHIC,
    NON_SPLIT,
    SeparatedDensity,
    classify_point,
    pullback_log_residues,
    separate_log_density,
)
from symdiff.cli import BUNDLED_EXAMPLES
from symdiff.errors import FieldExtensionRequired, NotSeparable, WebDegenerate
from symdiff.expr import Mul, Num, Document, expand_expr_at, parse_document
from symdiff.laurent import LaurentLog1
from symdiff.surface import p2, split_local

MONODROMY = "w = (1+z2)^alpha * d(z1) * d(z1*(1+z2))"
ESSENTIAL_W = "w = exp(z2/(1+z1*z2)) * d(z1) * d(z1*(1+z1*z2))"


def doc(text, alpha=None):
    if alpha is None:
        return parse_document(text)
    decl = "param alpha : irrational" if alpha == "irrational" else f"param alpha : = {alpha}"
    return parse_document(decl + "\n" + text)


def test_separate_monodromy_density():
    sd = separate_log_density(doc(MONODROMY, "irrational"))
    assert str(sd.A.log_coeff()) == "-alpha" and str(sd.B.log_coeff()) == "alpha"
    assert not sd.A.has_pole() and not sd.B.has_pole()
    assert not any(sd.A.component("alpha").taylor_part.coeffs)
    assert not any(sd.B.component("alpha").taylor_part.coeffs)


def test_separate_essential_density_literal_input():
    sd = separate_log_density(doc(ESSENTIAL_W))
    # log g = z2/(1+z1 z2) = 1/u1 - 1/u2 with u1 = z1, u2 = z1(1+z1 z2)
    assert sd.A.pole_part() == (1,)
    assert sd.B.pole_part() == (-1,)
    assert sd.A.log_coeff().is_zero() and sd.B.log_coeff().is_zero()
    assert not any(sd.A.component().taylor_part.coeffs)
    assert not any(sd.B.component().taylor_part.coeffs)
    assert sd.pole_sources == {"exp"}


def test_separate_essential_density_opposite_sign():
    sd = separate_log_density(doc(ESSENTIAL_W.replace("exp(z2", "exp(-z2")))
    assert sd.A.pole_part() == (-1,)
    assert sd.B.pole_part() == (1,)


def test_separate_product_density_is_holomorphic():
    sd = separate_log_density(doc("w = (1+z1)*(1+z2)*d(z1)*d(z2)"))
    assert sd.A.is_holomorphic() and sd.B.is_holomorphic()
    log1p = [Fraction((-1) ** (k + 1), k) for k in range(1, 8)]
    assert list(sd.A.component().taylor_part.coeffs[1:8]) == log1p
    assert list(sd.B.component().taylor_part.coeffs[1:8]) == log1p
    assert sd.scale == 1


def test_not_separable():
    with pytest.raises(NotSeparable):
        separate_log_density(doc("w = exp(z1*z2)*d(z1)*d(z2)"))


def test_web_degenerate():
    with pytest.raises(WebDegenerate):
        separate_log_density(doc("w = (1+z1)*d(z1+z2)^2"))


@pytest.mark.parametrize(
    "text, point, expected",
    [
        ("w = z1*d(z1)^2 - d(z2)^2", (0, 0), NON_SPLIT),
        ("w = z1*d(z1)^2 - d(z2)^2", (1, 0), FIRST_KIND),
        ("param alpha : irrational\n" + MONODROMY, (0, 0), INFINITE_MONODROMY),
        ("param alpha : irrational\n" + MONODROMY, (1, 0), FIRST_KIND),
        (ESSENTIAL_W, (0, 0), ESSENTIAL),
        (ESSENTIAL_W, (0, 1), ESSENTIAL),
        (ESSENTIAL_W, (2, -1), FIRST_KIND),
        ("w = z2/z1*d(z1)*d(z2)", (0, 0), MEROMORPHIC),
        ("w = z1*d(z1)*d(z2)", (0, 0), FIRST_KIND),
        ("w = exp(z1*z2)*d(z1)*d(z2)", (0, 0), "NotClosedHere"),
        ("w = exp(z1*z2)*d(z1)*d(z2) + d(z1)^2", (0, 0), "NotClosedHere"),
    ],
)
def test_verdicts(text, point, expected):
    assert classify_point(doc(text), point).verdict == expected


@pytest.mark.parametrize("alpha, q", [("1/2", 2), ("3/4", 4), ("5/3", 3), ("-2/5", 5)])
def test_finite_monodromy_cover_order(alpha, q):
    c = classify_point(doc(MONODROMY, alpha), (0, 0))
    assert c.verdict == FINITE_MONODROMY and c.cover_order == q
    assert c.label == f"FiniteMonodromy({q})"


def test_integer_exponent_has_no_monodromy():
    # log coefficients are -alpha and +alpha, so one factor always has a pole
    for alpha in ("2", "-1"):
        assert classify_point(doc(MONODROMY, alpha), (0, 0)).verdict == MEROMORPHIC
    assert classify_point(doc(MONODROMY, "0"), (0, 0)).verdict == FIRST_KIND


@pytest.mark.parametrize("alpha", ["1/2", "3/4", "5/3"])
def test_cover_pullback_makes_log_coefficients_integral(alpha):
    d = doc(MONODROMY, alpha)
    q = Fraction(alpha).denominator
    residues = pullback_log_residues(d, 1, q)
    assert all(r.is_real_rational() and r.const.denominator == 1 for r in residues)
    a = Fraction(alpha)
    assert [Fraction(int(r.const.numerator), int(r.const.denominator)) for r in residues] == [-a * q, a * q]
    plain = pullback_log_residues(d, 1, 1)
    assert any(r.const.denominator != 1 for r in plain)


def test_scaling_invariance():
    for text in [MONODROMY.replace("alpha", "3/4"), ESSENTIAL_W, "w = (1+z1)*(1+z2)*d(z1)*d(z2)", "w = z2/z1*d(z1)*d(z2)"]:
        base = doc(text)
        scaled = Document(Mul((Num(Fraction(-7, 3)),) + ((base.expr.factors) if isinstance(base.expr, Mul) else (base.expr,))), base.params)
        for pt in [(0, 0), (1, 1)]:
            c0, c1 = classify_point(base, pt), classify_point(scaled, pt)
            assert c0.label == c1.label
            e0, e1 = c0.evidence, c1.evidence
            assert isinstance(e0, SeparatedDensity)
            assert e1.prefactor == e0.prefactor * Fraction(-7, 3)
            if e0.scale is not None:
                assert e1.scale == e0.scale * Fraction(-7, 3)
            assert e0.A == e1.A and e0.B == e1.B


def test_scaling_invariance_for_sums():
    c0 = classify_point(doc("w = z1*d(z1)^2 - d(z2)^2"), (1, 0))
    c1 = classify_point(doc("w = 5*(z1*d(z1)^2 - d(z2)^2)"), (1, 0))
    assert c0.verdict == c1.verdict == FIRST_KIND
    assert c1.evidence.scalar == 5 * c0.evidence.scalar


def test_degenerate_sum_needs_structured_form():
    c = classify_point(doc("w = z1^2*d(z1)^2 - d(z2)^2"), (0, 0))
    assert c.verdict == "Undetermined" and c.notice and c.closed is not None


# -- consistency with the closedness criterion ---------------------------------

SUITE_POINTS = [(0, 0), (1, 0), (0, 1), (Fraction(1, 2), -1), (-1, 2)]


def suite():
    for path in sorted(Path(BUNDLED_EXAMPLES).glob("*.w")):
        yield path.name, parse_document(path.read_text())


@pytest.mark.parametrize("name, d", list(suite()))
def test_first_kind_implies_p2_zero_and_not_closed_implies_nonzero(name, d):
    for pt in SUITE_POINTS:
        c = classify_point(d, pt, order=10)
        if c.verdict not in (FIRST_KIND, "NotClosedHere"):
            continue
        try:
            w = expand_expr_at(d.expr, pt, 10, d.params)
        except Exception:
            continue
        assert p2(w).is_zero() == (c.verdict == FIRST_KIND), (name, pt)


@pytest.mark.parametrize("name, d", list(suite()))
def test_failure_locus_inside_degeneracy_divisor(name, d):
    for pt in SUITE_POINTS:
        c = classify_point(d, pt, order=10)
        if c.verdict in (FIRST_KIND, "NotClosedHere"):
            continue
        if c.disc_at_point is None:
            # w itself has a pole or branch point here, outside the statement
            assert (name, pt) in NOT_HOLOMORPHIC, (name, pt, c.label)
            continue
        assert c.disc_at_point == 0, (name, pt, c.label)


NOT_HOLOMORPHIC = {
    ("meromorphic.w", (0, 0)),
    ("meromorphic.w", (0, 1)),
    ("monodromy.w", (Fraction(1, 2), -1)),
}


def test_nonsquare_constant_is_not_reported_as_nonsplit():
    d = parse_document((BUNDLED_EXAMPLES / "nonsplit.w").read_text())
    c = classify_point(d, (Fraction(1, 2), -1), order=10)
    # disc = 2 at this point: a square over C, not in Q(i)
    assert c.disc_at_point == 2
    assert c.verdict in (FIRST_KIND, "NotClosedHere")
    assert "Q(i)" in c.notice
    w = expand_expr_at(d.expr, (Fraction(1, 2), -1), 10, d.params)
    with pytest.raises(FieldExtensionRequired):
        split_local(w)


def test_laurent_from_derivative():
    from symdiff.laurent import Laurent
    from symdiff.series import Series1

    # A'(u) = -1/u^2 + 3/u + 2  ->  A = 1/u + 3 log u + 2u
    d = Laurent(-2, Series1(6, [-1, 3, 2]))
    L = LaurentLog1.from_derivative(d)
    assert L.pole_part == (1,) and L.log_coeff == 3 and L.taylor_part[1] == 2
    assert L.to_text() == "1/u + 3*log(u) + 2*u"
    assert not L.is_holomorphic()
