"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v``; the criterion lines are
written straight to the terminal, so they also show up without ``-s``.
"""

import random
import subprocess
import sys
import time
from fractions import Fraction

import pytest

from symdiff.classify import ESSENTIAL, FIRST_KIND, INFINITE_MONODROMY, NON_SPLIT, classify_point
from symdiff.cli import BUNDLED_EXAMPLES, main
from symdiff.curves import CurveDivisor, count_representations, enumerate_splittings
from symdiff.expr import expand_expr_at, parse_document
from symdiff.jets import JetDimQuery, jacobian_rank_closed_locus
from symdiff.series import Series2, ps_exp, ps_inv, ps_log
from symdiff.surface import SymDiff2, brioschi_R, decompositions_agree, exact_decomposition, p2

from conftest import coeff_dict, product_differential, random_potential_pair
from oracle import brioschi_numerator, exp_monomial

SEED = 20240601


@pytest.fixture
def report(capsys):
    def emit(label, ok, detail=""):
        with capsys.disabled():
            print(f"\n[acceptance] criterion {label}: {'PASS' if ok else 'FAIL'}  {detail}".rstrip())

    return emit


def load(name):
    return parse_document((BUNDLED_EXAMPLES / name).read_text(encoding="utf-8"))


def potential_pairs():
    rng = random.Random(SEED)
    return [random_potential_pair(rng) for _ in range(50)]


def density_form(f):
    n = f.order
    return SymDiff2(Series2.zero(n), f, Series2.zero(n))


def test_criterion_1_forward(report):
    t0 = time.perf_counter()
    orders = []
    for F1, F2 in potential_pairs():
        val = p2(product_differential(F1, F2, 14))
        orders.append(val.certified_order if val.is_zero() else -1)
    elapsed = time.perf_counter() - t0
    ok = min(orders) >= 12 and elapsed < 10
    report(1, ok, f"50/50 p2 == 0, min certified order {min(orders)}, {elapsed:.2f}s")
    assert ok


def test_criterion_2_backward_and_uniqueness(report):
    failures = 0
    for F1, F2 in potential_pairs():
        w = product_differential(F1, F2, 12)
        dec = exact_decomposition(w)
        back = dec.reassemble()
        if not back.eq_to(w, back.certified_order):
            failures += 1
            continue
        for kwargs in ({"swap": True}, {"scales": (3, Fraction(-2, 5))}):
            c = decompositions_agree(dec, exact_decomposition(w, **kwargs))
            if c is None or c == 0:
                failures += 1
    report(2, not failures, f"{failures} failures over 50 decompositions and 100 perturbed rules")
    assert not failures


def test_criterion_3_not_closed(report, capsys):
    n = 12
    val = p2(density_form(ps_exp(Series2.var(1, n) * Series2.var(2, n))))
    k = val.certified_order
    closed_form = {key: v * Fraction(-1, 8) for key, v in exp_monomial(3, k).items()}
    oracle = brioschi_numerator({}, exp_monomial(1, n), {}, k)
    coeffs = coeff_dict(val, k)
    code = main(["classify", str(BUNDLED_EXAMPLES / "notclosed.w"), "--format", "structured"])
    verdict = '"verdict": "NotClosedHere"' in capsys.readouterr().out
    ok = k >= 10 and coeffs == closed_form == oracle and code == 2 and verdict
    report(3, ok, f"p2 == -exp(3 z1 z2)/8 to order {k}, oracle agrees, exit {code}")
    assert ok


def test_criterion_4ab_example_suite(report):
    t0 = time.perf_counter()
    d = load("nonsplit.w")
    a0 = classify_point(d, (0, 0))
    a1 = classify_point(d, (1, 0))
    dec = a1.evidence
    w1 = expand_expr_at(d.expr, (1, 0), 16, d.params)
    ok_a = a0.verdict == NON_SPLIT and a1.verdict == FIRST_KIND and dec.reassemble().eq_to(w1, dec.reassemble().certified_order)
    got_b = {}
    for name in ("monodromy_half.w", "monodromy_three_quarters.w", "monodromy_five_thirds.w", "monodromy.w"):
        got_b[name] = classify_point(load(name)).label
    want_b = {
        "monodromy_half.w": "FiniteMonodromy(2)",
        "monodromy_three_quarters.w": "FiniteMonodromy(4)",
        "monodromy_five_thirds.w": "FiniteMonodromy(3)",
        "monodromy.w": INFINITE_MONODROMY,
    }
    elapsed = time.perf_counter() - t0
    ok = ok_a and got_b == want_b and elapsed < 5
    report("4(a,b)", ok, f"{a0.label} at (0,0), {a1.label} at (1,0), {sorted(got_b.values())}, {elapsed:.2f}s")
    assert ok


def _pole_parts(name):
    c = classify_point(load(name))
    sd = c.evidence
    return c.verdict, sd.A.pole_part(), sd.B.pole_part()


def test_criterion_4c_essential_verdict(report):
    verdict, pa, pb = _pole_parts("essential.w")
    # log g = z2/(1+z1 z2) = 1/u1 - 1/u2 for u1 = z1, u2 = z1(1+z1 z2)
    ok = verdict == ESSENTIAL and (pa, pb) == ((1,), (-1,))
    cverdict, ca, cb = _pole_parts("essential_conjugate.w")
    ok = ok and cverdict == ESSENTIAL and (ca, cb) == ((-1,), (1,))
    report("4(c)", ok, f"{verdict}, literal input separates as ({pa[0]}/u1, {pb[0]}/u2); exp(-z2/(1+z1 z2)) gives ({ca[0]}/u1, {cb[0]}/u2)")
    assert ok


@pytest.mark.xfail(strict=True, reason="the stated signs (-1/u1, +1/u2) belong to exp(-z2/(1+z1 z2)); the literal input has the opposite signs")
def test_criterion_4c_stated_signs(report):
    verdict, pa, pb = _pole_parts("essential.w")
    ok = verdict == ESSENTIAL and (pa, pb) == ((-1,), (1,))
    report("4(c) stated signs", ok, f"expected (-1/u1, +1/u2) for exp(z2/(1+z1 z2)), computed ({pa[0]}/u1, {pb[0]}/u2)")
    assert ok


SUITE_POINTS = [(0, 0), (1, 0), (0, 1), (Fraction(1, 2), -1), (-1, 2)]


def test_criterion_5_failure_locus(report):
    checked, bad, skipped = 0, [], 0
    for path in sorted(BUNDLED_EXAMPLES.glob("*.w")):
        d = parse_document(path.read_text(encoding="utf-8"))
        for pt in SUITE_POINTS:
            c = classify_point(d, pt, order=10)
            if c.verdict == FIRST_KIND:
                continue
            if c.verdict == "NotClosedHere" or c.disc_at_point is None:
                # the statement is about closed holomorphic differentials
                skipped += 1
                continue
            checked += 1
            if c.disc_at_point != 0:
                bad.append((path.name, pt, c.label))
    report(5, not bad, f"{checked} non-FirstKind points all on disc = 0 ({skipped} outside the hypotheses skipped)")
    assert not bad


def test_criterion_6_curvature_of_density(report):
    rng = random.Random(SEED)
    n = 12
    worst = None
    failures = 0
    for _ in range(20):
        data = {(0, 0): rng.choice([1, -1, 2, -3, 5])}
        for d in range(1, 5):
            for j in range(d + 1):
                if rng.random() < 0.5:
                    data[(d - j, j)] = rng.randint(-9, 9)
        f = Series2(n, data)
        num, den = brioschi_R(density_form(f))
        mixed = ps_log(f).deriv(1).deriv(2)
        target = den * (ps_inv(f) * mixed).scale(-2)
        k = min(num.certified_order, target.certified_order)
        worst = k if worst is None else min(worst, k)
        if k < 10 or not num.eq_to(target, k):
            failures += 1
    report(6, not failures, f"20 densities, R == -(2/f) d1 d2 log f to order >= {worst}")
    assert not failures


def test_criterion_7_jets(report):
    t0 = time.perf_counter()
    problems = []
    for m in range(2, 5):
        for n in range(1, 7):
            r = jacobian_rank_closed_locus(JetDimQuery(m, n, samples=5))
            if any(s > m * n + 1 for s in r.sample_ranks):
                problems.append((m, n, "bound"))
            if n > 2 * m - 3 and not r.observed_rank < (n + 2) * (n + 1) // 2:
                problems.append((m, n, "proper"))
            if (m, n) == (2, 2) and r.observed_rank != 5:
                problems.append((m, n, r.observed_rank))
            if (m, n) == (2, 1) and r.observed_rank != 3:
                problems.append((m, n, r.observed_rank))
    elapsed = time.perf_counter() - t0
    ok = not problems and elapsed < 30
    report(7, ok, f"18 (m, n) pairs x 5 samples, problems {problems}, {elapsed:.2f}s")
    assert ok


def test_criterion_8_curves(report):
    t0 = time.perf_counter()
    mismatches = []
    for g in range(2, 5):
        for m in range(1, 4):
            d = CurveDivisor(g, m)
            if sum(1 for _ in enumerate_splittings(d)) != count_representations(g, m):
                mismatches.append((g, m))
    spots = (count_representations(2, 2), count_representations(3, 2))
    ok = not mismatches and spots == (6, 70)
    report(8, ok, f"stream lengths match for g <= 4, m <= 3; spot values {spots}, {time.perf_counter() - t0:.2f}s")
    assert ok


def test_criterion_9_determinism(report):
    outputs = []
    for command in ("classify", "p2", "det", "split", "decompose"):
        argv = [sys.executable, "-m", "symdiff", command, "--all", "--format", "structured"]
        runs = [subprocess.run(argv, capture_output=True, check=False).stdout for _ in range(2)]
        outputs.append(runs[0] == runs[1] and bool(runs[0]))
    ok = all(outputs)
    report(9, ok, "two consecutive batch runs per command are byte-identical")
    assert ok
