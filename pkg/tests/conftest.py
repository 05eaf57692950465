import random
from fractions import Fraction

import pytest

from symdiff.series import Series2
from symdiff.surface import OneForm2, SymDiff2


def series_from(poly: dict, order: int) -> Series2:
    return Series2(order, {k: Fraction(v) for k, v in poly.items()})


def coeff_dict(s: Series2, upto: int) -> dict:
    """Nonzero coefficients of total degree <= upto as Fractions."""
    out = {}
    for (i, j), c in s.coeffs.items():
        if i + j <= upto:
            assert not c.im
            out[(i, j)] = Fraction(int(c.re.numerator), int(c.re.denominator))
    return out


def exact_differential(F: dict, order: int) -> OneForm2:
    """dF for a polynomial F, with no precision loss at ``order``."""
    s = series_from(F, order + 1)
    return OneForm2(s.deriv(1).truncate(order), s.deriv(2).truncate(order))


def random_potential_pair(rng: random.Random, degree: int = 4):
    """Polynomials F1, F2 with integer coefficients in [-9, 9] and dF1 ^ dF2 != 0 at 0."""
    while True:
        pair = []
        for _ in range(2):
            F = {}
            for d in range(1, degree + 1):
                for j in range(d + 1):
                    c = rng.randint(-9, 9)
                    if c:
                        F[(d - j, j)] = c
            pair.append(F)
        F1, F2 = pair
        jac = F1.get((1, 0), 0) * F2.get((0, 1), 0) - F1.get((0, 1), 0) * F2.get((1, 0), 0)
        if jac:
            return F1, F2


def product_differential(F1: dict, F2: dict, order: int) -> SymDiff2:
    return exact_differential(F1, order) * exact_differential(F2, order)


@pytest.fixture
def rng():
    return random.Random(20240601)
