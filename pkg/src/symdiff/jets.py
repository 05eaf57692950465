"""Jet-space dimension checks for closed m-differentials on a fixed web.

Near a nonsingular m-web with linear first integrals ``l_1, ..., l_m`` a
closed m-differential is ``f * dl_1 ... dl_m`` with ``f = prod f_i(l_i(z))``.
The n-jets of such f form the image of the map sending the n-jets of the
univariate ``f_i`` to the n-jet of the product.  Its dimension is the generic
rank of the Jacobian, computed exactly at random integer points.
"""

from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .series import Series1, Series2, ps_compose

__all__ = ["JetDimQuery", "JetDimReport", "LINEAR_FORMS", "jet_dims", "jacobian_rank_closed_locus", "bareiss_rank"]

# pairwise independent linear forms (a, b) meaning a*z1 + b*z2
LINEAR_FORMS = ((1, 0), (0, 1), (1, 1), (1, -1), (1, 2), (2, 1), (1, -2), (2, -1))


@dataclass(frozen=True)
class JetDimQuery:
    m: int
    n: int
    samples: int = 5
    seed: int = 0

    def __post_init__(self):
        if self.m < 2 or self.n < 1 or self.samples < 1:
            raise ValueError("need m >= 2, n >= 1 and samples >= 1")
        if self.m > len(LINEAR_FORMS):
            raise ValueError(f"at most {len(LINEAR_FORMS)} web directions are built in")


@dataclass(frozen=True)
class JetDimReport:
    m: int
    n: int
    ambient_dim: int
    closed_bound: int
    observed_rank: int
    proper: bool
    threshold_proper: bool
    sample_ranks: tuple = field(default=())

    def to_dict(self) -> dict:
        return {
            "ambient_dim": self.ambient_dim,
            "closed_bound": self.closed_bound,
            "m": self.m,
            "n": self.n,
            "observed_rank": self.observed_rank,
            "proper": self.proper,
            "sample_ranks": list(self.sample_ranks),
            "threshold_proper": self.threshold_proper,
        }


def jet_dims(q: JetDimQuery) -> tuple[int, int, bool]:
    """``(ambient, bound, n > 2m - 3)`` from coefficient counting."""
    return (q.n + 2) * (q.n + 1) // 2, q.m * q.n + 1, q.n > 2 * q.m - 3


def bareiss_rank(rows: list) -> int:
    """Rank of an integer matrix by fraction-free elimination."""
    a = [list(r) for r in rows]
    if not a:
        return 0
    nrows, ncols = len(a), len(a[0])
    rank = 0
    prev = 1
    for col in range(ncols):
        piv = next((r for r in range(rank, nrows) if a[r][col]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        p = a[rank][col]
        for r in range(rank + 1, nrows):
            x = a[r][col]
            row_r, row_p = a[r], a[rank]
            for c in range(col + 1, ncols):
                row_r[c] = (p * row_r[c] - x * row_p[c]) // prev
            row_r[col] = 0
        prev = p
        rank += 1
        if rank == nrows:
            break
    return rank


def _monomials(n: int) -> list:
    return [(d - j, j) for d in range(n + 1) for j in range(d + 1)]


def _jacobian(jets: list, n: int) -> list:
    """Columns d(prod f_i(l_i)) / d(coefficient k of f_i), as integer vectors."""
    m = len(jets)
    ells = [Series2(n, {(1, 0): a, (0, 1): b}) for a, b in LINEAR_FORMS[:m]]
    comp = [ps_compose(Series1(n, f), ells[i]) for i, f in enumerate(jets)]
    mons = _monomials(n)
    cols = []
    for i in range(m):
        others = Series2.const(1, n)
        for j in range(m):
            if j != i:
                others = others * comp[j]
        power = Series2.const(1, n)
        for _ in range(n + 1):
            col = power * others
            cols.append([int(col[ij]) for ij in mons])
            power = power * ells[i]
    return cols


def _sample_rank(m: int, n: int, seed: int, index: int) -> int:
    rng = random.Random(f"{seed}:{m}:{n}:{index}")
    jets = []
    for _ in range(m):
        c0 = rng.choice([k for k in range(-9, 10) if k])
        jets.append([c0] + [rng.randint(-9, 9) for _ in range(n)])
    return bareiss_rank(_jacobian(jets, n))


def jacobian_rank_closed_locus(q: JetDimQuery, workers: int | None = None) -> JetDimReport:
    """Max exact rank of the product-map Jacobian over random integer jets."""
    ambient, bound, predicate = jet_dims(q)
    args = [(q.m, q.n, q.seed, k) for k in range(q.samples)]
    if workers and workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            ranks = tuple(ex.map(lambda a: _sample_rank(*a), args))
    else:
        ranks = tuple(_sample_rank(*a) for a in args)
    observed = max(ranks)
    return JetDimReport(q.m, q.n, ambient, bound, observed, observed < ambient, predicate, ranks)
