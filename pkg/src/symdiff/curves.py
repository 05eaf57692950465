"""Decompositions of a symmetric m-differential on a curve of genus g.

Up to constants such a differential is a product of m twisted 1-differentials,
one for each splitting of its zero divisor (m(2g-2) points, labeled so that
multiplicities count as distinct points) into m ordered groups of 2g-2.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import factorial
from operator import itemgetter

__all__ = ["CurveDivisor", "count_representations", "enumerate_splittings", "splitting_chunks", "enumerate_from", "count_by_enumeration"]


@dataclass(frozen=True)
class CurveDivisor:
    g: int
    m: int
    points: tuple = ()

    def __post_init__(self):
        if self.g < 2 or self.m < 1:
            raise ValueError("need genus g >= 2 and degree m >= 1")
        size = self.m * (2 * self.g - 2)
        if not self.points:
            object.__setattr__(self, "points", tuple(range(1, size + 1)))
        if len(self.points) != size:
            raise ValueError(f"a degree-{self.m} divisor on genus {self.g} has {size} points")
        if len(set(self.points)) != size:
            raise ValueError("labels must be distinct; give repeated points separate labels")

    @property
    def group_size(self) -> int:
        return 2 * self.g - 2


def count_representations(g: int, m: int) -> int:
    """``((2g-2)m)! / ((2g-2)!)^m``."""
    if g < 2 or m < 1:
        raise ValueError("need genus g >= 2 and degree m >= 1")
    k = 2 * g - 2
    return factorial(k * m) // factorial(k) ** m


@lru_cache(maxsize=None)
def _index_splits(size: int, k: int) -> tuple:
    """Getter pairs (chosen, rest) for every k-subset of positions 0..size-1."""
    out = []
    for idx in combinations(range(size), k):
        rest = tuple(i for i in range(size) if i not in idx)
        out.append((_getter(idx), _getter(rest)))
    return tuple(out)


def _getter(idx: tuple):
    g = itemgetter(*idx)
    if len(idx) == 1:
        return lambda xs: (g(xs),)
    return g


def _split(labels: tuple, k: int, prefix: tuple):
    if len(labels) == k:
        yield prefix + (labels,)
        return
    pairs = _index_splits(len(labels), k)
    if len(labels) == 2 * k:
        for take, rest in pairs:
            yield prefix + (take(labels), rest(labels))
        return
    for take, rest in pairs:
        yield from _split(rest(labels), k, prefix + (take(labels),))


def enumerate_splittings(d: CurveDivisor):
    """Every ordered partition of ``d.points`` into m groups of size 2g-2, once each."""
    yield from _split(tuple(d.points), d.group_size, ())


def splitting_chunks(d: CurveDivisor) -> list:
    """First groups; ``enumerate_from(d, first)`` covers the splittings starting with each."""
    if d.m == 1:
        return [tuple(d.points)]
    return list(combinations(d.points, d.group_size))


def enumerate_from(d: CurveDivisor, first: tuple):
    chosen = set(first)
    rest = tuple(x for x in d.points if x not in chosen)
    if not rest:
        yield (first,)
        return
    yield from _split(rest, d.group_size, (first,))


def _count_chunk(args) -> int:
    d, first = args
    return sum(1 for _ in enumerate_from(d, first))


def count_by_enumeration(d: CurveDivisor, workers: int | None = None) -> int:
    """Length of the splitting stream, consuming chunks in worker processes."""
    if not workers or workers < 2 or d.m < 3:
        return sum(1 for _ in enumerate_splittings(d))
    from concurrent.futures import ProcessPoolExecutor

    chunks = [(d, first) for first in splitting_chunks(d)]
    with ProcessPoolExecutor(workers) as ex:
        return sum(ex.map(_count_chunk, chunks, chunksize=max(1, len(chunks) // (8 * workers))))
