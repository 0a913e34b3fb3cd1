"""Exhaustive census of line complexes in Z_2^3 and the closed-form counts.

The census walks all C(28, 8) complexes in lexicographic order.  Ranges
of that order can be processed independently and merged, so the sweep
partitions deterministically.  Every complex is reduced to a small
record (omitted points, isolated lines, tree present, even cycle
present, admissible); the census keeps the multiset of records and all
counts are read off it.
"""

from __future__ import annotations

import itertools
import logging
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .complexes import add_edge, classify_components, line_masks, line_pairs
from .exact import batch_determinants
from .geometry import GeometrySpace

log = logging.getLogger(__name__)

CENSUS_N = 3
CHUNK = 50_000


def binomial(a: int, b: int) -> int:
    if not 0 <= b <= a:
        raise ValueError(f"binomial({a}, {b}) needs 0 <= b <= a")
    return math.comb(a, b)


def combination_rank(subset, n: int) -> int:
    """Lexicographic rank of a sorted k-subset of range(n)."""
    subset = list(subset)
    k = len(subset)
    if sorted(set(subset)) != subset or (subset and not 0 <= subset[0] <= subset[-1] < n):
        raise ValueError(f"{subset} is not a sorted subset of range({n})")
    r = 0
    prev = -1
    for i, c in enumerate(subset):
        for skipped in range(prev + 1, c):
            r += math.comb(n - skipped - 1, k - i - 1)
        prev = c
    return r


def combination_unrank(index: int, n: int, k: int) -> tuple[int, ...]:
    """The k-subset of range(n) with the given lexicographic rank."""
    total = binomial(n, k)
    if not 0 <= index < total:
        raise ValueError(f"rank {index} outside [0, {total})")
    out = []
    c = 0
    for i in range(k):
        while True:
            block = math.comb(n - c - 1, k - i - 1)
            if index < block:
                break
            index -= block
            c += 1
        out.append(c)
        c += 1
    return tuple(out)


def partition_ranges(total: int, parts: int) -> list[tuple[int, int]]:
    if parts < 1:
        raise ValueError("need at least one partition")
    bounds = [total * i // parts for i in range(parts + 1)]
    return list(zip(bounds, bounds[1:]))


def iter_combinations(n: int, k: int, start: int, stop: int):
    """Lexicographic k-subsets of range(n) with ranks in [start, stop)."""
    if start >= stop:
        return iter(())
    it = itertools.islice(itertools.combinations(range(n), k), start, stop)
    first = next(it)
    if first != combination_unrank(start, n, k):
        raise RuntimeError("combination order drifted from the ranking")
    return itertools.chain((first,), it)


# record layout: (omitted, isolated_lines, tree, even_cycle, admissible)
OMITTED, ISOLATED, TREE, EVEN, ADMISSIBLE = range(5)


@dataclass
class CensusResult:
    records: Counter = field(default_factory=Counter)
    rank_checked: int = 0
    disagreements: int = 0

    def __add__(self, other: CensusResult) -> CensusResult:
        return CensusResult(
            self.records + other.records,
            self.rank_checked + other.rank_checked,
            self.disagreements + other.disagreements,
        )

    def count(self, pred) -> int:
        return sum(v for rec, v in self.records.items() if pred(rec))

    def count_weighted(self, weight) -> int:
        """Sum of weight(record) over complexes: counts with multiplicity."""
        return sum(v * weight(rec) for rec, v in self.records.items())

    @property
    def total(self) -> int:
        return sum(self.records.values())

    @property
    def admissible(self) -> int:
        return self.count(lambda r: r[ADMISSIBLE])

    @property
    def inadmissible(self) -> int:
        return self.total - self.admissible

    def histogram(self) -> dict[str, int]:
        """Non-exclusive obstruction incidence."""
        return {
            "omitted_point": self.count(lambda r: r[OMITTED] > 0),
            "isolated_tree": self.count(lambda r: r[TREE]),
            "even_cycle": self.count(lambda r: r[EVEN]),
        }

    def as_dict(self) -> dict:
        out = {
            "total": self.total,
            "admissible": self.admissible,
            "inadmissible": self.inadmissible,
            "obstructions": self.histogram(),
        }
        if self.rank_checked:
            out["rank_checked"] = self.rank_checked
            out["disagreements"] = self.disagreements
        return out


def _rank_verdicts(space: GeometrySpace, combos: list[tuple[int, ...]]) -> np.ndarray:
    rows = np.zeros((len(line_pairs(space)), space.point_count), dtype=np.int64)
    for i, (a, b) in enumerate(line_pairs(space)):
        rows[i, a] = rows[i, b] = 1
    mats = rows[np.asarray(combos, dtype=np.intp)]
    return batch_determinants(mats) != 0


def census_range(start: int, stop: int, verify_rank: bool = False, n: int = CENSUS_N) -> CensusResult:
    """Classify the complexes whose lexicographic ranks lie in [start, stop).

    The walk is depth-first over lexicographic combinations.  Component
    state is built once per prefix and shared by all its extensions;
    subtrees whose rank interval misses [start, stop) are skipped whole.
    """
    space = GeometrySpace(2, n)
    masks = line_masks(space)
    pairs = line_pairs(space)
    points = k = space.point_count
    total = len(pairs)
    records: Counter = Counter()
    result = CensusResult(records)
    chosen: list[int] = []
    edges: list[tuple[int, int]] = []
    chunk: list[tuple[int, ...]] = []
    verdicts: list[bool] = []

    def flush():
        oracle = _rank_verdicts(space, chunk)
        result.rank_checked += len(chunk)
        result.disagreements += int(np.count_nonzero(oracle != np.array(verdicts)))
        chunk.clear()
        verdicts.clear()

    def leaves(first, base, comps):
        # the last line ranges over first..total-1, with ranks base, base+1, ...
        lo = first + max(0, start - base)
        hi = min(total, first + stop - base)
        for c in range(lo, hi):
            ma, mb = masks[c]
            edges.append(pairs[c])
            rec = classify_components(add_edge(comps, ma, mb), edges, points)
            edges.pop()
            records[rec] += 1
            if verify_rank:
                chunk.append((*chosen, c))
                verdicts.append(rec[ADMISSIBLE])
                if len(chunk) >= CHUNK:
                    flush()

    def descend(level, first, base, comps):
        for c in range(first, total - (k - level) + 1):
            size = math.comb(total - c - 1, k - level - 1)
            if base >= stop:
                return
            if base + size > start:
                ma, mb = masks[c]
                chosen.append(c)
                edges.append(pairs[c])
                nxt = add_edge(comps, ma, mb)
                if level == k - 2:
                    leaves(c + 1, base, nxt)
                else:
                    descend(level + 1, c + 1, base, nxt)
                chosen.pop()
                edges.pop()
            base += size

    if start < stop:
        descend(0, 0, 0, ())
    if chunk:
        flush()
    return result


def _census_job(args):
    return census_range(*args)


def enumerate_all_complexes(n: int = CENSUS_N, partitions: int = 1, verify_rank: bool = False,
                            workers: int | None = None) -> CensusResult:
    """Classify every complex of Z_2^3.

    The lexicographic range is cut into ``partitions`` disjoint pieces;
    with ``workers > 1`` they run in separate processes.  Results merge
    in partition order, so totals never depend on either setting.
    """
    if n != CENSUS_N:
        raise ValueError(f"exhaustive census only for n=3; n={n} has C({2**(n-1)*(2**n-1)}, {2**n}) complexes")
    space = GeometrySpace(2, n)
    total = binomial(len(line_pairs(space)), space.point_count)
    jobs = [(a, b, verify_rank, n) for a, b in partition_ranges(total, partitions)]
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_census_job, jobs))
    else:
        parts = [_census_job(j) for j in jobs]
    out = CensusResult()
    for i, p in enumerate(parts):
        log.debug("partition %d: %d complexes", i, p.total)
        out = out + p
    return out


# -- closed-form counts -------------------------------------------------------------


@dataclass(frozen=True)
class Count:
    name: str
    closed_form: int
    brute_force: int

    @property
    def agrees(self) -> bool:
        return self.closed_form == self.brute_force


def _guard(n: int):
    if n != CENSUS_N:
        raise ValueError("the closed-form counts are stated for n=3")


@dataclass(frozen=True)
class LineCounts:
    """Incidence numbers of Z_2^n that the closed forms are built from."""

    points: int
    lines: int
    through_point: int
    meeting_line: int  # lines sharing a point with a given line, itself included

    @classmethod
    def of(cls, n: int) -> LineCounts:
        space = GeometrySpace(2, n)
        pairs = line_pairs(space)
        through = sum(0 in p for p in pairs)
        meeting = sum(bool(set(p) & set(pairs[0])) for p in pairs)
        return cls(space.point_count, len(pairs), through, meeting)

    @property
    def avoiding_point(self) -> int:
        return self.lines - self.through_point

    @property
    def avoiding_two_points(self) -> int:
        return self.lines - (2 * self.through_point - 1)

    @property
    def disjoint_from_line(self) -> int:
        return self.lines - self.meeting_line


def count_point_omitting(census: CensusResult, n: int = CENSUS_N) -> list[Count]:
    _guard(n)
    k = LineCounts.of(n)
    c = binomial
    mult = k.points * c(k.avoiding_point, k.points)
    pairs = c(k.points, 2) * c(k.avoiding_two_points, k.points)
    # lines missing three given points form the complete graph on the other five
    triples = c(c(k.points - 3, 2), k.points) * c(k.points, 3)
    return [
        Count("omit_multiplicity", mult, census.count_weighted(lambda r: r[OMITTED])),
        Count("omit_pairs", pairs, census.count_weighted(lambda r: math.comb(r[OMITTED], 2))),
        Count("omit_exactly_three", triples, census.count(lambda r: r[OMITTED] == 3)),
        Count("omit_four_or_more", 0, census.count(lambda r: r[OMITTED] >= 4)),
        Count("omit_distinct", mult - pairs + triples, census.count(lambda r: r[OMITTED] > 0)),
    ]


def count_isolated_lines(census: CensusResult, n: int = CENSUS_N) -> list[Count]:
    _guard(n)
    k = LineCounts.of(n)
    mult = k.lines * binomial(k.disjoint_from_line, k.points - 1)
    two = k.lines * k.disjoint_from_line // 2
    return [
        Count("isolated_multiplicity", mult, census.count_weighted(lambda r: r[ISOLATED])),
        Count("isolated_exactly_two", two, census.count(lambda r: r[ISOLATED] == 2)),
        Count("isolated_three_or_more", 0, census.count(lambda r: r[ISOLATED] >= 3)),
        Count("isolated_distinct", mult - two, census.count(lambda r: r[ISOLATED] > 0)),
    ]


def count_mixed(census: CensusResult, n: int = CENSUS_N) -> list[Count]:
    _guard(n)
    k = LineCounts.of(n)
    disjoint_pairs = k.points * k.avoiding_point
    # the remaining five points span C(5, 2) lines, seven of which complete the complex
    mixed = disjoint_pairs * binomial(binomial(k.points - 3, 2), k.points - 1)
    return [
        Count("disjoint_point_line_pairs", disjoint_pairs, disjoint_point_line_pairs(n)),
        Count("isolated_and_omitted", mixed, census.count(lambda r: r[ISOLATED] > 0 and r[OMITTED] > 0)),
        Count("isolated_and_omitted_multiplicity", mixed, census.count_weighted(lambda r: r[ISOLATED] * r[OMITTED])),
        Count("one_isolated_two_omitted", 0, census.count(lambda r: r[ISOLATED] >= 1 and r[OMITTED] >= 2)),
        Count("two_isolated_one_omitted", 0, census.count(lambda r: r[ISOLATED] >= 2 and r[OMITTED] >= 1)),
    ]


def disjoint_point_line_pairs(n: int = CENSUS_N) -> int:
    space = GeometrySpace(2, n)
    return sum(p not in line for p in range(space.point_count) for line in line_pairs(space))


def closed_form_counts(census: CensusResult) -> list[Count]:
    return count_point_omitting(census) + count_isolated_lines(census) + count_mixed(census)
