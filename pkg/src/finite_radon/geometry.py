"""Affine geometries over prime fields F_q.

Points are indexed little-endian in base q: the point with coordinates
``(c_0, ..., c_{n-1})`` has index ``sum(c_i * q**i)``.  Every matrix
ordering and file format in the package inherits this convention.

Flats are stored extensionally as sorted tuples of point indices, which
gives canonical equality for free.  Enumeration order is part of the
public contract: lines and hyperplanes are sorted by their point tuples.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property, lru_cache


def is_prime(q: int) -> bool:
    if q < 2:
        return False
    return all(q % d for d in range(2, int(q**0.5) + 1))


@dataclass(frozen=True)
class GeometrySpace:
    """The affine space F_q^n."""

    q: int
    n: int

    def __post_init__(self):
        if not isinstance(self.q, int) or not is_prime(self.q):
            raise ValueError(f"field order q={self.q!r} is not prime")
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"dimension n={self.n!r} must be >= 1")

    @property
    def point_count(self) -> int:
        return self.q**self.n

    def index(self, coords) -> int:
        if len(coords) != self.n:
            raise ValueError(f"expected {self.n} coordinates, got {len(coords)}")
        idx = 0
        for c in reversed(coords):
            if not 0 <= c < self.q:
                raise ValueError(f"coordinate {c} outside F_{self.q}")
            idx = idx * self.q + c
        return idx

    def coords(self, index: int) -> tuple[int, ...]:
        if not 0 <= index < self.point_count:
            raise ValueError(f"point index {index} out of range")
        out = []
        for _ in range(self.n):
            index, r = divmod(index, self.q)
            out.append(r)
        return tuple(out)

    def add(self, a: int, b: int) -> int:
        return self.index([(x + y) % self.q for x, y in zip(self.coords(a), self.coords(b))])

    def affine_combination(self, x: int, y: int, t: int) -> int:
        """Index of the point x + t(y - x)."""
        cx, cy = self.coords(x), self.coords(y)
        return self.index([(a + t * (b - a)) % self.q for a, b in zip(cx, cy)])


@dataclass(frozen=True)
class Point:
    space: GeometrySpace
    coords: tuple[int, ...]

    @property
    def index(self) -> int:
        return self.space.index(self.coords)


@dataclass(frozen=True)
class AffineFlat:
    """An affine k-flat, given by its sorted point indices.

    Construction checks the cardinality q**dim and closure under
    x + t(y - z); equality compares point tuples only.
    """

    space: GeometrySpace = field(compare=False)
    dim: int
    points: tuple[int, ...]

    def __post_init__(self):
        pts = tuple(sorted(self.points))
        object.__setattr__(self, "points", pts)
        q = self.space.q
        if len(pts) != q**self.dim or len(set(pts)) != len(pts):
            raise ValueError(f"a {self.dim}-flat over F_{q} has exactly {q**self.dim} points")
        # a flat is closed under x + t(y - z); pairs alone miss this when q = 2
        members = set(pts)
        vecs = [self.space.coords(p) for p in pts]
        for y, z in itertools.product(vecs, repeat=2):
            for x in vecs if y != z else ():
                for t in range(1, q):
                    p = self.space.index([(a + t * (b - c)) % q for a, b, c in zip(x, y, z)])
                    if p not in members:
                        raise ValueError(f"point set {pts} is not closed under affine combination")

    @cached_property
    def mask(self) -> int:
        m = 0
        for p in self.points:
            m |= 1 << p
        return m

    def __contains__(self, p: int) -> bool:
        return p in self.points


@dataclass(frozen=True)
class Spread:
    """A partition of the point set into flats, given by flat ids."""

    flats: tuple[int, ...]
    direction: tuple[int, ...] | None = None


def enumerate_points(space: GeometrySpace) -> list[Point]:
    return [Point(space, space.coords(i)) for i in range(space.point_count)]


def _span_line(space: GeometrySpace, x: int, y: int) -> tuple[int, ...]:
    return tuple(sorted({space.affine_combination(x, y, t) for t in range(space.q)}))


def enumerate_lines(space: GeometrySpace) -> list[AffineFlat]:
    """All affine lines, sorted by point tuple.

    For q = 2 these are exactly the unordered point pairs in
    lexicographic order.
    """
    return list(_lines(space))


@lru_cache(maxsize=None)
def _lines(space: GeometrySpace) -> tuple[AffineFlat, ...]:
    found = set()
    for x, y in itertools.combinations(range(space.point_count), 2):
        found.add(_span_line(space, x, y))
    return tuple(AffineFlat(space, 1, pts) for pts in sorted(found))


def _normal_directions(space: GeometrySpace):
    # One representative per projective point: first nonzero coordinate is 1.
    for vec in itertools.product(range(space.q), repeat=space.n):
        nz = [c for c in vec if c]
        if nz and nz[0] == 1:
            yield vec


def _hyperplane_classes(space: GeometrySpace):
    q = space.q
    for normal in _normal_directions(space):
        translates = [[] for _ in range(q)]
        for i in range(space.point_count):
            c = space.coords(i)
            translates[sum(a * b for a, b in zip(normal, c)) % q].append(i)
        yield normal, [tuple(t) for t in translates]


def enumerate_hyperplanes(space: GeometrySpace) -> list[AffineFlat]:
    """All affine (n-1)-flats, sorted by point tuple."""
    if space.n < 2:
        raise ValueError("hyperplanes need n >= 2")
    return list(_hyperplanes(space))


@lru_cache(maxsize=None)
def _hyperplanes(space: GeometrySpace) -> tuple[AffineFlat, ...]:
    pts = sorted(t for _, cls in _hyperplane_classes(space) for t in cls)
    return tuple(AffineFlat(space, space.n - 1, p) for p in pts)


def hyperplane_spreads(space: GeometrySpace) -> list[Spread]:
    """One spread per normal direction, ordered by smallest hyperplane id."""
    return list(_spreads(space))


@lru_cache(maxsize=None)
def _spreads(space: GeometrySpace) -> tuple[Spread, ...]:
    hyperplanes = enumerate_hyperplanes(space)
    ids = {h.points: i for i, h in enumerate(hyperplanes)}
    spreads = [
        Spread(tuple(sorted(ids[t] for t in cls)), normal)
        for normal, cls in _hyperplane_classes(space)
    ]
    spreads.sort(key=lambda s: s.flats)
    return tuple(spreads)


def is_partition(space: GeometrySpace, flats) -> bool:
    covered = 0
    for f in flats:
        if covered & f.mask:
            return False
        covered |= f.mask
    return covered == (1 << space.point_count) - 1


def brute_force_hyperplane_partitions(space: GeometrySpace) -> list[tuple[int, ...]]:
    """Every set of hyperplanes partitioning the point set, found by search.

    Used to confirm that hyperplane spreads are exactly the parallel
    classes.  Only meant for small spaces.
    """
    hyperplanes = enumerate_hyperplanes(space)
    full = (1 << space.point_count) - 1
    out = []

    def extend(start, covered, chosen):
        if covered == full:
            out.append(tuple(chosen))
            return
        # the lowest uncovered point must be covered by the next plane
        low = (~covered & full) & -(~covered & full)
        for i in range(start, len(hyperplanes)):
            m = hyperplanes[i].mask
            if m & low and not m & covered:
                extend(0, covered | m, chosen + [i])

    extend(0, 0, [])
    return sorted({tuple(sorted(c)) for c in out})


def incidence(p: Point, flat: AffineFlat) -> bool:
    if p.space != flat.space:
        raise ValueError("point and flat belong to different spaces")
    return p.index in flat.points


def parallel(a: AffineFlat, b: AffineFlat) -> bool:
    """True for distinct hyperplanes in the same parallel class."""
    if a.space != b.space or a.dim != b.dim:
        return False
    space = a.space
    return a != b and not (a.mask & b.mask) and a.dim == space.n - 1
