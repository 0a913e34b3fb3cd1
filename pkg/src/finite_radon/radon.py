"""Radon transforms on finite incidence geometries.

A geometry is a finite double fibration: points ``0..x_count-1``, blocks
``0..y_count-1`` and an incidence relation between them.  The transform
sums point data over each block; its dual sums block data over the
blocks through each point.  All arithmetic is exact.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache

from . import exact
from .geometry import GeometrySpace, enumerate_hyperplanes, enumerate_lines


class BolkerConditionError(ValueError):
    """The geometry does not satisfy the Bolker condition."""


class SingularOperatorError(ValueError):
    """The normal operator (alpha - beta) I + beta J is singular."""


@dataclass(frozen=True)
class IncidenceGeometry:
    """Points, blocks, and which points lie on which block.

    ``blocks[y]`` is the sorted tuple of point indices on block y (the
    set F_y).  The set G_x of blocks through x is derived.
    """

    x_count: int
    blocks: tuple[tuple[int, ...], ...]
    name: str = ""

    def __post_init__(self):
        blocks = tuple(tuple(sorted(b)) for b in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        for y, b in enumerate(blocks):
            if len(set(b)) != len(b):
                raise ValueError(f"block {y} lists a point twice")
            if any(not 0 <= x < self.x_count for x in b):
                raise ValueError(f"block {y} references a point outside [0, {self.x_count})")

    @classmethod
    def from_incidence(cls, x_count: int, y_count: int, pairs, name: str = "") -> IncidenceGeometry:
        pairs = list(pairs)
        if len(set(pairs)) != len(pairs):
            raise ValueError("incidence pairs contain duplicates")
        blocks = [[] for _ in range(y_count)]
        for x, y in pairs:
            if not (0 <= x < x_count and 0 <= y < y_count):
                raise ValueError(f"incidence pair {(x, y)} out of range")
            blocks[y].append(x)
        return cls(x_count, tuple(tuple(b) for b in blocks), name)

    @property
    def y_count(self) -> int:
        return len(self.blocks)

    @cached_property
    def incidence(self) -> frozenset[tuple[int, int]]:
        return frozenset((x, y) for y, b in enumerate(self.blocks) for x in b)

    def points_on(self, y: int) -> tuple[int, ...]:
        return self.blocks[y]

    @cached_property
    def _through(self) -> tuple[tuple[int, ...], ...]:
        g = [[] for _ in range(self.x_count)]
        for y, b in enumerate(self.blocks):
            for x in b:
                g[x].append(y)
        return tuple(tuple(v) for v in g)

    def blocks_through(self, x: int) -> tuple[int, ...]:
        return self._through[x]

    def restrict(self, block_ids) -> IncidenceGeometry:
        """The sub-geometry keeping only the given blocks, in the given order."""
        return IncidenceGeometry(self.x_count, tuple(self.blocks[y] for y in block_ids), self.name)


@dataclass(frozen=True)
class DataVector:
    """Exact rational data on points ("point") or blocks ("block")."""

    values: tuple[Fraction, ...]
    role: str = "point"

    def __post_init__(self):
        if self.role not in ("point", "block"):
            raise ValueError(f"unknown role {self.role!r}")
        object.__setattr__(self, "values", tuple(Fraction(v) for v in self.values))

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def __iter__(self):
        return iter(self.values)

    def is_zero(self) -> bool:
        return not any(self.values)


@dataclass(frozen=True)
class BolkerReport:
    alpha: int | None
    beta: int | None
    holds: bool


@lru_cache(maxsize=None)
def line_geometry(space: GeometrySpace) -> IncidenceGeometry:
    lines = enumerate_lines(space)
    return IncidenceGeometry(space.point_count, tuple(l.points for l in lines), f"lines(q={space.q},n={space.n})")


@lru_cache(maxsize=None)
def hyperplane_geometry(space: GeometrySpace) -> IncidenceGeometry:
    planes = enumerate_hyperplanes(space)
    return IncidenceGeometry(
        space.point_count, tuple(h.points for h in planes), f"hyperplanes(q={space.q},n={space.n})"
    )


def polygon_geometry(m: int) -> IncidenceGeometry:
    """The m-gon: m vertices, edge i joins vertex i to vertex i+1 mod m."""
    if m < 3:
        raise ValueError(f"a polygon needs at least 3 sides, got {m}")
    return IncidenceGeometry(m, tuple((i, (i + 1) % m) for i in range(m)), f"polygon(m={m})")


def radon_matrix(g: IncidenceGeometry) -> list[list[int]]:
    """Rows are blocks, columns points; entry 1 iff the point is on the block."""
    out = []
    for b in g.blocks:
        row = [0] * g.x_count
        for x in b:
            row[x] = 1
        out.append(row)
    return out


def _check(vec: DataVector, role: str, size: int):
    if vec.role != role or len(vec) != size:
        raise ValueError(f"expected {role} data of length {size}, got {vec.role} data of length {len(vec)}")


def radon_apply(g: IncidenceGeometry, f: DataVector) -> DataVector:
    _check(f, "point", g.x_count)
    return DataVector(tuple(sum((f[x] for x in b), Fraction(0)) for b in g.blocks), "block")


def dual_apply(g: IncidenceGeometry, h: DataVector) -> DataVector:
    _check(h, "block", g.y_count)
    out = [Fraction(0)] * g.x_count
    for y, b in enumerate(g.blocks):
        for x in b:
            out[x] += h[y]
    return DataVector(tuple(out), "point")


def normal_matrix(g: IncidenceGeometry) -> list[list[int]]:
    """Matrix of R^t R: entry (x1, x2) counts blocks through both points."""
    n = g.x_count
    out = [[0] * n for _ in range(n)]
    for b in g.blocks:
        for x1 in b:
            for x2 in b:
                out[x1][x2] += 1
    return out


def bolker_check(g: IncidenceGeometry) -> BolkerReport:
    if g.x_count < 2:
        raise ValueError("the Bolker condition needs at least two points")
    nm = normal_matrix(g)
    diag = {nm[x][x] for x in range(g.x_count)}
    off = {nm[a][b] for a, b in itertools.combinations(range(g.x_count), 2)}
    alpha = diag.pop() if len(diag) == 1 else None
    beta = off.pop() if len(off) == 1 else None
    holds = alpha is not None and beta is not None and 0 != alpha != beta
    return BolkerReport(alpha, beta, holds)


def normal_inverse_coefficients(alpha, beta, n: int) -> tuple[Fraction, Fraction]:
    """(c, d) with (c I + d J) the inverse of (alpha - beta) I + beta J.

    Uses (aI + bJ)(cI + dJ) = ac I + (ad + bc + n b d) J with J the
    all-ones n x n matrix.
    """
    a = Fraction(alpha - beta)
    b = Fraction(beta)
    if a == 0 or a + n * b == 0:
        raise SingularOperatorError(f"(alpha-beta)I + beta J is singular for alpha={alpha}, beta={beta}, n={n}")
    return 1 / a, -b / (a * (a + n * b))


def bolker_invert(g: IncidenceGeometry, data: DataVector) -> DataVector:
    report = bolker_check(g)
    if not report.holds:
        raise BolkerConditionError(f"Bolker condition fails for {g.name or 'geometry'}: {report}")
    c, d = normal_inverse_coefficients(report.alpha, report.beta, g.x_count)
    back = dual_apply(g, data)
    total = sum(back.values, Fraction(0))
    return DataVector(tuple(c * v + d * total for v in back), "point")


def exact_rank(matrix) -> int:
    return exact.rank(matrix)


def is_injective(g: IncidenceGeometry) -> bool:
    return exact_rank(radon_matrix(g)) == g.x_count


def format_matrix(matrix) -> str:
    """Matrix dump: space-separated 0/1 rows, newline-terminated."""
    return "".join(" ".join(str(v) for v in row) + "\n" for row in matrix)
