"""Range and admissibility for the hyperplane transform over F_q.

Block data on hyperplanes is always indexed by the canonical hyperplane
order of :func:`finite_radon.geometry.enumerate_hyperplanes`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import exact
from .geometry import GeometrySpace, enumerate_hyperplanes, hyperplane_spreads, parallel
from .radon import DataVector, hyperplane_geometry, radon_apply, radon_matrix


class OracleDisagreement(AssertionError):
    """Two independent decision procedures returned different verdicts."""


@dataclass(frozen=True)
class CavalieriResult:
    holds: bool
    spread_sums: tuple[Fraction, ...]


@dataclass(frozen=True)
class PatternReport:
    admissible: bool
    full_spreads: tuple[int, ...]
    omitted_per_spread: tuple[int, ...]
    experimental: bool = False  # q > 2: only the rank test is authoritative


def _values(space: GeometrySpace, g) -> tuple[Fraction, ...]:
    vals = tuple(Fraction(v) for v in g)
    expected = len(enumerate_hyperplanes(space))
    if len(vals) != expected:
        raise ValueError(f"hyperplane data must have {expected} entries, got {len(vals)}")
    return vals


def cavalieri_check(space: GeometrySpace, g) -> CavalieriResult:
    """Compare the sums of g over every spread."""
    vals = _values(space, g)
    sums = tuple(sum((vals[h] for h in s.flats), Fraction(0)) for s in hyperplane_spreads(space))
    return CavalieriResult(len(set(sums)) <= 1, sums)


def cavalieri_constraints(space: GeometrySpace) -> list[list[int]]:
    """Rows (sum over spread i) - (sum over spread 0), i >= 1."""
    spreads = hyperplane_spreads(space)
    size = len(enumerate_hyperplanes(space))
    base = [0] * size
    for h in spreads[0].flats:
        base[h] = 1
    rows = []
    for s in spreads[1:]:
        row = [-v for v in base]
        for h in s.flats:
            row[h] += 1
        rows.append(row)
    return rows


def cavalieri_subspace_dimension(space: GeometrySpace) -> int:
    rows = cavalieri_constraints(space)
    return len(rows[0]) - exact.rank(rows) if rows else len(enumerate_hyperplanes(space))


def in_range_by_solve(space: GeometrySpace, g) -> bool:
    """Exact-solvability oracle: is there f with Rf = g?"""
    vals = _values(space, g)
    return exact.solve(radon_matrix(hyperplane_geometry(space)), vals) is not None


def range_membership(space: GeometrySpace, g, cross_check: bool = True) -> bool:
    verdict = cavalieri_check(space, g).holds
    if cross_check and verdict != in_range_by_solve(space, g):
        raise OracleDisagreement(f"Cavalieri verdict {verdict} contradicts the linear-solve oracle")
    return verdict


def _complex(space: GeometrySpace, ids) -> tuple[int, ...]:
    ids = tuple(sorted(set(ids)))
    size = len(enumerate_hyperplanes(space))
    if len(ids) != space.point_count:
        raise ValueError(f"a hyperplane complex has exactly {space.point_count} distinct planes, got {len(ids)}")
    if any(not 0 <= h < size for h in ids):
        raise ValueError(f"hyperplane ids must lie in [0, {size})")
    return ids


def hyperplane_pattern(space: GeometrySpace, ids) -> PatternReport:
    """Check: one spread fully present, every other spread missing exactly one plane.

    For q > 2 this is the natural reading of the pattern; the rank test
    remains the authority there.
    """
    chosen = set(_complex(space, ids))
    spreads = hyperplane_spreads(space)
    omitted = tuple(sum(h not in chosen for h in s.flats) for s in spreads)
    full = tuple(i for i, k in enumerate(omitted) if k == 0)
    ok = len(full) == 1 and all(k == 1 for i, k in enumerate(omitted) if i != full[0])
    return PatternReport(ok, full, omitted, space.q > 2)


def hyperplane_admissible_pattern(space: GeometrySpace, ids) -> bool:
    return hyperplane_pattern(space, ids).admissible


def hyperplane_admissible_rank(space: GeometrySpace, ids) -> bool:
    ids = _complex(space, ids)
    geo = hyperplane_geometry(space).restrict(ids)
    return exact.rank(radon_matrix(geo)) == space.point_count


def capacitor_witness(space: GeometrySpace, h1: int, h2: int) -> DataVector:
    """+1 on plane h1, -1 on the parallel plane h2, 0 elsewhere."""
    planes = enumerate_hyperplanes(space)
    a, b = planes[h1], planes[h2]
    if not parallel(a, b):
        raise ValueError(f"hyperplanes {h1} and {h2} are not distinct parallel planes")
    f = [0] * space.point_count
    for p in a.points:
        f[p] = 1
    for p in b.points:
        f[p] = -1
    return DataVector(tuple(f), "point")


def capacitor_transform(space: GeometrySpace, h1: int, h2: int) -> DataVector:
    return radon_apply(hyperplane_geometry(space), capacitor_witness(space, h1, h2))
