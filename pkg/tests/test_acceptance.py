"""Acceptance criteria, one test each, all at exact (zero-tolerance) equality.

Every test prints a single ``PASS``/``FAIL`` line.  Run just this file
with ``pytest tests/test_acceptance.py -v`` or ``python tests/test_acceptance.py``.
"""

import itertools
import os
import random
import subprocess
import sys
import time
from fractions import Fraction

import pytest
import sympy

from finite_radon import complexes as cx
from finite_radon import enumeration as en
from finite_radon import hyperplanes as hp
from finite_radon import radon
from finite_radon.geometry import GeometrySpace
from finite_radon.radon import DataVector

TOTAL, ADMISSIBLE, INADMISSIBLE = 3_108_105, 937_440, 2_170_665


@pytest.fixture
def verdict(capsys):
    def report(number: int, title: str, ok: bool, detail: str = ""):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {number}: {title}" + (f" ({detail})" if detail else ""))
        assert ok, detail

    return report


@pytest.fixture(scope="module")
def timed_runs():
    """Unverified censuses for K = 1, 4, 8 partitions, with wall times."""
    runs = {}
    for k in (1, 4, 8):
        workers = 1 if k == 1 else min(k, os.cpu_count() or 1)
        t0 = time.perf_counter()
        res = en.enumerate_all_complexes(partitions=k, workers=workers)
        runs[k] = (res, time.perf_counter() - t0)
    return runs


def test_criterion_01_census(timed_runs, verdict):
    res, single = timed_runs[1]
    _, eight = timed_runs[8]
    counts = (res.total, res.admissible, res.inadmissible)
    ok = counts == (TOTAL, ADMISSIBLE, INADMISSIBLE) and single < 120 and eight < 30
    verdict(1, "census totals and runtime", ok,
            f"counts={counts}, K=1 {single:.1f}s, K=8 {eight:.1f}s on {os.cpu_count()} CPU(s)")


def test_criterion_02_oracle_equivalence(census, verdict):
    # every complex is re-decided by an exact integer determinant; a sample
    # is additionally re-decided by rational elimination
    space = GeometrySpace(2, 3)
    rng = random.Random(2)
    sample_mismatch = 0
    for _ in range(2000):
        ids = en.combination_unrank(rng.randrange(TOTAL), 28, 8)
        c = cx.LineComplex(space, ids)
        sample_mismatch += cx.is_admissible(c) != cx.rank_oracle_admissible(c)
    ok = census.rank_checked == TOTAL and census.disagreements == 0 and sample_mismatch == 0
    verdict(2, "scan vs rank oracle on every complex", ok,
            f"checked={census.rank_checked}, disagreements={census.disagreements}, rational sample mismatches={sample_mismatch}")


def test_criterion_03_closed_form_counts(census, verdict):
    expected = [1_627_920, 180_180, 2_520, 0, 1_450_260, 180_180, 210, 0, 179_970, 168, 20_160, 20_160, 0, 0]
    counts = en.closed_form_counts(census)
    closed = [c.closed_form for c in counts]
    brute = [c.brute_force for c in counts]
    ok = closed == brute == expected
    verdict(3, "closed forms equal brute force", ok, ", ".join(f"{c.name}={c.brute_force}" for c in counts))


def test_criterion_04_errata(verdict):
    c21 = en.binomial(21, 8)
    brute = sum(1 for s in itertools.combinations(range(21), 8))
    ok = c21 == brute == 203_490 and 8 * c21 == 1_627_920 and 8 * 203_440 != 1_627_920
    verdict(4, "C(21,8) = 203490, stated 203440 is a typo", ok, f"C(21,8)={c21}, 8*C(21,8)={8 * c21}")


def test_criterion_05_bolker(verdict):
    cases = [
        ("(2,3) lines", radon.line_geometry(GeometrySpace(2, 3)), (7, 1)),
        ("(2,3) hyperplanes", radon.hyperplane_geometry(GeometrySpace(2, 3)), (7, 3)),
        ("(3,2) lines", radon.line_geometry(GeometrySpace(3, 2)), (4, 1)),
    ]
    rng = random.Random(5)
    failures = []
    for name, g, ab in cases:
        rep = radon.bolker_check(g)
        n = g.x_count
        law = sympy.Matrix(radon.normal_matrix(g)) == (ab[0] - ab[1]) * sympy.eye(n) + ab[1] * sympy.ones(n)
        trips = sum(
            radon.bolker_invert(g, radon.radon_apply(g, f)) == f
            for f in (DataVector(tuple(rng.randint(-100, 100) for _ in range(n))) for _ in range(100))
        )
        if not (rep.holds and (rep.alpha, rep.beta) == ab and law and trips == 100):
            failures.append(name)
    verdict(5, "Bolker values, normal-operator law, 100 inversions each", not failures, f"failed={failures}")


def test_criterion_06_polygons(verdict):
    table = {m: (radon.bolker_check(radon.polygon_geometry(m)).holds, radon.is_injective(radon.polygon_geometry(m)))
             for m in range(3, 13)}
    ok = table[3] == (True, True) and table[4] == (False, False) and table[5] == (False, True)
    ok = ok and all(table[m][1] == (m % 2 == 1) for m in table)
    verdict(6, "polygon table; injective iff m odd for m <= 12", ok, f"{table}")


def test_criterion_07_cavalieri(verdict):
    space = GeometrySpace(2, 3)
    dim = hp.cavalieri_subspace_dimension(space)
    rng = random.Random(7)
    mismatches = 0
    for _ in range(1000):
        g = [rng.randint(-3, 3) for _ in range(14)]
        if rng.random() < 0.5:
            # force a range element so both verdicts are exercised
            g = list(radon.radon_apply(radon.hyperplane_geometry(space), DataVector(tuple(g[:8]))))
        mismatches += hp.cavalieri_check(space, g).holds != hp.in_range_by_solve(space, g)
    ok = dim == 8 == 14 - 6 and mismatches == 0
    verdict(7, "Cavalieri subspace and range agreement", ok, f"dim={dim}, mismatches={mismatches}")


def test_criterion_08_hyperplane_admissibility(verdict):
    space = GeometrySpace(2, 3)
    agree = admissible = 0
    for ids in itertools.combinations(range(14), 8):
        by_rank = hp.hyperplane_admissible_rank(space, ids)
        admissible += by_rank
        agree += hp.hyperplane_admissible_pattern(space, ids) == by_rank
    ok = agree == 3003 and admissible == 448 == 7 * 2**6
    verdict(8, "pattern vs rank on all 3003 hyperplane complexes", ok, f"agree={agree}, admissible={admissible}")


def test_criterion_09_reconstruction_and_witnesses(verdict):
    space = GeometrySpace(2, 3)
    rng = random.Random(9)
    good, bad = [], []
    while len(good) < 100 or len(bad) < 100:
        c = cx.LineComplex(space, en.combination_unrank(rng.randrange(TOTAL), 28, 8))
        (good if cx.is_admissible(c) else bad).append(c)
    good, bad = good[:100], bad[:100]
    recovered = 0
    for c in good:
        for _ in range(10):
            f = DataVector(tuple(Fraction(rng.randint(-50, 50)) for _ in range(8)))
            recovered += cx.reconstruct(c, c.transform(f)) == f
    witnesses = 0
    for c in bad:
        for w in (cx.obstruction_scan(c).witness, cx.kernel_witness(c, strategy="nullspace")):
            witnesses += (not w.is_zero()) and c.transform(w).is_zero()
    ok = recovered == 1000 and witnesses == 200
    verdict(9, "reconstruction round trips and kernel witnesses", ok, f"recovered={recovered}/1000, witnesses={witnesses}/200")


def test_criterion_10_determinism(timed_runs, verdict):
    records = [timed_runs[k][0].records for k in (1, 4, 8)]
    same_census = records[0] == records[1] == records[2]
    cmd = [sys.executable, "-m", "finite_radon", "sample", "--trials", "2000", "--seed", "31"]
    outs = [subprocess.run(cmd, capture_output=True, check=True).stdout for _ in range(2)]
    ok = same_census and outs[0] == outs[1] and bool(outs[0])
    verdict(10, "partition-independent census, byte-identical sampling", ok,
            f"census equal={same_census}, sample equal={outs[0] == outs[1]}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
