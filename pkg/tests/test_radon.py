import itertools
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from finite_radon import radon
from finite_radon.geometry import GeometrySpace
from finite_radon.radon import DataVector

# A reference rendering of the 28 x 8 line matrix of Z_2^3 that carries one
# stray weight-1 row (the 16th); every genuine line row has exactly two ones.
REFERENCE_LINE_MATRIX = """
11000000 10100000 10010000 10001000 10000100 10000010 10000001
01100000 01010000 01001000 01000100 01000010 01000001
00110000 00101000 00100100 00100010 00100001
00010000
00011000 00010100 00010010 00010001
00001100 00001010 00001001
00000110 00000101
00000011
"""


def reference_rows():
    return [[int(c) for c in tok] for tok in REFERENCE_LINE_MATRIX.split()]


def geometries():
    return {
        "lines23": radon.line_geometry(GeometrySpace(2, 3)),
        "planes23": radon.hyperplane_geometry(GeometrySpace(2, 3)),
        "lines32": radon.line_geometry(GeometrySpace(3, 2)),
        "planes24": radon.hyperplane_geometry(GeometrySpace(2, 4)),
        "lines33": radon.line_geometry(GeometrySpace(3, 3)),
    }


def brute_alpha_beta(g):
    """Oracle: count blocks through one point and through each pair directly."""
    through = [sum(x in b for b in g.blocks) for x in range(g.x_count)]
    pair = {sum(x in b and y in b for b in g.blocks) for x, y in itertools.combinations(range(g.x_count), 2)}
    return set(through), pair


def test_reference_matrix_minus_defect_equals_generated():
    rows = reference_rows()
    assert len(rows) == 29
    defective = [r for r in rows if sum(r) != 2]
    assert defective == [[0, 0, 0, 1, 0, 0, 0, 0]]
    cleaned = [r for r in rows if sum(r) == 2]
    assert cleaned == radon.radon_matrix(radon.line_geometry(GeometrySpace(2, 3)))


def test_line_matrix_format():
    text = radon.format_matrix(radon.radon_matrix(radon.line_geometry(GeometrySpace(2, 3))))
    lines = text.splitlines()
    assert len(lines) == 28 and text.endswith("\n")
    assert lines[0] == "1 1 0 0 0 0 0 0"
    assert lines[-1] == "0 0 0 0 0 0 1 1"


@pytest.mark.parametrize(
    "key, alpha, beta",
    [("lines23", 7, 1), ("planes23", 7, 3), ("lines32", 4, 1), ("planes24", 15, 7), ("lines33", 13, 1)],
)
def test_bolker_values(key, alpha, beta):
    g = geometries()[key]
    assert brute_alpha_beta(g) == ({alpha}, {beta})
    rep = radon.bolker_check(g)
    assert (rep.alpha, rep.beta, rep.holds) == (alpha, beta, True)


@pytest.mark.parametrize("key", ["lines23", "planes23", "lines32", "planes24"])
def test_normal_operator_law(key):
    g = geometries()[key]
    rep = radon.bolker_check(g)
    r = sympy.Matrix(radon.radon_matrix(g))
    expected = (rep.alpha - rep.beta) * sympy.eye(g.x_count) + rep.beta * sympy.ones(g.x_count)
    assert r.T * r == expected
    assert sympy.Matrix(radon.normal_matrix(g)) == expected


def test_inverse_coefficients_for_lines():
    c, d = radon.normal_inverse_coefficients(7, 1, 8)
    assert (c, d) == (Fraction(1, 6), Fraction(-1, 84))
    # oracle: invert the 8x8 normal matrix symbolically
    m = 6 * sympy.eye(8) + sympy.ones(8)
    inv = m.inv()
    assert inv[0, 0] == sympy.Rational(1, 6) - sympy.Rational(1, 84)
    assert inv[0, 1] == sympy.Rational(-1, 84)


def test_inverse_coefficients_singular():
    with pytest.raises(radon.SingularOperatorError):
        radon.normal_inverse_coefficients(3, 3, 5)


@pytest.mark.parametrize("key", ["lines23", "planes23", "lines32"])
def test_bolker_inversion_round_trip(key):
    g = geometries()[key]
    rng = random.Random(11)
    for _ in range(100):
        f = DataVector(tuple(rng.randint(-50, 50) for _ in range(g.x_count)))
        assert radon.bolker_invert(g, radon.radon_apply(g, f)) == f


@given(st.data())
def test_adjointness(data):
    g = radon.line_geometry(GeometrySpace(2, 3))
    f = DataVector(tuple(data.draw(st.lists(st.integers(-9, 9), min_size=8, max_size=8))))
    h = DataVector(tuple(data.draw(st.lists(st.integers(-9, 9), min_size=28, max_size=28))), "block")
    lhs = sum(a * b for a, b in zip(radon.radon_apply(g, f), h))
    rhs = sum(a * b for a, b in zip(f, radon.dual_apply(g, h)))
    assert lhs == rhs


@given(st.lists(st.integers(-20, 20), min_size=14, max_size=14))
def test_transform_is_linear_and_sums_counting_measure(values):
    g = radon.hyperplane_geometry(GeometrySpace(2, 3))
    f = DataVector(tuple(values[:8]))
    out = radon.radon_apply(g, f)
    for y, block in enumerate(g.blocks):
        assert out[y] == sum(f[x] for x in block)
    doubled = radon.radon_apply(g, DataVector(tuple(2 * v for v in f)))
    assert list(doubled) == [2 * v for v in out]


def test_role_and_length_are_checked():
    g = radon.line_geometry(GeometrySpace(2, 3))
    with pytest.raises(ValueError):
        radon.radon_apply(g, DataVector((1,) * 7))
    with pytest.raises(ValueError):
        radon.radon_apply(g, DataVector((1,) * 8, "block"))


def test_bolker_invert_rejects_polygon():
    g = radon.polygon_geometry(4)
    with pytest.raises(radon.BolkerConditionError):
        radon.bolker_invert(g, DataVector((0,) * 4, "block"))


def test_polygon_square_matrix():
    assert radon.radon_matrix(radon.polygon_geometry(4)) == [
        [1, 1, 0, 0],
        [0, 1, 1, 0],
        [0, 0, 1, 1],
        [1, 0, 0, 1],
    ]


@pytest.mark.parametrize("m, bolker, injective", [(3, True, True), (4, False, False), (5, False, True)])
def test_polygon_table(m, bolker, injective):
    g = radon.polygon_geometry(m)
    assert radon.bolker_check(g).holds is bolker
    assert radon.is_injective(g) is injective


@pytest.mark.parametrize("m", range(3, 13))
def test_polygon_injective_iff_odd(m):
    g = radon.polygon_geometry(m)
    # circulant oracle: det(I + P) = 1 - (-1)^m
    det = sympy.Matrix(radon.radon_matrix(g)).det()
    assert det == (2 if m % 2 else 0)
    assert radon.is_injective(g) is (m % 2 == 1)


def test_polygon_too_small():
    with pytest.raises(ValueError):
        radon.polygon_geometry(2)


def test_incidence_views_agree():
    g = radon.hyperplane_geometry(GeometrySpace(2, 3))
    assert len(g.incidence) == 14 * 4 == 8 * 7
    for x in range(8):
        assert g.blocks_through(x) == tuple(y for y in range(14) if x in g.points_on(y))
    rebuilt = radon.IncidenceGeometry.from_incidence(8, 14, sorted(g.incidence))
    assert rebuilt.blocks == g.blocks


def test_restrict_keeps_block_order():
    g = radon.line_geometry(GeometrySpace(2, 3))
    sub = g.restrict([27, 0, 5])
    assert sub.blocks == (g.blocks[27], g.blocks[0], g.blocks[5])
