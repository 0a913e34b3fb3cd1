"""Text formats: complex files, value files, rational rendering.

Complex file::

    2 3          <- header "q n"
    0 1          <- one line per complex line, "i j" with i < j
    0 2
    ...

Value files hold whitespace-separated rationals (``3``, ``-1/2``);
``#`` starts a comment.
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path

from .complexes import LineComplex
from .geometry import GeometrySpace


class FormatError(ValueError):
    pass


def render(v) -> str:
    """Reduced p/q, or p for integers."""
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def parse_complex(text: str) -> LineComplex:
    rows = list(_lines(text))
    if not rows:
        raise FormatError("complex file is empty; expected header 'q n'")
    lineno, header = rows[0]
    try:
        q, n = (int(t) for t in header.split())
    except ValueError:
        raise FormatError(f"line {lineno}: header must be 'q n', got {header!r}") from None
    if q != 2:
        raise FormatError(f"line {lineno}: line complexes need q=2, got q={q}")
    space = GeometrySpace(q, n)
    pairs = []
    for lineno, row in rows[1:]:
        parts = row.split()
        if len(parts) != 2:
            raise FormatError(f"line {lineno}: expected 'i j', got {row!r}")
        try:
            i, j = int(parts[0]), int(parts[1])
        except ValueError:
            raise FormatError(f"line {lineno}: point indices must be integers, got {row!r}") from None
        if not 0 <= i < j < space.point_count:
            raise FormatError(f"line {lineno}: need 0 <= i < j < {space.point_count}, got {row!r}")
        pairs.append((i, j))
    try:
        return LineComplex.from_pairs(space, pairs)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def format_complex(c: LineComplex) -> str:
    out = [f"{c.space.q} {c.space.n}"]
    out += [f"{a} {b}" for a, b in c.edges]
    return "\n".join(out) + "\n"


def parse_values(text: str) -> list[Fraction]:
    vals = []
    for lineno, row in _lines(text):
        for tok in row.split():
            try:
                vals.append(Fraction(tok))
            except (ValueError, ZeroDivisionError):
                raise FormatError(f"line {lineno}: {tok!r} is not a rational number") from None
    return vals


def format_values(vals) -> str:
    return "\n".join(render(v) for v in vals) + "\n"


def read_complex(path) -> LineComplex:
    return parse_complex(Path(path).read_text())


def read_values(path) -> list[Fraction]:
    return parse_values(Path(path).read_text())
