"""Line complexes in Z_2^n.

Over the two-element field a line is a pair of points, so a set of lines
is a simple graph on the points.  A complex has as many lines as there
are points; it is admissible when the line transform restricted to it
is injective.  The obstructions are an omitted point, a component that
is a tree, and an even cycle.  Without them every component carries
exactly one cycle, of odd length, and data can be recovered by seeding
the odd cycle and propagating outward.

Point sets are handled as int bitmasks throughout; this is what keeps
the exhaustive census fast.
"""

from __future__ import annotations

import itertools
import random
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import exact
from .geometry import AffineFlat, GeometrySpace, enumerate_hyperplanes, enumerate_lines
from .radon import DataVector, line_geometry, radon_matrix


class InadmissibleComplexError(ValueError):
    pass


class AdmissibleComplexError(ValueError):
    pass


class InconsistentDataError(ValueError):
    """Line data that is not the transform of any point function."""


@lru_cache(maxsize=None)
def line_pairs(space: GeometrySpace) -> tuple[tuple[int, int], ...]:
    if space.q != 2:
        raise ValueError("line complexes are only modelled over Z_2")
    return tuple(l.points for l in enumerate_lines(space))


@lru_cache(maxsize=None)
def line_index(space: GeometrySpace) -> dict[tuple[int, int], int]:
    return {p: i for i, p in enumerate(line_pairs(space))}


@lru_cache(maxsize=None)
def line_masks(space: GeometrySpace) -> tuple[tuple[int, int], ...]:
    return tuple((1 << a, 1 << b) for a, b in line_pairs(space))


@dataclass(frozen=True)
class LineComplex:
    space: GeometrySpace
    line_ids: tuple[int, ...]

    def __post_init__(self):
        if self.space.q != 2:
            raise ValueError("line complexes are only modelled over Z_2")
        ids = tuple(sorted(set(self.line_ids)))
        if len(ids) != len(self.line_ids):
            raise ValueError("a line complex lists a line twice")
        if len(ids) != self.space.point_count:
            raise ValueError(f"a complex in Z_2^{self.space.n} has exactly {self.space.point_count} lines, got {len(ids)}")
        total = len(line_pairs(self.space))
        if any(not 0 <= i < total for i in ids):
            raise ValueError(f"line ids must lie in [0, {total})")
        object.__setattr__(self, "line_ids", ids)

    @classmethod
    def from_pairs(cls, space: GeometrySpace, pairs) -> LineComplex:
        index = line_index(space)
        ids = []
        for a, b in pairs:
            key = (min(a, b), max(a, b))
            if key not in index or a == b:
                raise ValueError(f"({a}, {b}) is not a line of Z_2^{space.n}")
            ids.append(index[key])
        return cls(space, tuple(ids))

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        pairs = line_pairs(self.space)
        return tuple(pairs[i] for i in self.line_ids)

    def matrix(self) -> list[list[int]]:
        return radon_matrix(line_geometry(self.space).restrict(self.line_ids))

    def transform(self, f: DataVector) -> DataVector:
        if len(f) != self.space.point_count:
            raise ValueError("point data has the wrong length")
        return DataVector(tuple(f[a] + f[b] for a, b in self.edges), "block")


# -- component bookkeeping --------------------------------------------------


def add_edge(comps: tuple, ma: int, mb: int) -> tuple:
    """Components after adding the edge with endpoint masks ``ma``, ``mb``.

    A component is ``(vertex_mask, edge_count, side_mask, bipartite)``;
    ``side_mask`` is one colour class of a 2-colouring that is valid as
    long as ``bipartite`` holds.  The input tuple is not modified, so a
    prefix state can be shared by every extension of it.
    """
    ca = cb = None
    for c in comps:
        if c[0] & ma:
            ca = c
        if c[0] & mb:
            cb = c
    if ca is None:
        if cb is None:
            return comps + ((ma | mb, 1, ma, True),)
        merged = (cb[0] | ma, cb[1] + 1, cb[2] if cb[2] & mb else cb[2] | ma, cb[3])
        drop = cb
    elif cb is None:
        merged = (ca[0] | mb, ca[1] + 1, ca[2] if ca[2] & ma else ca[2] | mb, ca[3])
        drop = ca
    elif ca is cb:
        merged = (ca[0], ca[1] + 1, ca[2], ca[3] and bool(ca[2] & ma) != bool(ca[2] & mb))
        drop = ca
    else:
        side = cb[0] & ~cb[2] if bool(ca[2] & ma) == bool(cb[2] & mb) else cb[2]
        merged = (ca[0] | cb[0], ca[1] + cb[1] + 1, ca[2] | side, ca[3] and cb[3])
        return tuple(c for c in comps if c is not ca and c is not cb) + (merged,)
    return tuple(c for c in comps if c is not drop) + (merged,)


def mask_components(edge_masks) -> tuple:
    """Connected components of a graph given by (1<<a, 1<<b) edge masks.

    See :func:`add_edge` for the component layout.  Isolated vertices
    are not listed.
    """
    comps = ()
    for ma, mb in edge_masks:
        comps = add_edge(comps, ma, mb)
    return comps


def bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def _adjacency(edges) -> dict[int, list[int]]:
    adj: dict[int, list[int]] = {}
    for a, b in edges:
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    for v in adj:
        adj[v].sort()
    return adj


def find_cycle(edges, even: bool = False) -> tuple[int, ...] | None:
    """A simple cycle as a vertex sequence, optionally of even length.

    Depth-first search over simple paths rooted at each start vertex,
    visiting only larger vertices, so every cycle is met from its
    smallest vertex.  Exponential in general; meant for the sparse
    small graphs that complexes produce.
    """
    adj = _adjacency(edges)

    def walk(start, path, on_path):
        v = path[-1]
        for w in adj[v]:
            if w == start and len(path) >= 3:
                if not even or len(path) % 2 == 0:
                    return tuple(path)
            elif w > start and w not in on_path:
                path.append(w)
                on_path.add(w)
                found = walk(start, path, on_path)
                if found:
                    return found
                path.pop()
                on_path.discard(w)
        return None

    for s in sorted(adj):
        found = walk(s, [s], {s})
        if found:
            return found
    return None


def unique_cycle(edges) -> tuple[int, ...]:
    """The cycle of a unicyclic graph, from its smallest vertex towards
    the smaller of that vertex's two cycle neighbours."""
    adj = {v: set(ns) for v, ns in _adjacency(edges).items()}
    leaves = [v for v, ns in adj.items() if len(ns) == 1]
    while leaves:
        v = leaves.pop()
        for w in adj.pop(v):
            adj[w].discard(v)
            if len(adj[w]) == 1:
                leaves.append(w)
    if not adj or any(len(ns) != 2 for ns in adj.values()):
        raise ValueError("graph is not unicyclic")
    start = min(adj)
    cycle = [start]
    prev, cur = start, min(adj[start])
    while cur != start:
        cycle.append(cur)
        prev, cur = cur, next(w for w in adj[cur] if w != prev)
    if len(cycle) != len(adj):
        raise ValueError("graph is not unicyclic")
    return tuple(cycle)


@dataclass(frozen=True)
class Component:
    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    bipartite: bool
    side: tuple[int, ...]
    cycle: tuple[int, ...] | None

    @property
    def is_tree(self) -> bool:
        return len(self.edges) == len(self.vertices) - 1

    @property
    def is_unicyclic(self) -> bool:
        return len(self.edges) == len(self.vertices)


@dataclass(frozen=True)
class ComplexGraph:
    vertex_count: int
    edges: tuple[tuple[int, int], ...]
    components: tuple[Component, ...]
    isolated_vertices: tuple[int, ...]


def build_graph(c: LineComplex) -> ComplexGraph:
    n = c.space.point_count
    edges = c.edges
    comps = mask_components((1 << a, 1 << b) for a, b in edges)
    covered = 0
    out = []
    for vm, _, side, bip in comps:
        covered |= vm
        verts = tuple(bits(vm))
        cedges = tuple(e for e in edges if vm >> e[0] & 1)
        cycle = unique_cycle(cedges) if len(cedges) == len(verts) else None
        out.append(Component(verts, cedges, bip, tuple(bits(side)), cycle))
    out.sort(key=lambda comp: comp.vertices[0])
    isolated = tuple(v for v in range(n) if not covered >> v & 1)
    return ComplexGraph(n, edges, tuple(out), isolated)


# -- classification ----------------------------------------------------------


def fundamental_cycles_clash(edges, root: int | None = None) -> bool:
    """True iff the component of ``root`` contains an even simple cycle.

    Builds a BFS tree and walks each non-tree edge's tree path.  The
    component avoids even cycles exactly when these fundamental cycles
    are all odd and pairwise edge-disjoint (two that share a tree edge
    form a theta, and a theta always holds an even cycle).  Edges
    outside the component are ignored.
    """
    adj: dict[int, list[int]] = {}
    for a, b in edges:
        if a in adj:
            adj[a].append(b)
        else:
            adj[a] = [b]
        if b in adj:
            adj[b].append(a)
        else:
            adj[b] = [a]
    if root is None:
        root = edges[0][0]
    parent = {root: root}
    depth = {root: 0}
    order = [root]
    for v in order:
        d = depth[v] + 1
        for w in adj[v]:
            if w not in parent:
                parent[w] = v
                depth[w] = d
                order.append(w)
    used = set()
    for a, b in edges:
        if a not in parent or parent[a] == b or parent[b] == a:
            continue
        da, db = depth[a], depth[b]
        if (da + db) & 1:
            return True
        while a != b:
            if da < db:
                a, b, da, db = b, a, db, da
            if a in used:
                return True
            used.add(a)
            a = parent[a]
            da -= 1
    return False


def bicyclic_has_even_cycle(edges, vm: int, side: int, point_count: int) -> bool:
    """Even-cycle test for a non-bipartite component with e = v + 1.

    ``side`` must properly colour some spanning tree of the component
    (as :func:`add_edge` maintains), so each monochromatic edge closes
    an odd fundamental cycle.  With both cycles odd, an even cycle
    exists exactly when the 2-core is a theta rather than two cycles
    meeting at a vertex or joined by a path.
    """
    nb = [0] * point_count
    mono = 0
    for a, b in edges:
        if vm >> a & 1:
            nb[a] |= 1 << b
            nb[b] |= 1 << a
            mono += (side >> a & 1) == (side >> b & 1)
    if mono != 2:
        return True
    core = vm
    stripped = True
    while stripped:
        stripped = False
        rest = core
        while rest:
            low = rest & -rest
            rest ^= low
            x = low.bit_length() - 1
            if (nb[x] & core).bit_count() == 1:
                core ^= low
                stripped = True
    branch = -1
    rest = core
    while rest:
        low = rest & -rest
        rest ^= low
        deg = (nb[low.bit_length() - 1] & core).bit_count()
        if deg == 4:
            return False  # figure eight of two odd cycles
        if deg == 3:
            branch = low.bit_length() - 1
            break
    # from a degree-3 vertex of a dumbbell, two of the three exits loop back
    exits = nb[branch] & core
    for _ in range(2):
        low = exits & -exits
        exits ^= low
        prev, cur = branch, low.bit_length() - 1
        while cur != branch and (nb[cur] & core).bit_count() == 2:
            nxt = nb[cur] & core & ~(1 << prev)
            prev, cur = cur, nxt.bit_length() - 1
        if cur == branch:
            return False
    return True


def has_even_cycle(comp_edges, vertex_count: int, bipartite: bool) -> bool:
    e = len(comp_edges)
    if e < vertex_count:
        return False
    if bipartite:
        return True
    if e == vertex_count:
        return False  # one cycle, and it is odd
    return fundamental_cycles_clash(comp_edges)


def classify_masks(edge_masks, edges, point_count: int) -> tuple[int, int, bool, bool, bool]:
    """Census record for one complex.

    Returns ``(omitted_points, isolated_lines, has_tree, has_even_cycle,
    admissible)``.  ``edges`` are the same lines as point pairs, only
    consulted when a non-bipartite component has several cycles.
    """
    return classify_components(mask_components(edge_masks), edges, point_count)


def classify_components(comps, edges, point_count: int) -> tuple[int, int, bool, bool, bool]:
    covered = 0
    isolated_lines = 0
    tree = even = False
    odd_unicyclic = True
    for vm, e, side, bip in comps:
        covered |= vm
        v = vm.bit_count()
        if e < v:
            tree = True
            odd_unicyclic = False
            if v == 2:
                isolated_lines += 1
        elif bip:
            even = True
            odd_unicyclic = False
        elif e > v:
            odd_unicyclic = False
            if even:
                continue
            # a cactus of odd cycles has e >= 3 * (e - v + 1)
            if 2 * e > 3 * v - 3:
                even = True
            elif e == v + 1:
                even = bicyclic_has_even_cycle(edges, vm, side, point_count)
            else:
                even = fundamental_cycles_clash(edges, (vm & -vm).bit_length() - 1)
    omitted = point_count - covered.bit_count()
    return omitted, isolated_lines, tree, even, odd_unicyclic and omitted == 0


@dataclass(frozen=True)
class AdmissibilityReport:
    admissible: bool
    omitted_points: tuple[int, ...]
    isolated_tree_components: tuple[tuple[int, ...], ...]
    even_cycle: tuple[int, ...] | None
    witness: DataVector | None = None


def obstruction_scan(c: LineComplex, with_witness: bool = True) -> AdmissibilityReport:
    graph = build_graph(c)
    trees = tuple(comp.vertices for comp in graph.components if comp.is_tree)
    even = None
    for comp in graph.components:
        if has_even_cycle(comp.edges, len(comp.vertices), comp.bipartite):
            even = comp.cycle if comp.cycle and len(comp.cycle) % 2 == 0 else find_cycle(comp.edges, even=True)
            break
    admissible = not graph.isolated_vertices and not trees and even is None
    witness = None
    if not admissible and with_witness:
        witness = kernel_witness(c, graph=graph)
    return AdmissibilityReport(admissible, graph.isolated_vertices, trees, even, witness)


def is_admissible(c: LineComplex) -> bool:
    return obstruction_scan(c, with_witness=False).admissible


def rank_oracle_admissible(c: LineComplex) -> bool:
    """Exact rational rank of the restricted matrix equals 2^n."""
    return exact.rank(c.matrix()) == c.space.point_count


# -- kernel witnesses and reconstruction ---------------------------------------


def _verify_witness(c: LineComplex, w: DataVector) -> DataVector:
    if w.is_zero() or not c.transform(w).is_zero():
        raise RuntimeError("kernel witness failed verification")
    return w


def kernel_witness(c: LineComplex, strategy: str = "fast", graph: ComplexGraph | None = None) -> DataVector:
    """Nonzero point data that every line of an inadmissible complex sums to 0.

    ``strategy="fast"`` uses a delta at an omitted point, or a +1/-1
    colouring of a bipartite component; ``"nullspace"`` solves for an
    exact kernel vector.  The result is always re-verified.
    """
    if strategy not in ("fast", "nullspace"):
        raise ValueError(f"unknown witness strategy {strategy!r}")
    n = c.space.point_count
    if strategy == "fast":
        graph = graph or build_graph(c)
        if graph.isolated_vertices:
            w = [0] * n
            w[graph.isolated_vertices[0]] = 1
            return _verify_witness(c, DataVector(tuple(w)))
        for comp in graph.components:
            if comp.bipartite:
                w = [0] * n
                side = set(comp.side)
                for v in comp.vertices:
                    w[v] = 1 if v in side else -1
                return _verify_witness(c, DataVector(tuple(w)))
    basis = exact.nullspace(c.matrix())
    if not basis:
        raise AdmissibleComplexError("complex is admissible: the restricted transform has no kernel")
    return _verify_witness(c, DataVector(tuple(basis[0])))


def seed_value(cycle_values) -> Fraction:
    """Value at the first vertex of an odd cycle from its edge sums.

    With e_i joining v_i and v_{i+1}, the alternating sum of the edge
    values telescopes to twice the value at v_1.
    """
    if len(cycle_values) % 2 == 0:
        raise ValueError("only odd cycles determine their vertex values")
    total = sum((v if i % 2 == 0 else -v for i, v in enumerate(cycle_values)), Fraction(0))
    return total / 2


def reconstruct(c: LineComplex, g: DataVector) -> DataVector:
    """Recover point data from its sums over the lines of an admissible complex.

    ``g`` is indexed like ``c.line_ids``.
    """
    if len(g) != len(c.line_ids):
        raise ValueError(f"line data must have {len(c.line_ids)} entries, got {len(g)}")
    graph = build_graph(c)
    report = obstruction_scan(c, with_witness=False)
    if not report.admissible:
        raise InadmissibleComplexError("reconstruction needs an admissible complex")
    value = dict(zip(c.edges, g.values))
    f: list[Fraction | None] = [None] * c.space.point_count
    for comp in graph.components:
        cyc = comp.cycle
        ring = [value[(min(a, b), max(a, b))] for a, b in zip(cyc, cyc[1:] + cyc[:1])]
        f[cyc[0]] = seed_value(ring)
        incident: dict[int, list[tuple[int, int]]] = {}
        for e in comp.edges:
            incident.setdefault(e[0], []).append(e)
            incident.setdefault(e[1], []).append(e)
        queue = deque([cyc[0]])
        while queue:
            v = queue.popleft()
            for e in incident[v]:
                w = e[1] if e[0] == v else e[0]
                if f[w] is None:
                    f[w] = value[e] - f[v]
                    queue.append(w)
    for (a, b), val in value.items():
        if f[a] + f[b] != val:
            raise InconsistentDataError(f"line ({a}, {b}) carries {val}, but the propagated values sum to {f[a] + f[b]}")
    return DataVector(tuple(f))


# -- construction recipes ---------------------------------------------------------


def _plane_of(space: GeometrySpace, line_ids) -> AffineFlat:
    pairs = line_pairs(space)
    pts = set()
    for i in line_ids:
        pts.update(pairs[i])
    for h in enumerate_hyperplanes(space):
        if pts <= set(h.points):
            if len(pts) != len(h.points):
                break
            return h
    raise ValueError("lines do not cover exactly one hyperplane")


def relatively_admissible(space: GeometrySpace, plane: AffineFlat, line_ids) -> bool:
    """Is the transform restricted to these lines injective on the plane's points?"""
    pairs = line_pairs(space)
    cols = {p: j for j, p in enumerate(plane.points)}
    ids = sorted(set(line_ids))
    if len(ids) != len(plane.points):
        return False
    rows = []
    for i in ids:
        a, b = pairs[i]
        if a not in cols or b not in cols:
            return False
        row = [0] * len(cols)
        row[cols[a]] = row[cols[b]] = 1
        rows.append(row)
    return exact.rank(rows) == len(cols)


def relatively_admissible_sets(space: GeometrySpace, plane: AffineFlat) -> list[tuple[int, ...]]:
    """All relatively admissible line sets inside a hyperplane."""
    pairs = line_pairs(space)
    members = set(plane.points)
    inside = [i for i, (a, b) in enumerate(pairs) if a in members and b in members]
    return [s for s in itertools.combinations(inside, len(members)) if relatively_admissible(space, plane, s)]


def construct_spread_union(space: GeometrySpace, first, second) -> LineComplex:
    """Union of relatively admissible line sets on two parallel hyperplanes."""
    p1, p2 = _plane_of(space, first), _plane_of(space, second)
    if p1.mask & p2.mask or (p1.mask | p2.mask) != (1 << space.point_count) - 1:
        raise ValueError("the two line sets must lie on complementary parallel hyperplanes")
    for plane, lines in ((p1, first), (p2, second)):
        if not relatively_admissible(space, plane, lines):
            raise ValueError(f"lines {sorted(lines)} are not relatively admissible in plane {plane.points}")
    c = LineComplex(space, tuple(first) + tuple(second))
    if not is_admissible(c):
        raise RuntimeError("spread union came out inadmissible")
    return c


def translation_legs(space: GeometrySpace, plane: AffineFlat, v: int) -> tuple[int, ...]:
    """Lines joining each point of the plane to its translate by v."""
    index = line_index(space)
    legs = []
    for p in plane.points:
        w = space.add(p, v)
        if w in plane.points:
            raise ValueError(f"translation by point {v} does not leave the plane")
        legs.append(index[(min(p, w), max(p, w))])
    return tuple(legs)


def construct_legs(space: GeometrySpace, core, legs) -> LineComplex:
    """A planar core plus parallel legs, one from each plane point to its translate.

    The result is admissible exactly when the core is relatively
    admissible; a bad core is not rejected, so its obstruction shows up
    in :func:`obstruction_scan`.
    """
    plane = _plane_of(space, core)
    if len(set(core)) != len(plane.points):
        raise ValueError(f"the core must have {len(plane.points)} lines")
    pairs = line_pairs(space)
    members = set(plane.points)
    feet, shifts = set(), set()
    for i in legs:
        a, b = pairs[i]
        if (a in members) == (b in members):
            raise ValueError(f"leg {pairs[i]} must join the plane to its complement")
        foot, tip = (a, b) if a in members else (b, a)
        feet.add(foot)
        shifts.add(space.add(foot, tip))  # over Z_2, tip - foot = tip + foot
    if feet != members or len(legs) != len(members):
        raise ValueError("legs must start once at every point of the plane")
    if len(shifts) != 1:
        raise ValueError("legs must be parallel translates")
    c = LineComplex(space, tuple(core) + tuple(legs))
    if relatively_admissible(space, plane, core) and not is_admissible(c):
        raise RuntimeError("legs over an admissible core came out inadmissible")
    return c


def planar_sections(c: LineComplex) -> list[tuple[AffineFlat, tuple[int, ...]]]:
    """For each hyperplane, the complex lines lying inside it."""
    pairs = line_pairs(c.space)
    out = []
    for h in enumerate_hyperplanes(c.space):
        m = h.mask
        out.append((h, tuple(i for i in c.line_ids if m >> pairs[i][0] & 1 and m >> pairs[i][1] & 1)))
    return out


def uses_planar_core(c: LineComplex) -> bool:
    return any(relatively_admissible(c.space, h, ids) for h, ids in planar_sections(c))


def iter_nonplanar_admissible(space: GeometrySpace, start: int = 0):
    """Admissible complexes whose section by every hyperplane fails to be
    relatively admissible, in lexicographic order from rank ``start``."""
    masks = line_masks(space)
    pairs = line_pairs(space)
    combos = itertools.combinations(range(len(pairs)), space.point_count)
    for ids in itertools.islice(combos, start, None):
        rec = classify_masks([masks[i] for i in ids], [pairs[i] for i in ids], space.point_count)
        if rec[4]:
            c = LineComplex(space, ids)
            if not uses_planar_core(c):
                yield c


# -- sampling -------------------------------------------------------------------


def random_complex(space: GeometrySpace, rng: random.Random) -> LineComplex:
    return LineComplex(space, tuple(rng.sample(range(len(line_pairs(space))), space.point_count)))


def sample_admissibility_rate(n: int, trials: int, seed: int) -> Fraction:
    """Fraction of uniformly random complexes in Z_2^n that are admissible."""
    if n < 3:
        raise ValueError("sampling is meant for n >= 3")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    space = GeometrySpace(2, n)
    rng = random.Random(seed)
    masks = line_masks(space)
    pairs = line_pairs(space)
    hits = 0
    for _ in range(trials):
        ids = rng.sample(range(len(pairs)), space.point_count)
        hits += classify_masks([masks[i] for i in ids], [pairs[i] for i in ids], space.point_count)[4]
    return Fraction(hits, trials)
