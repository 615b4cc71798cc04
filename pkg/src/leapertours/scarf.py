"""Products of a loom (on the columns) with a pattern (on the rows).

A leaper edge of the board belongs to the product when its horizontal
projection is an edge of the column graph and its vertical projection an
edge of the row graph.  A short column edge can only pair with a long row
edge and vice versa, so the product of a loom with a 2-regular pattern is
again 2-regular: a pseudotour of the board.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import (
    CycleDecomposition,
    EdgeGraph,
    Leaper,
    LeaperError,
    decompose_degree2,
    edge,
)
from .loom import Loom, signature_of_cell


class PreconditionUnmet(LeaperError):
    pass


def product(gx: EdgeGraph, gy: EdgeGraph, leaper: Leaper) -> EdgeGraph:
    """Leaper edges on ``V(gx) x V(gy)`` whose projections lie in ``gx`` and
    ``gy``."""
    p, q = leaper.p, leaper.q
    by_len = {p: [], q: []}
    for u, v in gy.edges:
        dy = abs(u - v)
        if dy in by_len:
            by_len[dy].append((u, v))
    es = []
    for x1, x2 in gx.edges:
        dx = abs(x1 - x2)
        if dx not in (p, q):
            continue
        for y1, y2 in by_len[q if dx == p else p]:
            es.append(((x1, y1), (x2, y2)))
            es.append(((x1, y2), (x2, y1)))
    cells = [(x, y) for x in gx.vertices for y in gy.vertices]
    return EdgeGraph(cells, es)


def scarf_edges(loom: Loom, pattern_adj: dict, rows) -> set:
    """Edges of the product of ``loom`` with a 2-regular pattern given by its
    adjacency, restricted to ``rows``.  Linear in the number of cells."""
    p = loom.leaper.p
    es = set()
    for y in rows:
        for y2 in pattern_adj[y]:
            dy = abs(y2 - y)
            for x in range(loom.width):
                x2 = loom.long_partner(x) if dy == p else loom.short_partner(x)
                es.add(edge((x, y), (x2, y2)))
    return es


@dataclass(frozen=True)
class Scarf:
    loom: Loom
    pattern: EdgeGraph
    graph: EdgeGraph
    cycles: CycleDecomposition

    @property
    def leaper(self) -> Leaper:
        return self.loom.leaper

    @property
    def rows(self) -> tuple:
        return self.pattern.vertices

    def cycle_of_edge(self, e) -> int:
        a, b = e
        i = self.cycles.cycle_of(a)
        if i != self.cycles.cycle_of(b):
            raise ValueError(f"{e} is not an edge of the scarf")
        return i


def build_scarf(loom: Loom, pattern: EdgeGraph) -> Scarf:
    """Product of a loom with a 2-regular pattern on the rows."""
    for y in pattern.vertices:
        if pattern.degree(y) != 2:
            raise PreconditionUnmet(f"pattern vertex {y} has degree {pattern.degree(y)}")
    adj = {y: pattern.neighbours(y) for y in pattern.vertices}
    es = scarf_edges(loom, adj, pattern.vertices)
    cells = [(x, y) for x in range(loom.width) for y in pattern.vertices]
    g = EdgeGraph(cells, es)
    return Scarf(loom, pattern, g, decompose_degree2(g, es))


def braid_class(loom: Loom, x: int, y: int) -> tuple[int, int]:
    """``(loom cycle index, class)`` of cell ``(x, y)``; class 0 collects
    the cells whose column sits at a position of the same parity as the
    cell itself along the canonical loom cycle."""
    i = loom.cycles.cycle_of(x)
    pos = loom.cycles.cycles[i].index(x)
    return i, (pos + x + y) % 2


@dataclass(frozen=True)
class Braid:
    loom_cycle: int
    cls: int
    cycles: tuple
    signature: frozenset


def decompose_braids(scarf: Scarf) -> list[Braid]:
    """Group the scarf's cycles by the braid (loom cycle and class) of their
    cells.  Raises if a cycle straddles two braids."""
    loom = scarf.loom
    pos = {}
    for i, c in enumerate(loom.cycles.cycles):
        for j, x in enumerate(c):
            pos[x] = (i, j)
    groups = {}
    sig = {}
    for ci, cyc in enumerate(scarf.cycles.cycles):
        keys = set()
        for x, y in cyc:
            i, j = pos[x]
            keys.add((i, (j + x + y) % 2))
        if len(keys) != 1:
            raise AssertionError(f"scarf cycle {ci} meets {len(keys)} braids")
        key = keys.pop()
        groups.setdefault(key, []).append(ci)
        if key not in sig:
            x, y = cyc[0]
            sig[key] = signature_of_cell(loom, x, y)
    return [Braid(k[0], k[1], tuple(v), sig[k]) for k, v in sorted(groups.items())]


@dataclass(frozen=True)
class RowVisitReport:
    cycle_count: int
    cycle_length: int
    braid_sizes: dict


def row_visit_check(scarf: Scarf) -> RowVisitReport:
    """For an odd pattern that is a single cycle: every scarf cycle meets
    every row in exactly two cells of opposite colours, has length twice the
    height, and a braid over a loom cycle of length ``4l`` holds ``l`` of
    them.  Raises ``AssertionError`` on any violation."""
    m = len(scarf.rows)
    if m % 2 == 0:
        raise PreconditionUnmet("the pattern must have an odd number of rows")
    pdec = decompose_degree2(scarf.pattern, scarf.pattern.edges)
    if not pdec.is_tour:
        raise PreconditionUnmet("the pattern must be a single cycle")
    for cyc in scarf.cycles.cycles:
        if len(cyc) != 2 * m:
            raise AssertionError(f"cycle of length {len(cyc)}, expected {2 * m}")
        rows = {}
        for x, y in cyc:
            rows.setdefault(y, []).append((x + y) % 2)
        if set(rows) != set(scarf.rows):
            raise AssertionError("a cycle misses a row")
        for y, cols in rows.items():
            if sorted(cols) != [0, 1]:
                raise AssertionError(f"row {y} visited as {cols}")
    n = scarf.loom.width
    if len(scarf.cycles) != n // 2:
        raise AssertionError(f"{len(scarf.cycles)} cycles, expected {n // 2}")
    sizes = {}
    for b in decompose_braids(scarf):
        ell = len(scarf.loom.cycles.cycles[b.loom_cycle]) // 4
        if len(b.cycles) != ell:
            raise AssertionError(f"braid over a loom cycle of length {4 * ell} has {len(b.cycles)} cycles")
        sizes[(b.loom_cycle, b.cls)] = len(b.cycles)
    return RowVisitReport(len(scarf.cycles), 2 * m, sizes)
