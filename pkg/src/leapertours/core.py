"""Basic graph objects shared by every construction.

Vertices are plain integers (positions on a line) or ``(x, y)`` tuples
(cells of a board, ``x`` the column and ``y`` the row).  Edges are stored as
sorted 2-tuples so that equal edge sets compare equal regardless of how they
were produced.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Hashable, Iterable, Iterator, Sequence

Vertex = Hashable
Edge = tuple


class LeaperError(Exception):
    """Base class for every error raised by this package."""


class InvalidLeaper(LeaperError, ValueError):
    pass


class DegreeViolation(LeaperError):
    def __init__(self, vertex, degree):
        super().__init__(f"vertex {vertex!r} has degree {degree}, expected 2")
        self.vertex = vertex
        self.degree = degree


class NotASubgraph(LeaperError):
    def __init__(self, edge):
        super().__init__(f"edge {edge!r} is not an edge of the host graph")
        self.edge = edge


class InvalidPencil(LeaperError, ValueError):
    pass


def edge(u, v) -> Edge:
    """Return the undirected edge ``{u, v}`` in canonical (sorted) form."""
    if u == v:
        raise ValueError(f"self-loop at {u!r}")
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True, order=True)
class CoprimePair:
    """An unordered pair ``a < b`` of coprime positive integers."""

    a: int
    b: int

    def __post_init__(self):
        if not (0 < self.a < self.b):
            raise InvalidLeaper(f"need 0 < a < b, got ({self.a}, {self.b})")
        if gcd(self.a, self.b) != 1:
            raise InvalidLeaper(f"({self.a}, {self.b}) is not coprime")

    @property
    def both_odd(self) -> bool:
        return self.a % 2 == 1 and self.b % 2 == 1

    def __str__(self):
        return f"({self.a},{self.b})"


@dataclass(frozen=True, order=True)
class Leaper:
    """A skew free ``(p, q)``-leaper: ``p < q`` coprime with ``p + q`` odd."""

    p: int
    q: int

    def __post_init__(self):
        if not (0 < self.p < self.q):
            raise InvalidLeaper(f"need 0 < p < q, got ({self.p}, {self.q})")
        if gcd(self.p, self.q) != 1:
            raise InvalidLeaper(f"({self.p}, {self.q}) is not coprime")
        if (self.p + self.q) % 2 == 0:
            raise InvalidLeaper(f"({self.p}, {self.q}) has p + q even")

    @property
    def pair(self) -> CoprimePair:
        return CoprimePair(self.p, self.q)

    @property
    def is_knight(self) -> bool:
        return (self.p, self.q) == (1, 2)

    @property
    def is_antelope(self) -> bool:
        return (self.p, self.q) == (3, 4)

    @property
    def narrow(self) -> bool:
        """True when ``2p < q``."""
        return 2 * self.p < self.q

    @property
    def d(self) -> int:
        return self.q - self.p

    @property
    def alpha(self) -> int:
        return self.q // self.d

    @property
    def r(self) -> int:
        return self.p % self.d

    def moves(self) -> list[tuple[int, int]]:
        out = []
        for a, b in ((self.p, self.q), (self.q, self.p)):
            for sx in (1, -1):
                for sy in (1, -1):
                    out.append((sx * a, sy * b))
        return sorted(out)

    def __str__(self):
        return f"({self.p},{self.q})"


NAMED_LEAPERS = {
    "knight": Leaper(1, 2),
    "giraffe": Leaper(1, 4),
    "zebra": Leaper(2, 3),
    "antelope": Leaper(3, 4),
}


def parse_leaper(text: str) -> Leaper:
    """Accept ``knight``, ``2,3`` or ``(2,3)``."""
    key = text.strip().lower()
    if key in NAMED_LEAPERS:
        return NAMED_LEAPERS[key]
    parts = key.strip("()").replace(" ", "").split(",")
    if len(parts) != 2:
        raise InvalidLeaper(f"cannot parse leaper {text!r}")
    return Leaper(int(parts[0]), int(parts[1]))


@dataclass(frozen=True)
class Interval:
    """The integer interval ``[lo; hi]`` (empty when ``hi < lo``)."""

    lo: int
    hi: int

    @classmethod
    def of_size(cls, size: int, lo: int = 0) -> "Interval":
        return cls(lo, lo + size - 1)

    @property
    def size(self) -> int:
        return max(0, self.hi - self.lo + 1)

    def __len__(self):
        return self.size

    def __iter__(self) -> Iterator[int]:
        return iter(range(self.lo, self.hi + 1))

    def __contains__(self, x) -> bool:
        return isinstance(x, int) and self.lo <= x <= self.hi

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.size:
            raise IndexError(i)
        return self.lo + i

    def first(self, k: int) -> "Interval":
        return Interval(self.lo, self.lo + min(k, self.size) - 1)

    def last(self, k: int) -> "Interval":
        return Interval(self.hi - min(k, self.size) + 1, self.hi)

    def shift(self, t: int) -> "Interval":
        return Interval(self.lo + t, self.hi + t)

    def position(self, x: int) -> int:
        if x not in self:
            raise ValueError(f"{x} not in {self}")
        return x - self.lo

    def split(self, sizes: Sequence[int]) -> list["Interval"]:
        """Cut into consecutive pieces of the given sizes, left to right."""
        if sum(sizes) != self.size:
            raise ValueError(f"sizes {list(sizes)} do not add up to {self.size}")
        out, lo = [], self.lo
        for s in sizes:
            out.append(Interval(lo, lo + s - 1))
            lo += s
        return out

    def __str__(self):
        return f"[{self.lo};{self.hi}]"


class EdgeGraph:
    """An undirected simple graph with sorted adjacency lists."""

    __slots__ = ("vertices", "edges", "_adj")

    def __init__(self, vertices: Iterable, edges: Iterable[Edge]):
        self.vertices = tuple(sorted(set(vertices)))
        es = frozenset(edge(u, v) for u, v in edges)
        adj = {v: [] for v in self.vertices}
        for u, v in es:
            if u not in adj or v not in adj:
                raise ValueError(f"edge {(u, v)!r} leaves the vertex set")
            adj[u].append(v)
            adj[v].append(u)
        self.edges = es
        self._adj = {v: tuple(sorted(ns)) for v, ns in adj.items()}

    def neighbours(self, v) -> tuple:
        return self._adj[v]

    def degree(self, v) -> int:
        return len(self._adj[v])

    def has_edge(self, u, v) -> bool:
        return edge(u, v) in self.edges

    def subgraph(self, edges: Iterable[Edge]) -> "EdgeGraph":
        es = [edge(u, v) for u, v in edges]
        for e in es:
            if e not in self.edges:
                raise NotASubgraph(e)
        return EdgeGraph(self.vertices, es)

    def components(self) -> list[list]:
        seen, comps = set(), []
        for s in self.vertices:
            if s in seen:
                continue
            comp, stack = [], [s]
            seen.add(s)
            while stack:
                v = stack.pop()
                comp.append(v)
                for w in self._adj[v]:
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
            comps.append(sorted(comp))
        return comps

    def __len__(self):
        return len(self.vertices)

    def __eq__(self, other):
        return (
            isinstance(other, EdgeGraph)
            and self.vertices == other.vertices
            and self.edges == other.edges
        )

    def __hash__(self):
        return hash((self.vertices, self.edges))

    def __repr__(self):
        return f"EdgeGraph(|V|={len(self.vertices)}, |E|={len(self.edges)})"


def canonical_cycle(cycle: Sequence) -> tuple:
    """Rotate/reflect a cycle to start at its minimum vertex and head towards
    the smaller of that vertex's two neighbours."""
    n = len(cycle)
    if n < 3:
        raise ValueError("a cycle needs at least three vertices")
    i = min(range(n), key=lambda j: cycle[j])
    nxt, prv = cycle[(i + 1) % n], cycle[(i - 1) % n]
    if nxt <= prv:
        return tuple(cycle[(i + j) % n] for j in range(n))
    return tuple(cycle[(i - j) % n] for j in range(n))


def cycle_edges(cycle: Sequence) -> list[Edge]:
    n = len(cycle)
    return [edge(cycle[i], cycle[(i + 1) % n]) for i in range(n)]


@dataclass(frozen=True)
class CycleDecomposition:
    """The cycles of a spanning 2-regular graph, each in canonical form,
    listed in order of their minimum vertex."""

    cycles: tuple
    index: dict = field(compare=False, repr=False, hash=False, default=None)

    @property
    def is_tour(self) -> bool:
        return len(self.cycles) == 1

    @property
    def cycle(self) -> tuple:
        if not self.is_tour:
            raise ValueError(f"{len(self.cycles)} cycles, not a tour")
        return self.cycles[0]

    def __len__(self):
        return len(self.cycles)

    def cycle_of(self, v) -> int:
        """Index of the cycle through ``v``."""
        return self.index[v]

    def edges(self) -> set:
        out = set()
        for c in self.cycles:
            out.update(cycle_edges(c))
        return out

    def lengths(self) -> list[int]:
        return [len(c) for c in self.cycles]


def adjacency_from_edges(edges: Iterable[Edge]) -> dict:
    adj: dict = {}
    for u, v in edges:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    return adj


def decompose_degree2(graph: EdgeGraph | None, subset: Iterable[Edge], vertices=None) -> CycleDecomposition:
    """Split a spanning subgraph in which every vertex has degree two into
    its cycles.

    ``subset`` must consist of edges of ``graph`` (when a host graph is
    given).  ``vertices`` defaults to the vertices of ``graph``.
    """
    subset = [edge(u, v) for u, v in subset]
    if graph is not None:
        for e in subset:
            if e not in graph.edges:
                raise NotASubgraph(e)
        if vertices is None:
            vertices = graph.vertices
    if vertices is None:
        vertices = {x for e in subset for x in e}
    adj = {v: [] for v in vertices}
    for u, v in subset:
        if u not in adj or v not in adj:
            raise NotASubgraph((u, v))
        adj[u].append(v)
        adj[v].append(u)
    for v in sorted(adj):
        if len(adj[v]) != 2:
            raise DegreeViolation(v, len(adj[v]))
    if len(set(subset)) != len(subset):
        raise ValueError("repeated edge in subset")
    seen = set()
    cycles = []
    for s in sorted(adj):
        if s in seen:
            continue
        cyc = [s]
        seen.add(s)
        prev, cur = s, min(adj[s])
        while cur != s:
            cyc.append(cur)
            seen.add(cur)
            a, b = adj[cur]
            prev, cur = cur, (b if a == prev else a)
        cycles.append(canonical_cycle(cyc))
    cycles.sort(key=lambda c: c[0])
    index = {v: i for i, c in enumerate(cycles) for v in c}
    return CycleDecomposition(tuple(cycles), index)


def is_tour(edges: Iterable[Edge], vertices) -> bool:
    try:
        return decompose_degree2(None, edges, vertices).is_tour
    except (DegreeViolation, NotASubgraph, ValueError):
        return False


def projection_edges(a: int, b: int, interval: Interval) -> list[Edge]:
    out = []
    for u in interval:
        for step in (a, b):
            if u + step <= interval.hi:
                out.append((u, u + step))
    return out


def build_projection_graph(pair, interval: Interval) -> EdgeGraph:
    """The graph on ``interval`` joining ``u`` and ``v`` when ``|u - v|`` is
    one of the two step lengths."""
    a, b = _steps(pair)
    return EdgeGraph(interval, projection_edges(a, b, interval))


def _steps(pair) -> tuple[int, int]:
    if isinstance(pair, Leaper):
        return pair.p, pair.q
    if isinstance(pair, CoprimePair):
        return pair.a, pair.b
    a, b = pair
    CoprimePair(a, b)
    return a, b


def board_cells(height: int, width: int) -> list[tuple[int, int]]:
    return [(x, y) for x in range(width) for y in range(height)]


def leaper_neighbours(cell, leaper: Leaper, height: int, width: int) -> list:
    x, y = cell
    out = []
    for dx, dy in leaper.moves():
        nx, ny = x + dx, y + dy
        if 0 <= nx < width and 0 <= ny < height:
            out.append((nx, ny))
    return sorted(out)


def is_leaper_move(leaper: Leaper, c1, c2) -> bool:
    dx, dy = abs(c1[0] - c2[0]), abs(c1[1] - c2[1])
    return {dx, dy} == {leaper.p, leaper.q} and dx != dy


def build_leaper_graph(leaper: Leaper, height: int, width: int) -> EdgeGraph:
    """Leaper graph of the board with ``height`` rows and ``width`` columns."""
    if height <= 0 or width <= 0:
        raise ValueError("board dimensions must be positive")
    cells = board_cells(height, width)
    es = []
    for c in cells:
        for d in leaper_neighbours(c, leaper, height, width):
            if c < d:
                es.append((c, d))
    return EdgeGraph(cells, es)


def pencil(i1: Interval, i2: Interval, steps=None) -> list[Edge]:
    """Join corresponding elements of two equal-size intervals.

    When ``steps`` is given the offset between the intervals must be one of
    them (up to sign).
    """
    if i1.size != i2.size:
        raise InvalidPencil(f"sizes differ: {i1} vs {i2}")
    if i1.size == 0:
        return []
    off = abs(i2.lo - i1.lo)
    if off == 0:
        raise InvalidPencil("a pencil needs distinct intervals")
    if steps is not None and off not in steps:
        raise InvalidPencil(f"offset {off} of {i1}, {i2} is not in {tuple(steps)}")
    return [edge(u, u + i2.lo - i1.lo) for u in i1]


def reflect_edges(edges: Iterable[Edge], lo: int, hi: int) -> list[Edge]:
    """Mirror integer edges inside ``[lo; hi]``."""
    return [edge(lo + hi - u, lo + hi - v) for u, v in edges]


def shift_edges(edges: Iterable[Edge], t: int) -> list[Edge]:
    return [(u + t, v + t) for u, v in edges]


def check_projection_edges(a: int, b: int, edges: Iterable[Edge], interval: Interval):
    for u, v in edges:
        if u not in interval or v not in interval or abs(u - v) not in (a, b):
            raise NotASubgraph((u, v))


def check_board_tour(leaper: Leaper, height: int, width: int, cycle: Sequence) -> None:
    """Raise unless ``cycle`` visits every cell once and closes up with
    leaper moves."""
    if len(cycle) != height * width:
        raise ValueError(f"cycle has {len(cycle)} cells, board has {height * width}")
    if len(set(cycle)) != len(cycle):
        raise ValueError("cycle repeats a cell")
    for x, y in cycle:
        if not (0 <= x < width and 0 <= y < height):
            raise ValueError(f"cell {(x, y)} is off the board")
    n = len(cycle)
    for i in range(n):
        if not is_leaper_move(leaper, cycle[i], cycle[(i + 1) % n]):
            raise ValueError(f"{cycle[i]} -> {cycle[(i + 1) % n]} is not a leaper move")
