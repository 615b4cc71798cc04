"""Looms: the 2-regular graphs on ``[0; 2kpq - 1]`` that pair every point
with one short and one long partner.

Blocks of ``p`` consecutive points are matched in pairs by short pencils
and blocks of ``q`` points by long pencils, so the short partner of ``u`` is
``u + p`` when ``u // p`` is even and ``u - p`` otherwise (likewise for
``q``).  Every cycle alternates short and long edges.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .core import (
    CycleDecomposition,
    EdgeGraph,
    Interval,
    Leaper,
    decompose_degree2,
    edge,
)


def short_partner(u: int, p: int) -> int:
    return u + p if (u // p) % 2 == 0 else u - p


def long_partner(u: int, q: int) -> int:
    return u + q if (u // q) % 2 == 0 else u - q


@dataclass(frozen=True)
class Loom:
    leaper: Leaper
    k: int
    graph: EdgeGraph
    cycles: CycleDecomposition

    @property
    def width(self) -> int:
        return 2 * self.k * self.leaper.p * self.leaper.q

    def short_partner(self, u: int) -> int:
        return short_partner(u, self.leaper.p)

    def long_partner(self, u: int) -> int:
        return long_partner(u, self.leaper.q)

    def alternate_sets(self) -> list[tuple[frozenset, frozenset]]:
        """For each cycle, its even-indexed and odd-indexed vertices."""
        return [(frozenset(c[0::2]), frozenset(c[1::2])) for c in self.cycles.cycles]


def build_loom(leaper: Leaper, k: int) -> Loom:
    if k < 1:
        raise ValueError("k must be positive")
    p, q = leaper.p, leaper.q
    iv = Interval.of_size(2 * k * p * q)
    es = set()
    for u in iv:
        es.add(edge(u, short_partner(u, p)))
        es.add(edge(u, long_partner(u, q)))
    g = EdgeGraph(iv, es)
    return Loom(leaper, k, g, decompose_degree2(g, es))


@dataclass(frozen=True)
class LoomStats:
    eta: int
    xi: int
    lengths: tuple


def loom_stats(leaper: Leaper) -> LoomStats:
    """Number of cycles of the smallest loom and a quarter of its longest
    cycle length."""
    loom = build_loom(leaper, 1)
    lengths = tuple(sorted(loom.cycles.lengths()))
    if any(n % 4 for n in lengths):
        raise AssertionError(f"loom cycle lengths {lengths} not divisible by 4")
    return LoomStats(len(lengths), max(lengths) // 4, lengths)


def loom_table(max_sum: int) -> list[tuple[int, int, int, int]]:
    """``(p, q, eta, xi)`` for every skew free leaper with ``p + q <= max_sum``."""
    rows = []
    for s in range(3, max_sum + 1, 2):
        for p in range(1, (s + 1) // 2):
            if gcd(p, s - p) == 1:
                st = loom_stats(Leaper(p, s - p))
                rows.append((p, s - p, st.eta, st.xi))
    return rows


def classify_vertex(leaper: Leaper, u: int) -> str:
    """``"straight"`` when the two loom edges at ``u`` point to opposite
    sides, ``"turn"`` otherwise (in the loom on ``[0; 4pq - 1]``)."""
    p, q = leaper.p, leaper.q
    if not 0 <= u < 4 * p * q:
        raise ValueError(f"{u} outside [0; {4 * p * q - 1}]")
    return "straight" if (u // p + u // q) % 2 == 1 else "turn"


def classify_vertex_geometric(leaper: Leaper, u: int) -> str:
    s = short_partner(u, leaper.p) - u
    l = long_partner(u, leaper.q) - u
    return "straight" if (s > 0) != (l > 0) else "turn"


@dataclass(frozen=True)
class Shaft:
    """A cycle in the graph with steps ``2p`` and ``2q`` on
    ``[0; 4pq - 1]``: up from a straight ``u`` by ``2p`` to ``u + 2pq``,
    then back down by ``2q``."""

    start: int
    cycle: tuple

    @property
    def parity(self) -> int:
        return self.start % 2

    def edges(self) -> list:
        n = len(self.cycle)
        return [(self.cycle[i], self.cycle[(i + 1) % n]) for i in range(n)]


def shaft_at(leaper: Leaper, u: int) -> Shaft:
    p, q = leaper.p, leaper.q
    up = [u + 2 * p * i for i in range(q + 1)]
    down = [u + 2 * p * q - 2 * q * j for j in range(1, p)]
    cyc = tuple(up + down)
    if len(set(cyc)) != len(cyc):
        raise AssertionError(f"shaft at {u} repeats a vertex")
    return Shaft(u, cyc)


def enumerate_shafts(leaper: Leaper, parity: int | None = None) -> list[Shaft]:
    """All shafts, ordered by parity and then by their lower straight."""
    p, q = leaper.p, leaper.q
    out = []
    for par in (0, 1) if parity is None else (parity,):
        for u in range(par, 2 * p * q, 2):
            if classify_vertex(leaper, u) == "straight":
                out.append(shaft_at(leaper, u))
    return out


def is_bracket(loom: Loom, seq, kind: str) -> bool:
    """Four consecutive loom vertices whose outer edges are of ``kind``
    (``"short"`` or ``"long"``), middle edge of the other kind, and whose
    outer moves point in opposite directions."""
    p, q = loom.leaper.p, loom.leaper.q
    u1, u2, u3, u4 = seq
    outer, inner = (p, q) if kind == "short" else (q, p)
    g = loom.graph
    if not (g.has_edge(u1, u2) and g.has_edge(u2, u3) and g.has_edge(u3, u4)):
        return False
    if abs(u2 - u1) != outer or abs(u3 - u2) != inner or abs(u4 - u3) != outer:
        return False
    return (u2 - u1) * (u4 - u3) < 0


def find_bracket(loom: Loom, cycle, kind: str) -> tuple:
    """A bracket of ``kind`` inside ``cycle``.

    Long brackets are taken at the leftmost vertex ``u`` of the cycle as
    ``u + q, u, u + p, u + p + q``; short ones by scanning the cycle in its
    canonical orientation.
    """
    if kind not in ("short", "long"):
        raise ValueError("kind must be 'short' or 'long'")
    p, q = loom.leaper.p, loom.leaper.q
    if kind == "long":
        u = min(cycle)
        cand = (u + q, u, u + p, u + p + q)
        if is_bracket(loom, cand, "long"):
            return cand
    n = len(cycle)
    for i in range(n):
        cand = tuple(cycle[(i + j) % n] for j in range(4))
        if is_bracket(loom, cand, kind):
            return cand
    raise AssertionError(f"no {kind} bracket in cycle starting {cycle[:4]}")


def signatures(loom: Loom) -> list[frozenset]:
    """The alternate vertex sets of every loom cycle, two per cycle."""
    out = []
    for a, b in loom.alternate_sets():
        out += [a, b]
    return out


def signature_of_cell(loom: Loom, x: int, y: int) -> frozenset:
    """Signature of the braid through cell ``(x, y)``: the alternate set of
    ``x``'s loom cycle containing ``x`` when the cell is even, the other one
    when it is odd."""
    i = loom.cycles.cycle_of(x)
    cyc = loom.cycles.cycles[i]
    pos = cyc.index(x)
    same = frozenset(cyc[pos % 2::2])
    other = frozenset(cyc[1 - pos % 2::2])
    return same if (x + y) % 2 == 0 else other


@dataclass(frozen=True)
class LStar:
    graph: EdgeGraph
    components: int


def build_lstar(leaper: Leaper, k: int) -> LStar:
    """The loom together with every alternating 4-cycle of the projection
    graph that has two opposite edges in the loom."""
    loom = build_loom(leaper, k)
    p, q = leaper.p, leaper.q
    n = loom.width
    es = set(loom.graph.edges)
    for u in range(n):
        for sp in (p, -p):
            for sq in (q, -q):
                quad = (u, u + sp, u + sp + sq, u + sq)
                if not all(0 <= x < n for x in quad):
                    continue
                a, b, c, d = quad
                shorts = (edge(a, b), edge(d, c))
                longs = (edge(b, c), edge(a, d))
                if all(e in loom.graph.edges for e in shorts) or all(e in loom.graph.edges for e in longs):
                    es.update(shorts)
                    es.update(longs)
    g = EdgeGraph(range(n), es)
    return LStar(g, len(g.components()))
