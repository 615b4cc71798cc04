"""Switches: closed walks alternating between edges of a pseudotour and
edges outside it.  When every in-edge sits on its own cycle, swapping the
in-edges for the out-edges fuses all those cycles into one.

Rhombi have four cells, combs ``2(p + q)``.  Combs hang off a shaft of the
column graph and a mixed row ``v`` of the pattern; their signatures (the
braids they touch) drive the choice of combs in the board construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .core import (
    CycleDecomposition,
    Leaper,
    LeaperError,
    decompose_degree2,
    edge,
    is_leaper_move,
)
from .loom import Loom, Shaft, find_bracket, signature_of_cell, signatures
from .scarf import PreconditionUnmet


class NotASwitch(LeaperError):
    pass


class NotConnecting(LeaperError):
    pass


class NotEdgeDisjoint(LeaperError):
    pass


class NotMixed(LeaperError):
    pass


class DisconnectedHypergraph(LeaperError):
    pass


@dataclass(frozen=True)
class Switch:
    """A closed walk through ``cells``; edge ``i`` joins ``cells[i]`` and
    ``cells[i + 1]`` and the even-numbered edges are the in-edges."""

    cells: tuple
    kind: str = "rhombus"

    @property
    def in_edges(self) -> list:
        n = len(self.cells)
        return [edge(self.cells[i], self.cells[(i + 1) % n]) for i in range(0, n, 2)]

    @property
    def out_edges(self) -> list:
        n = len(self.cells)
        return [edge(self.cells[i], self.cells[(i + 1) % n]) for i in range(1, n, 2)]

    def all_edges(self) -> list:
        return self.in_edges + self.out_edges

    def shifted(self) -> "Switch":
        """The same walk with the roles of in- and out-edges swapped."""
        return Switch(self.cells[1:] + self.cells[:1], self.kind)


def rhombus(cells: Sequence) -> Switch:
    if len(cells) != 4:
        raise ValueError("a rhombus has four cells")
    return Switch(tuple(cells), "rhombus")


def check_switch(switch: Switch, edges, cycles: CycleDecomposition | None = None, leaper: Leaper | None = None):
    """Raise :class:`NotASwitch` unless the in-edges lie in ``edges``, the
    out-edges do not, and the in-edges meet pairwise different cycles."""
    n = len(switch.cells)
    if n % 2 or n < 4 or len(set(switch.cells)) != n:
        raise NotASwitch("a switch is a simple closed walk of even length")
    if leaper is not None:
        for i in range(n):
            if not is_leaper_move(leaper, switch.cells[i], switch.cells[(i + 1) % n]):
                raise NotASwitch(f"{switch.cells[i]}-{switch.cells[(i + 1) % n]} is not a leaper move")
    for e in switch.in_edges:
        if e not in edges:
            raise NotASwitch(f"in-edge {e} is not in the pseudotour")
    for e in switch.out_edges:
        if e in edges:
            raise NotASwitch(f"out-edge {e} is already in the pseudotour")
    if cycles is not None:
        ids = [cycles.cycle_of(a) for a, _ in switch.in_edges]
        if len(set(ids)) != len(ids):
            raise NotASwitch("two in-edges lie on the same cycle")


def flip_switch(edges, switch: Switch, cycles: CycleDecomposition | None = None, leaper: Leaper | None = None) -> frozenset:
    """Swap the switch's in-edges for its out-edges.  The touched cycles
    merge into one, so the cycle count drops by ``len(in_edges) - 1``."""
    edges = frozenset(edges)
    if cycles is None:
        cycles = decompose_degree2(None, edges)
    check_switch(switch, edges, cycles, leaper)
    return (edges - set(switch.in_edges)) | set(switch.out_edges)


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        parent = self.parent
        parent.setdefault(x, x)
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[max(ra, rb)] = min(ra, rb)
        return True


def check_edge_disjoint(switches: Iterable[Switch]):
    seen = {}
    for i, s in enumerate(switches):
        for e in s.all_edges():
            if e in seen:
                raise NotEdgeDisjoint(f"edge {e} used by switches {seen[e]} and {i}")
            seen[e] = i


@dataclass
class FlipReport:
    edges: frozenset
    flipped: list
    touched_cycles: int
    components: int


def flip_rhombus_system(edges, system: Sequence[Switch], cycles: CycleDecomposition | None = None,
                        require_connected: bool = True) -> FlipReport:
    """Flip the rhombi of a spanning tree of the graph whose vertices are the
    cycles touched by ``system`` (two cycles adjacent when some rhombus
    meets both).  The rhombi must be pairwise edge-disjoint."""
    edges = frozenset(edges)
    system = list(system)
    check_edge_disjoint(system)
    if cycles is None:
        cycles = decompose_degree2(None, edges)
    uf = _UnionFind()
    touched = set()
    chosen = []
    for s in system:
        if len(s.cells) != 4:
            raise NotASwitch("only rhombi can be flipped as a system")
        for e in s.in_edges:
            if e not in edges:
                raise NotASwitch(f"in-edge {e} is not in the pseudotour")
        for e in s.out_edges:
            if e in edges:
                raise NotASwitch(f"out-edge {e} is already in the pseudotour")
        a, b = (cycles.cycle_of(e[0]) for e in s.in_edges)
        touched.update((a, b))
        if uf.union(a, b):
            chosen.append(s)
    comps = len({uf.find(c) for c in touched})
    if require_connected and comps > 1:
        raise NotConnecting(f"the rhombi leave {comps} groups of cycles")
    new = set(edges)
    for s in chosen:
        new.difference_update(s.in_edges)
        new.update(s.out_edges)
    return FlipReport(frozenset(new), chosen, len(touched), comps)


def rhombus_from_opposite(leaper: Leaper, edges, a, c) -> Switch:
    """The rhombus with opposite corners ``a`` and ``c``, oriented so that
    its first edge lies in ``edges``."""
    cands = []
    for dx, dy in leaper.moves():
        b = (a[0] + dx, a[1] + dy)
        if is_leaper_move(leaper, b, c) and b != c:
            cands.append(b)
    if len(cands) != 2:
        raise NotASwitch(f"{a} and {c} are not opposite corners of a unique rhombus")
    b, d = sorted(cands)
    cells = (a, b, c, d)
    if edge(a, b) in edges:
        return rhombus(cells)
    return rhombus((b, c, d, a))


def find_rhombus_switches(leaper: Leaper, edges, height: int, width: int) -> list[Switch]:
    """Every rhombus whose two in-edges lie in ``edges`` and whose two
    out-edges are leaper moves outside ``edges``; each listed once."""
    edges = frozenset(edges)
    adj = {}
    for u, v in edges:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    moves = leaper.moves()
    found = set()
    out = []
    for e in sorted(edges):
        a, b = e
        for dx, dy in moves:
            c = (b[0] + dx, b[1] + dy)
            if not (0 <= c[0] < width and 0 <= c[1] < height) or c in (a, b):
                continue
            if edge(b, c) in edges:
                continue
            for d in adj.get(c, ()):
                if d in (a, b) or not is_leaper_move(leaper, d, a) or edge(d, a) in edges:
                    continue
                key = frozenset((e, edge(c, d)))
                if key in found:
                    continue
                found.add(key)
                out.append(rhombus((a, b, c, d)))
    return out


def stitch_by_rhombi(leaper: Leaper, edges, height: int, width: int) -> frozenset | None:
    """Merge all cycles of a pseudotour with edge-disjoint rhombus flips,
    choosing greedily in canonical order.  Returns None when the available
    rhombi cannot connect everything."""
    edges = frozenset(edges)
    cycles = decompose_degree2(None, edges)
    if cycles.is_tour:
        return edges
    used = set()
    system = []
    uf = _UnionFind()
    for s in find_rhombus_switches(leaper, edges, height, width):
        es = s.all_edges()
        if any(e in used for e in es):
            continue
        a, b = (cycles.cycle_of(e[0]) for e in s.in_edges)
        if uf.union(a, b):
            used.update(es)
            system.append(s)
    if len({uf.find(i) for i in range(len(cycles))}) > 1:
        return None
    return flip_rhombus_system(edges, system, cycles).edges


# rhombi inside a braid ---------------------------------------------------------


def braid_rhombus_system(loom: Loom, edges, cycles: CycleDecomposition, loom_cycle: int, cls: int,
                         designated: Sequence, braid_cycles=None) -> list[Switch]:
    """Rhombi connecting the cycles of one braid.

    ``designated`` lists, for each extension copy of a chain inside the
    pattern, its two designated long edges as ``(y1, z1, y2, z2)`` (edges
    ``y1-z1`` and ``y2-z2``, absolute rows).  With a short bracket
    ``x0 x1 x2 x3`` of the loom cycle, copy ``j`` yields the rhombus
    ``(x0, y1)(x1, z1)(x2, z2)(x3, y2)`` when the braid owns ``(x0, y1)`` of
    the first copy, and ``(x2, y1)(x3, z1)(x0, z2)(x1, y2)`` otherwise.
    Rhombi joining a cycle to itself are dropped.  Raises
    :class:`NotConnecting` unless the result joins every cycle of
    ``braid_cycles`` (when given).
    """
    if loom.leaper.p < 2:
        raise PreconditionUnmet("braids of a p = 1 leaper are single cycles")
    if not designated:
        raise PreconditionUnmet("no extension copies to place rhombi in")
    cyc = loom.cycles.cycles[loom_cycle]
    x0, x1, x2, x3 = find_bracket(loom, cyc, "short")
    pos0 = cyc.index(x0)
    own_first = (pos0 + x0 + designated[0][0]) % 2 == cls
    out = []
    uf = _UnionFind()
    for y1, z1, y2, z2 in designated:
        if own_first:
            cells = ((x0, y1), (x1, z1), (x2, z2), (x3, y2))
        else:
            cells = ((x2, y1), (x3, z1), (x0, z2), (x1, y2))
        s = rhombus(cells)
        if any(e not in edges for e in s.in_edges) or any(e in edges for e in s.out_edges):
            raise NotASwitch(f"rhombus {cells} does not alternate")
        a, b = (cycles.cycle_of(e[0]) for e in s.in_edges)
        if a != b:
            out.append(s)
            uf.union(a, b)
    if braid_cycles is not None:
        roots = {uf.find(c) for c in braid_cycles}
        if len(roots) > 1:
            raise NotConnecting(f"braid ({loom_cycle}, {cls}) left in {len(roots)} pieces")
    return out


# combs ---------------------------------------------------------------------


def mixed_neighbours(leaper: Leaper, pattern_adj: dict, v: int) -> tuple[int, int]:
    """Short and long pattern neighbours of a mixed row ``v``."""
    ns = pattern_adj[v]
    if len(ns) != 2:
        raise NotMixed(f"row {v} has degree {len(ns)}")
    short = [w for w in ns if abs(w - v) == leaper.p]
    long = [w for w in ns if abs(w - v) == leaper.q]
    if len(short) != 1 or len(long) != 1:
        raise NotMixed(f"row {v} is not mixed")
    return short[0], long[0]


def build_comb(loom: Loom, pattern_adj: dict, v: int, shaft: Shaft) -> Switch:
    """The comb with index ``v`` along ``shaft``.

    Each shaft edge becomes a two-step tooth through the midpoint column:
    a ``2q`` edge passes through row ``v'`` (the short neighbour of ``v``)
    and a ``2p`` edge through row ``v''`` (the long neighbour).  The walk
    starts at ``(u, v)``, ``u`` the lower straight, climbing by ``2q``.
    The first edge is oriented to lie in the product of loom and pattern.
    """
    leaper = loom.leaper
    vs, vl = mixed_neighbours(leaper, pattern_adj, v)
    order = (shaft.cycle[0],) + tuple(reversed(shaft.cycle[1:]))
    cells = []
    n = len(order)
    for i in range(n):
        a, b = order[i], order[(i + 1) % n]
        mid = (a + b) // 2
        cells.append((a, v))
        cells.append((mid, vs if abs(b - a) == 2 * leaper.q else vl))
    first_in = _in_product(loom, cells[0], cells[1])
    if not first_in:
        cells = cells[1:] + cells[:1]
    comb = Switch(tuple(cells), "comb")
    for e in comb.in_edges:
        if not _in_product(loom, *e):
            raise NotASwitch(f"comb at row {v} along shaft {shaft.start} does not alternate")
    for e in comb.out_edges:
        if _in_product(loom, *e):
            raise NotASwitch(f"comb at row {v} along shaft {shaft.start} does not alternate")
    return comb


def _in_product(loom: Loom, c1, c2) -> bool:
    """Whether the column move of a leaper edge is a loom edge (the row
    move is a pattern edge by construction of combs)."""
    (x1, _), (x2, _) = c1, c2
    return loom.graph.has_edge(x1, x2)


def comb_touch_signatures(loom: Loom, comb: Switch, cycles: CycleDecomposition, cycle_signature: dict) -> frozenset:
    """Signatures of the braids whose cycles the comb's in-edges meet,
    looked up through the scarf's actual cycles."""
    return frozenset(cycle_signature[cycles.cycle_of(e[0])] for e in comb.in_edges)


def comb_signatures_direct(loom: Loom, v: int, shaft: Shaft) -> frozenset:
    """The same set computed from the cells ``(u, v)``, ``u`` on the shaft."""
    return frozenset(signature_of_cell(loom, u, v) for u in shaft.cycle)


@dataclass
class Hypergraph:
    vertices: list
    hyperedges: dict
    selection: list = field(default_factory=list)

    def is_connected_spanning(self, keys) -> bool:
        return _connected_spanning(self.vertices, [self.hyperedges[k] for k in keys])


def _connected_spanning(vertices, edges) -> bool:
    if not edges:
        return len(vertices) <= 1
    cover = set().union(*edges)
    if cover != set(vertices):
        return False
    uf = _UnionFind()
    for e in edges:
        e = sorted(e, key=sorted)
        for x in e[1:]:
            uf.union(_key(e[0]), _key(x))
    return len({uf.find(_key(v)) for v in vertices}) == 1


def _key(sig: frozenset) -> tuple:
    return tuple(sorted(sig))


def build_hypergraph(loom: Loom, hyperedges: dict, fixed: Sequence | None = None) -> Hypergraph:
    """Choose a minimal set of hyperedges that is connected and covers every
    signature.

    ``hyperedges`` maps keys (in canonical order) to signature sets.  With
    ``fixed`` the given keys are used as they are and only checked.
    Otherwise hyperedges are added greedily, each time the first one in key
    order that meets the covered part and adds something new, and then
    redundant ones are dropped from the end.
    """
    verts = signatures(loom)
    h = Hypergraph(verts, dict(hyperedges))
    if fixed is not None:
        if not h.is_connected_spanning(list(fixed)):
            raise DisconnectedHypergraph("the given hyperedges do not connect every signature")
        h.selection = list(fixed)
        return h
    keys = sorted(hyperedges)
    if not _connected_spanning(verts, [hyperedges[k] for k in keys]):
        raise DisconnectedHypergraph("the hyperedges do not connect every signature")
    target = set(verts)
    sel = [keys[0]]
    covered = set(hyperedges[keys[0]])
    while covered != target:
        for k in keys:
            e = hyperedges[k]
            if e & covered and not e <= covered:
                sel.append(k)
                covered |= e
                break
        else:
            raise DisconnectedHypergraph("greedy selection got stuck")
    for k in reversed(list(sel)):
        rest = [x for x in sel if x != k]
        if rest and _connected_spanning(verts, [hyperedges[x] for x in rest]):
            sel = rest
    h.selection = sel
    return h
