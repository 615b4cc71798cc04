"""Hamiltonian cycles of the one-dimensional graphs ``Pi(p, q, I)``.

``Pi(p, q, I)`` joins two points of the interval ``I`` when they are ``p``
(a short edge) or ``q`` (a long edge) apart.  Tours are returned as
:class:`~leapertours.core.EdgeGraph` objects whose vertices are the whole
interval.

The constructions here fall into three families:

* explicit tours: a single block of ``p + q`` points, several such blocks
  stitched side by side, and the knight's unique tours;
* extensions, bundles of disjoint paths that can be wedged into a tour at a
  split to lengthen it by a fixed amount;
* the base tours for ``2p > q`` assembled out of ladders and pencils.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .core import (
    CoprimePair,
    EdgeGraph,
    Interval,
    Leaper,
    LeaperError,
    decompose_degree2,
    edge,
    pencil,
    projection_edges,
    reflect_edges,
    shift_edges,
)


class NoTour(LeaperError):
    pass


class InvalidWidth(LeaperError, ValueError):
    pass


class UnsupportedSplit(LeaperError):
    pass


class WidthMismatch(LeaperError):
    pass


class BelowThreshold(LeaperError):
    pass


class ParityViolation(LeaperError):
    pass


class ConstructionError(LeaperError):
    """An internal consistency check failed; indicates a bug."""


def steps_of(pair) -> tuple[int, int]:
    if isinstance(pair, Leaper):
        return pair.p, pair.q
    if isinstance(pair, CoprimePair):
        return pair.a, pair.b
    p, q = pair
    CoprimePair(p, q)
    return p, q


def _params(pair):
    p, q = steps_of(pair)
    d = q - p
    return p, q, d, p % d, q // d


def _tour(edges, interval: Interval) -> EdgeGraph:
    es = [edge(u, v) for u, v in edges]
    dec = decompose_degree2(None, es, list(interval))
    if not dec.is_tour:
        raise ConstructionError(f"expected a tour on {interval}, got {len(dec)} cycles")
    return EdgeGraph(interval, es)


def interval_of(tour: EdgeGraph) -> Interval:
    return Interval(tour.vertices[0], tour.vertices[-1])


def check_tour(pair, tour: EdgeGraph) -> bool:
    """True when ``tour`` is a Hamiltonian cycle of the projection graph on
    its own vertex interval."""
    p, q = steps_of(pair)
    iv = interval_of(tour)
    if len(tour.vertices) != iv.size:
        return False
    if any(abs(u - v) not in (p, q) for u, v in tour.edges):
        return False
    try:
        return decompose_degree2(None, tour.edges, list(iv)).is_tour
    except LeaperError:
        return False


# explicit tours --------------------------------------------------------------


def tour_pst(pair, lo: int = 0) -> EdgeGraph:
    """The whole of ``Pi(p, q, p + q)``, which is itself a single cycle."""
    p, q = steps_of(pair)
    iv = Interval.of_size(p + q, lo)
    return _tour(projection_edges(p, q, iv), iv)


def tour_pmt(pair, k: int, lo: int = 0) -> EdgeGraph:
    """``k`` blocks of ``p + q`` points, each a copy of :func:`tour_pst`,
    merged by swapping two short edges for two long ones at every seam."""
    if k < 1:
        raise ValueError("need at least one block")
    p, q = steps_of(pair)
    n = p + q
    u, v, w = (q - p) // 2, (p + q) // 2, (3 * p + q) // 2
    es = set()
    for i in range(k):
        es.update(projection_edges(p, q, Interval.of_size(n, lo + i * n)))
    for i in range(k - 1):
        a, b = lo + i * n, lo + (i + 1) * n
        es -= {edge(a + v, a + w), edge(b + u, b + v)}
        es |= {edge(a + v, b + u), edge(a + w, b + v)}
    return _tour(es, Interval.of_size(k * n, lo))


def tour_pkt(n: int, lo: int = 0) -> EdgeGraph:
    """The unique knight tour of ``Pi(1, 2, n)``: every long edge plus the
    two short edges at the ends."""
    if n < 3:
        raise NoTour(f"Pi(1,2,{n}) has no Hamiltonian cycle")
    iv = Interval.of_size(n, lo)
    es = [(u, u + 2) for u in range(lo, lo + n - 2)]
    es += [(lo, lo + 1), (lo + n - 2, lo + n - 1)]
    return _tour(es, iv)


def tour_3a_plus_b(pair, lo: int = 0) -> EdgeGraph:
    """A tour on ``3a + b`` points for ``2a < b`` out of four pencils."""
    a, b = steps_of(pair)
    if not 2 * a < b:
        raise ValueError("needs 2a < b")
    iv = Interval.of_size(3 * a + b, lo)
    i1, i2, j, i3, i4 = iv.split([a, a, b - a, a, a])
    es = pencil(i1, i2) + pencil(i3, i4)
    es += pencil(j.first(b - 2 * a), j.last(b - 2 * a))
    es += pencil(iv.first(3 * a), iv.last(3 * a))
    return _tour(es, iv)


# extensions -----------------------------------------------------------------


@dataclass(frozen=True)
class Extension:
    """Disjoint paths joining ``i`` to ``i + length`` for ``0 <= i < width``
    and jointly covering ``[0; width + length - 1]``.

    ``designated`` holds two long edges used later to build rhombus switches
    between neighbouring copies, or ``None``.
    """

    steps: tuple
    width: int
    length: int
    edges: frozenset
    paths: tuple
    designated: tuple | None = None
    kind: str = ""

    @property
    def interval(self) -> Interval:
        return Interval.of_size(self.width + self.length)

    def placed(self, offset: int) -> list:
        return shift_edges(self.edges, offset)

    def mixed_vertices(self) -> list[int]:
        """Vertices incident with one short and one long edge of the paths."""
        p, q = self.steps
        inc = {}
        for u, v in self.edges:
            for x in (u, v):
                inc.setdefault(x, []).append(abs(u - v))
        return sorted(x for x, ls in inc.items() if sorted(ls) == [p, q])


def _paths_from_edges(edges, width: int, length: int) -> tuple:
    adj = {}
    for u, v in edges:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    total = width + length
    paths, seen = [], set()
    for s in range(width):
        path = [s]
        prev, cur = None, s
        while True:
            nxt = [w for w in adj.get(cur, []) if w != prev]
            if cur != s and len(adj[cur]) == 1:
                break
            if len(nxt) != 1:
                raise ConstructionError(f"path from {s} branches or stops at {cur}")
            prev, cur = cur, nxt[0]
            path.append(cur)
            if len(path) > total:
                raise ConstructionError(f"path from {s} runs into a cycle")
        if path[-1] != s + length:
            raise ConstructionError(f"path from {s} ends at {path[-1]}, not {s + length}")
        paths.append(tuple(path))
        seen.update(path)
    if seen != set(range(total)) or sum(len(x) for x in paths) != total:
        raise ConstructionError("extension paths do not partition the interval")
    return tuple(paths)


def _extension(steps, width, length, edges, designated=None, kind="") -> Extension:
    es = frozenset(edge(u, v) for u, v in edges)
    p, q = steps
    for u, v in es:
        if abs(u - v) not in (p, q) or not (0 <= u < width + length and 0 <= v < width + length):
            raise ConstructionError(f"bad extension edge {(u, v)}")
    paths = _paths_from_edges(es, width, length)
    if designated is not None:
        for e in designated:
            if e not in es:
                raise ConstructionError(f"designated edge {e} missing")
    return Extension((p, q), width, length, es, paths, designated, kind)


def wide_split_width(pair) -> int:
    """Width of the default split for ``2p > q`` (break off the largest
    ladder that still leaves a valid extension width)."""
    p, q, d, r, alpha = _params(pair)
    if not 2 * p > q:
        raise InvalidWidth("only defined when 2p > q")
    k = alpha // 2
    if d == 1 and q % 2 == 0:
        k = alpha // 2 - 1
    return 2 * k * d


def _narrow_extension(p: int, q: int) -> Extension:
    width, length = 2 * p, 2 * q
    mid = Interval.of_size(width, q)
    es = set()
    for u in mid:
        es |= {edge(u - q, u), edge(u, u + q)}
    gap = Interval(2 * p, q - 1)
    designated = None
    for u in gap.first(p):
        i = 1
        while u + p * i not in mid:
            i += 1
        v = u + p * i
        es.discard(edge(v, v + q))
        chain = list(range(u, v, p))
        for a, b in zip(chain, chain[1:]):
            es.add(edge(a, b))
            es.add(edge(a + q, b + q))
        es |= {edge(v, v - p), edge(u, u + q), edge(v - p + q, v + q)}
        if designated is None and i % 2 == 1 and p >= 2:
            designated = (edge(v - q, v), edge(v + p - q, v + p))
    return _extension((p, q), width, length, es, designated, "narrow")


def _wide_extension(p: int, q: int, s: int) -> Extension:
    d = q - p
    length = 2 * q
    mid = Interval.of_size(s, q)
    es = set()
    for u in mid:
        es |= {edge(u - q, u), edge(u, u + q)}
    gap = Interval(s, q - 1)
    head = gap.first(d)
    for u in gap:
        v = u + p if u in head else u - p
        if edge(v, v + q) not in es:
            raise ConstructionError(f"edge {v}-{v + q} already removed")
        es.discard(edge(v, v + q))
        es |= {edge(v, u), edge(u, u + q), edge(u + q, v + q)}
    designated = None
    if p >= 2:
        w = d if s == q - 2 * d else max(0, s - p)
        designated = (edge(w + p, w + p + q), edge(w, w + q))
    return _extension((p, q), s, length, es, designated, "wide")


ANTELOPE_PATHS = ((0, 3, 6, 2, 5, 8, 12, 9, 13, 10, 14), (1, 4, 7, 11, 15))


def _antelope_extension() -> Extension:
    es = []
    for path in ANTELOPE_PATHS:
        es += [edge(a, b) for a, b in zip(path, path[1:])]
    return _extension((3, 4), 2, 14, es, (edge(10, 14), edge(7, 11)), "antelope")


def make_extension(pair, s: int | None = None, *, variant: str | None = None) -> Extension:
    """Build an extension of width ``s``.

    For ``2p < q`` the width is ``2p`` and the length ``2q``.  For ``2p > q``
    any ``max(2d, q - 2d) <= s < q`` works (length ``2q``); the default is
    the width of the standard split.  For the antelope the default is the
    hand-made extension of width 2 and length 14 (``variant="antelope"``);
    pass ``variant="wide"`` for the generic one.
    """
    p, q, d, r, alpha = _params(pair)
    if 2 * p < q:
        if s is not None and s != 2 * p:
            raise InvalidWidth(f"width must be {2 * p} when 2p < q")
        return _narrow_extension(p, q)
    if 2 * p == q:
        raise InvalidWidth("the knight has no extension")
    if s is None:
        s = wide_split_width((p, q))
    if variant is None:
        variant = "antelope" if (p, q) == (3, 4) and s == 2 else "wide"
    if variant == "antelope":
        if (p, q, s) != (3, 4, 2):
            raise InvalidWidth("the hand-made extension exists for (3,4) with width 2 only")
        return _antelope_extension()
    if not (max(2 * d, q - 2 * d) <= s < q):
        raise InvalidWidth(f"width {s} outside [{max(2 * d, q - 2 * d)}; {q - 1}]")
    return _wide_extension(p, q, s)


def chain_extensions(E: Extension | Sequence[Extension], k: int | None = None) -> Extension:
    """Glue copies of extensions end to end; the result is again an
    extension whose length is the sum of the lengths."""
    parts = [E] * k if isinstance(E, Extension) else list(E)
    if not parts:
        raise ValueError("empty chain")
    width = parts[0].width
    if any(x.width != width for x in parts):
        raise WidthMismatch("all extensions in a chain need the same width")
    es, off = set(), 0
    for x in parts:
        es.update(x.placed(off))
        off += x.length
    return _extension(parts[0].steps, width, off, es, parts[0].designated, "chain")


def chain_offsets(parts: Sequence[Extension]) -> list[int]:
    out, off = [], 0
    for x in parts:
        out.append(off)
        off += x.length
    return out


# splits -----------------------------------------------------------------------


@dataclass(frozen=True)
class Split:
    """A partition of a tour's edges into ``left`` and ``right`` such that
    ``v0``, ``v1`` and ``v2`` (consecutive intervals) carry degree 2, 1, 0 in
    ``left``."""

    left: frozenset
    right: frozenset
    v0: Interval
    v1: Interval
    v2: Interval

    @property
    def width(self) -> int:
        return self.v1.size


def build_ladder(pair, k: int, lo: int = 0) -> EdgeGraph:
    """The ladder on ``2kq`` points: pencils between consecutive pairs of
    ``p``-blocks of the first ``2kp`` points and of ``q``-blocks of all of
    them.  Its degree-one vertices are the last ``2k(q - p)`` points."""
    p, q, d, r, alpha = _params(pair)
    if not 2 * p > q:
        raise ValueError("ladders are defined for 2p > q")
    if k < 1 or 2 * k > alpha:
        raise ValueError(f"need 1 <= 2k <= {alpha}, got k={k}")
    iv = Interval.of_size(2 * k * q, lo)
    ps = iv.first(2 * k * p).split([p] * (2 * k))
    qs = iv.split([q] * (2 * k))
    es = []
    for i in range(k):
        es += pencil(ps[2 * i], ps[2 * i + 1], (p, q))
        es += pencil(qs[2 * i], qs[2 * i + 1], (p, q))
    return EdgeGraph(iv, es)


def ladder_endpoint_map(pair, k: int) -> dict:
    """Walk the paths of the ladder: map each degree-one vertex to the other
    end of its path."""
    g = build_ladder(pair, k)
    ends = {}
    for s in g.vertices:
        if g.degree(s) != 1 or s in ends:
            continue
        prev, cur = None, s
        steps = 0
        while True:
            nxt = [w for w in g.neighbours(cur) if w != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            steps += 1
            if steps > len(g.vertices):
                raise ConstructionError("ladder contains a cycle")
        ends[s], ends[cur] = cur, s
    return ends


def _split_from_left(tour: EdgeGraph, left: set) -> Split:
    iv = interval_of(tour)
    if not left <= tour.edges:
        raise UnsupportedSplit("tour does not contain the expected block")
    deg = {v: 0 for v in iv}
    for u, v in left:
        deg[u] += 1
        deg[v] += 1
    seq = [2 - deg[v] for v in iv]  # 0, 1, 2 for v0, v1, v2
    if seq != sorted(seq) or 1 not in seq:
        raise UnsupportedSplit("degrees do not form a split")
    n0, n1 = seq.count(0), seq.count(1)
    v0 = Interval(iv.lo, iv.lo + n0 - 1)
    v1 = Interval(v0.hi + 1, v0.hi + n1)
    v2 = Interval(v1.hi + 1, iv.hi)
    return Split(frozenset(left), frozenset(tour.edges - left), v0, v1, v2)


def find_split(pair, tour: EdgeGraph, s: int | None = None, end: str = "left") -> Split:
    """Locate a split of width ``s`` at one end of ``tour``.

    For ``2p < q`` the split is formed by the short edges forced at the end
    (width ``2p``).  For ``2p > q`` a ladder of width ``s`` is broken off;
    it must be present in the tour.
    """
    if end not in ("left", "right"):
        raise ValueError("end must be 'left' or 'right'")
    p, q, d, r, alpha = _params(pair)
    iv = interval_of(tour)
    if 2 * p == q:
        raise UnsupportedSplit("the knight's tours admit no split")
    if 2 * p < q:
        if s is not None and s != 2 * p:
            raise UnsupportedSplit(f"splits have width {2 * p} when 2p < q")
        if end == "left":
            block = {edge(u, u + p) for u in iv.first(p)}
            return _split_from_left(tour, block)
        block = {edge(u - p, u) for u in iv.last(p)}
        return _split_from_left(tour, set(tour.edges) - block)
    if s is None:
        s = wide_split_width((p, q))
    if s % (2 * d) or not 1 <= s // (2 * d) <= alpha // 2:
        raise UnsupportedSplit(f"no ladder of width {s}")
    k = s // (2 * d)
    lad = build_ladder((p, q), k)
    if end == "left":
        block = set(shift_edges(lad.edges, iv.lo))
        return _split_from_left(tour, block)
    start = iv.hi - 2 * k * q + 1
    block = set(reflect_edges(shift_edges(lad.edges, start), start, iv.hi))
    if not block <= tour.edges:
        raise UnsupportedSplit("tour does not contain the expected block")
    return _split_from_left(tour, set(tour.edges) - block)


def extend_tour(tour: EdgeGraph, split: Split, E: Extension | Sequence[Extension], k: int | None = None) -> EdgeGraph:
    """Wedge a chain of extensions into ``tour`` at ``split``: the left part
    stays, the chain starts at ``v1`` and the right part moves along by the
    chain's length."""
    if k == 0 or (not isinstance(E, Extension) and not E):
        return tour
    chain = chain_extensions(E, k)
    if chain.width != split.width:
        raise WidthMismatch(f"extension width {chain.width} vs split width {split.width}")
    iv = interval_of(tour)
    t = chain.length
    es = set(split.left)
    es.update(chain.placed(split.v1.lo))
    es.update(shift_edges(split.right, t))
    return _tour(es, Interval(iv.lo, iv.hi + t))


# the case 2p > q -----------------------------------------------------------


def _chain_pencils(intervals, steps) -> list:
    es = []
    for a, b in zip(intervals, intervals[1:]):
        es += pencil(a, b, steps)
    return es


def _two_ladders(p, q, k, left: Interval, right: Interval) -> list:
    """Ladder copied onto ``left`` and mirrored onto ``right``."""
    lad = build_ladder((p, q), k)
    es = shift_edges(lad.edges, left.lo)
    es += reflect_edges(shift_edges(lad.edges, right.lo), right.lo, right.hi)
    return es


def base_size(pair) -> int:
    p, q, d, r, alpha = _params(pair)
    return alpha * (p + q) + (d if alpha % 2 == 0 else 2 * d)


def tour_base_2pgtq(pair, lo: int = 0) -> EdgeGraph:
    """The base tour for ``2p > q`` on ``alpha(p+q) + d`` points (``alpha``
    even) or ``alpha(p+q) + 2d`` points (``alpha`` odd), where ``d = q - p``
    and ``alpha = q // d``.  A ladder sits at each end, mirrored on the right,
    and pencils connect the loose ends through the middle."""
    p, q, d, r, alpha = _params(pair)
    if not 2 * p > q:
        raise ValueError("needs 2p > q")
    st = (p, q)
    n = base_size(st)
    iv = Interval.of_size(n, 0)
    if alpha % 2 == 0:
        k = alpha // 2
        parts = iv.split([2 * k * p] + [d] * (2 * k + 1) + [2 * k * p])
        D = parts[1:-1]
        es = _two_ladders(p, q, k, iv.first(2 * k * q), iv.last(2 * k * q))
        es += pencil(D[0].first(d - r), D[-1].last(d - r), st)
        es += pencil(D[0].last(r), D[-1].first(r), st)
    else:
        k = alpha // 2
        mid_size = (2 * k + 3) * d + 2 * r
        parts = iv.split([2 * k * p] + [d] * (2 * k) + [mid_size] + [d] * (2 * k) + [2 * k * p])
        D1 = parts[1:2 * k + 1]
        mid = parts[2 * k + 1]
        D2 = parts[2 * k + 2:4 * k + 2]
        sub = mid.split([r, d - r, r, d - r, r] + [d] * (2 * k - 1) + [r, d - r, r, d - r, r])
        K1, L1, K2, L2, K3 = sub[:5]
        O = sub[5:5 + 2 * k - 1]
        M1, N1, M2, N2, M3 = sub[5 + 2 * k - 1:]
        es = _two_ladders(p, q, k, iv.first(2 * k * q), iv.last(2 * k * q))
        es += _chain_pencils([D1[0].first(d - r), L1, N1, L2, N2, D2[-1].last(d - r)], st)
        es += _chain_pencils([D1[0].last(r), K2, M2, D2[-1].first(r)], st)
        es += pencil(D1[1].first(d - r), O[0].first(d - r), st)
        es += _chain_pencils([D1[1].last(r), K3, M3, O[0].last(r)], st)
        for j in range(3, 2 * k + 1):
            es += pencil(D1[j - 1], O[j - 2], st)
        for j in range(1, 2 * k - 1):
            es += pencil(O[j - 1], D2[j - 1], st)
        es += _chain_pencils([O[-1].first(r), K1, M1, D2[-2].first(r)], st)
        es += pencil(O[-1].last(d - r), D2[-2].last(d - r), st)
    es = shift_edges(es, lo)
    return _tour(es, iv.shift(lo))


def tour_unique_candidate(pair, lo: int = 0) -> EdgeGraph:
    """For ``2a > b``, ``alpha`` even and ``r > d/2``: a tour on
    ``2 alpha b - d`` points built from two overlapping ladders."""
    a, b, d, r, alpha = _params(pair)
    if not (2 * a > b and alpha % 2 == 0 and 2 * r > d):
        raise ValueError("needs 2a > b, alpha even and r > d/2")
    k = alpha // 2
    st = (a, b)
    iv = Interval.of_size(2 * alpha * b - d, 0)
    parts = iv.split([2 * k * a] + [d] * (4 * k - 1) + [2 * k * a])
    D = parts[1:-1]
    es = _two_ladders(a, b, k, iv.first(2 * k * b), iv.last(2 * k * b))
    for j in range(2 * k - 1):
        es += pencil(D[j].first(d - r), D[j + 2 * k].last(d - r), st)
        es += pencil(D[j].last(r), D[j + 2 * k].first(r), st)
    return _tour(shift_edges(es, lo), iv.shift(lo))


def concat_tours(pair, t1: EdgeGraph, t2: EdgeGraph) -> EdgeGraph:
    """Join tours on adjacent intervals (``t1`` on the left) by exchanging two
    forced short edges for two long edges across the seam."""
    p, q = steps_of(pair)
    if not 2 * p > q:
        raise ValueError("concatenation needs 2p > q")
    i1, i2 = interval_of(t1), interval_of(t2)
    if i2.lo != i1.hi + 1:
        raise ValueError(f"intervals {i1} and {i2} are not adjacent")
    u = i1.last(q - p).lo
    drop = {edge(u - p, u), edge(u - p + q, u + q)}
    es = set(t1.edges) | set(t2.edges)
    if not drop <= es:
        raise ConstructionError(f"forced edges {sorted(drop)} missing")
    es -= drop
    es |= {edge(u - p, u - p + q), edge(u, u + q)}
    return _tour(es, Interval(i1.lo, i2.hi))


# sizes and the general recipe -----------------------------------------------


@dataclass(frozen=True)
class Recipe:
    """How a tour on ``n`` points is put together: a base tour (``blocks``
    copies of the ``p + q`` block for ``2p < q``; the ``2p > q`` base tour
    followed by ``blocks`` concatenated ``p + q`` blocks otherwise) and then
    ``extensions`` copies of the extension."""

    n: int
    blocks: int
    extensions: int


def admissible(pair, n: int) -> bool:
    p, q = steps_of(pair)
    return not (p % 2 == 1 and q % 2 == 1 and n % 2 == 1)


def projection_recipe(pair, n: int) -> Recipe | None:
    p, q = steps_of(pair)
    if 2 * p == q:
        return Recipe(n, 0, 0) if n >= 3 else None
    if 2 * p < q:
        base, unit, min_blocks = 0, p + q, 1
    else:
        base, unit, min_blocks = base_size((p, q)), p + q, 0
    i = min_blocks
    while base + unit * i <= n:
        rest = n - base - unit * i
        if rest % (2 * q) == 0:
            return Recipe(n, i, rest // (2 * q))
        i += 1
    return None


def mu_pi_bound(pair) -> int:
    """Smallest ``N`` such that :func:`projection_tour` handles every
    admissible ``n >= N``."""
    p, q = steps_of(pair)
    if 2 * p == q:
        return 3
    # every residue is reached once n passes base + (p + q) * 2q
    top = (0 if 2 * p < q else base_size((p, q))) + (p + q) * (2 * q + 1) + 2 * q
    last_bad = 0
    for n in range(1, top + 1):
        if admissible((p, q), n) and projection_recipe((p, q), n) is None:
            last_bad = n
    bound = last_bad + 1
    while not admissible((p, q), bound):
        bound += 1
    return bound


def projection_tour(pair, n: int, lo: int = 0) -> EdgeGraph:
    """A tour of ``Pi(p, q, n)`` for every admissible ``n`` at or above
    :func:`mu_pi_bound` (and for some smaller ``n``)."""
    p, q = steps_of(pair)
    if not admissible((p, q), n):
        raise ParityViolation(f"Pi({p},{q},{n}) is bipartite with unequal sides")
    if 2 * p == q:
        return tour_pkt(n, lo)
    rec = projection_recipe((p, q), n)
    if rec is None:
        raise BelowThreshold(f"no recipe for n={n}; every n >= {mu_pi_bound((p, q))} works")
    return build_from_recipe((p, q), rec, lo)


def build_from_recipe(pair, rec: Recipe, lo: int = 0) -> EdgeGraph:
    p, q = steps_of(pair)
    if 2 * p < q:
        t = tour_pmt((p, q), rec.blocks)
    else:
        t = tour_base_2pgtq((p, q))
        for _ in range(rec.blocks):
            t = concat_tours((p, q), t, tour_pst((p, q), interval_of(t).hi + 1))
    if rec.extensions:
        E = make_extension((p, q), variant="wide" if 2 * p > q else None)
        t = extend_tour(t, find_split((p, q), t, E.width), E, rec.extensions)
    if lo:
        t = EdgeGraph(interval_of(t).shift(lo), shift_edges(t.edges, lo))
    return t
