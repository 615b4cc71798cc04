"""Closed leaper tours of whole boards.

``tour_4pq`` builds tours of the ``m x 4pq`` board (``m`` rows, ``4pq``
columns).  The rows are cut into bands of odd height.  Each band carries a
pattern, a tour of the row graph containing a chain of extensions, and
the board starts out as the product of the two-block loom with the union
of the patterns.  Three families of switches then merge the cycles:

* one comb per band for the first few bands, chosen so that the braids they
  touch connect every signature;
* inside each band, rhombi along the chain of extensions that connect the
  cycles of each braid;
* across each band boundary, two rhombi per loom cycle using short edges
  forced at the ends of the patterns.

The combs are flipped first.  The rhombi are then flipped along a spanning
tree of the cycles they touch.

``tour_even_board`` extends a tour of a board whose sides are multiples of
``2(p + q)`` (supplied by a provider) to any even board by gluing on
``4pq``-wide strips.  Each strip carries a joint edge near its corner.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

from .core import (
    Interval,
    Leaper,
    LeaperError,
    build_leaper_graph,
    canonical_cycle,
    check_board_tour,
    cycle_edges,
    decompose_degree2,
    edge,
)
from .loom import Loom, build_loom, enumerate_shafts, find_bracket, loom_stats, shaft_at, signature_of_cell
from .oracle import Budget, count_hamiltonian
from .projection import (
    BelowThreshold,
    ConstructionError,
    ParityViolation,
    Extension,
    base_size,
    chain_offsets,
    concat_tours,
    extend_tour,
    find_split,
    interval_of,
    make_extension,
    tour_base_2pgtq,
    tour_pkt,
    tour_pmt,
    tour_pst,
)
from .scarf import braid_class, scarf_edges
from .switch import (
    Switch,
    braid_rhombus_system,
    build_comb,
    build_hypergraph,
    check_edge_disjoint,
    comb_signatures_direct,
    flip_rhombus_system,
    flip_switch,
    rhombus,
    rhombus_from_opposite,
    stitch_by_rhombi,
)


class Unpartitionable(LeaperError):
    pass


class LayoutInfeasible(LeaperError):
    pass


class HeightMismatch(LeaperError):
    pass


class NoJoint(LeaperError):
    pass


class ProviderUnavailable(LeaperError):
    pass


@dataclass(frozen=True)
class BoardTour:
    """A closed tour of the board with ``height`` rows and ``width``
    columns, stored as a canonical cycle of ``(x, y)`` cells."""

    leaper: Leaper
    height: int
    width: int
    cycle: tuple
    provenance: dict = field(default_factory=dict, compare=False, hash=False)

    @classmethod
    def from_edges(cls, leaper, height, width, edges, provenance=None) -> "BoardTour":
        dec = decompose_degree2(None, edges, [(x, y) for x in range(width) for y in range(height)])
        if not dec.is_tour:
            raise ConstructionError(f"{len(dec)} cycles instead of one on {height}x{width}")
        t = cls(leaper, height, width, dec.cycle, provenance or {})
        t.verify()
        return t

    def edges(self) -> frozenset:
        return frozenset(cycle_edges(self.cycle))

    def verify(self) -> None:
        check_board_tour(self.leaper, self.height, self.width, self.cycle)

    def transpose(self) -> "BoardTour":
        cyc = canonical_cycle([(y, x) for x, y in self.cycle])
        return BoardTour(self.leaper, self.width, self.height, cyc, dict(self.provenance))


# band sizes and patterns ------------------------------------------------------


@dataclass(frozen=True)
class PatternLayout:
    """A band's pattern together with the placement of its extension
    copies.  ``copies`` lists ``(role, extension, first_row)`` where role is
    ``"F"`` (the copy at the very start, used by the joint and the band
    boundary), ``"E"`` (home of the band's comb), ``"H"`` (the run carrying
    the in-band rhombi) or ``"fill"``."""

    rows: Interval
    tour: object
    copies: tuple

    def role(self, name: str) -> list:
        return [(ext, off) for r, ext, off in self.copies if r == name]


@dataclass(frozen=True)
class LeaperProfile:
    leaper: Leaper
    eta: int
    xi: int
    n_h: int
    extension: Extension | None
    filler: Extension | None
    fixed_length: int
    part_min: int


def _roles(leaper: Leaper, n_h: int) -> list[str]:
    if leaper.is_knight:
        return []
    head = ["F", "E"] if leaper.narrow else ["E"]
    return head + ["H"] * n_h


@lru_cache(maxsize=None)
def _profile(leaper: Leaper) -> LeaperProfile:
    st = loom_stats(leaper)
    if leaper.is_knight:
        return LeaperProfile(leaper, st.eta, st.xi, 0, None, None, 0, 5)
    n_h = st.xi if leaper.p >= 2 else 0
    E = make_extension(leaper)
    if leaper.narrow:
        filler = E
    else:
        filler = make_extension(leaper, E.width, variant="wide")
    fixed = len(_roles(leaper, n_h)) * E.length
    prof = LeaperProfile(leaper, st.eta, st.xi, n_h, E, filler, fixed, 0)
    return LeaperProfile(**{**prof.__dict__, "part_min": _odd_closure(prof)})


def part_recipe(leaper: Leaper, size: int):
    """``(blocks, fillers)`` for a band of ``size`` rows, smallest first, or
    None when no band of that size can be laid out."""
    prof = _profile(leaper)
    return _part_recipe(prof, size)


def _part_recipe(prof: LeaperProfile, size: int):
    L = prof.leaper
    if size % 2 == 0:
        return None
    if L.is_knight:
        return (0, 0) if size >= 5 else None
    unit = L.p + L.q
    if L.narrow:
        base, blocks = 0, range(1, size // unit + 1, 2)
    else:
        base, blocks = base_size(L), range(0, size // unit + 1, 2)
    flen = prof.filler.length
    for i in blocks:
        rest = size - base - unit * i - prof.fixed_length
        if rest >= 0 and rest % flen == 0:
            return (i, rest // flen)
    return None


def _odd_closure(prof: LeaperProfile) -> int:
    L = prof.leaper
    base = 0 if L.narrow else base_size(L)
    top = base + prof.fixed_length + 2 * (L.p + L.q) * prof.filler.length + 4 * L.q
    last_bad = -1
    for s in range(1, top + 1, 2):
        if _part_recipe(prof, s) is None:
            last_bad = s
    return last_bad + 2


def build_pattern(leaper: Leaper, rows: Interval) -> PatternLayout:
    """Tour of the row graph on ``rows`` with its extension copies laid out
    in role order (starting at the left end) followed by fillers."""
    prof = _profile(leaper)
    rec = _part_recipe(prof, rows.size)
    if rec is None:
        raise LayoutInfeasible(f"no band layout of height {rows.size} for {leaper}")
    if leaper.is_knight:
        return PatternLayout(rows, tour_pkt(rows.size, rows.lo), ())
    blocks, fillers = rec
    if leaper.narrow:
        t = tour_pmt(leaper, blocks, rows.lo)
    else:
        t = tour_base_2pgtq(leaper, rows.lo)
        for _ in range(blocks):
            t = concat_tours(leaper, t, tour_pst(leaper, interval_of(t).hi + 1))
    E = prof.extension
    split = find_split(leaper, t, E.width, "left")
    roles = _roles(leaper, prof.n_h) + ["fill"] * fillers
    parts = [E if r != "fill" else prof.filler for r in roles]
    t = extend_tour(t, split, parts)
    if interval_of(t) != rows:
        raise ConstructionError(f"pattern covers {interval_of(t)}, wanted {rows}")
    offs = chain_offsets(parts)
    copies = tuple((r, x, split.v1.lo + o) for r, x, o in zip(roles, parts, offs))
    return PatternLayout(rows, t, copies)


def partition_height(m: int, part_min: int, ell: int = 1) -> list[int]:
    """Cut ``m`` into the fewest odd parts, at least ``ell`` of them, each at
    least ``part_min``.  All parts but the last have the minimum size."""
    if part_min % 2 == 0:
        raise ValueError("part_min must be odd")
    k = max(ell, 1)
    if k % 2 != m % 2:
        k += 1
    if k * part_min > m:
        raise Unpartitionable(f"{m} cannot be cut into {k} odd parts of size >= {part_min}")
    return [part_min] * (k - 1) + [m - (k - 1) * part_min]


# signatures and comb choice ---------------------------------------------------


@dataclass(frozen=True)
class CombPlan:
    """Which combs go into the first bands: ``(parity, shaft start)`` per
    band, and the signature set each must touch."""

    keys: tuple
    signature_sets: tuple

    @property
    def ell(self) -> int:
        return len(self.keys)


def _mixed_in(layout: PatternLayout, role: str, parity: int | None = None) -> list[int]:
    out = []
    for ext, off in layout.role(role):
        for v in ext.mixed_vertices():
            if parity is None or (v + off) % 2 == parity:
                out.append(v + off)
    return out


@lru_cache(maxsize=None)
def comb_plan(leaper: Leaper) -> CombPlan:
    """Choose the combs.  Signature sets are measured on an actual band (its
    scarf cycles), and a minimal connected spanning family is selected."""
    loom = build_loom(leaper, 2)
    prof = _profile(leaper)
    if leaper.is_knight:
        return CombPlan(((None, 1),), (None,))
    layout = build_pattern(leaper, Interval(0, prof.part_min - 1))
    adj = {y: layout.tour.neighbours(y) for y in layout.tour.vertices}
    es = scarf_edges(loom, adj, layout.rows)
    dec = decompose_degree2(None, es)
    cyc_sig = {}
    for i, c in enumerate(dec.cycles):
        x, y = c[0]
        cyc_sig[i] = signature_of_cell(loom, x, y)
    if leaper.p == 1:
        # the two shortcut shafts; their signatures are checked per board
        q = leaper.q
        return CombPlan(((None, 1), (None, 2 * q - 2)), (None, None))
    psi = {}
    for d in (0, 1):
        vs = _mixed_in(layout, "E", d)
        if not vs:
            continue
        v = vs[0]
        for s in enumerate_shafts(leaper):
            comb = build_comb(loom, adj, v, s)
            flip_switch(es, comb, dec)  # validates the switch
            sig = frozenset(cyc_sig[dec.cycle_of(e[0])] for e in comb.in_edges)
            if sig != comb_signatures_direct(loom, v, s):
                raise ConstructionError("comb signatures depend on more than parity and shaft")
            psi[(d, s.start)] = sig
    h = build_hypergraph(loom, psi)
    return CombPlan(tuple(h.selection), tuple(psi[k] for k in h.selection))


# thresholds ------------------------------------------------------------------


@dataclass(frozen=True)
class Thresholds:
    mode: str
    m_I: int
    m_II: int
    m_III: int
    eta: int
    xi: int
    ell: int
    part_min: int


def _partitionable(m: int, part_min: int, ell: int) -> bool:
    try:
        partition_height(m, part_min, ell)
        return True
    except Unpartitionable:
        return False


def _joint_offset(leaper: Leaper, m: int) -> int:
    """Largest ``m' <= m`` with ``m'`` a multiple of ``2(p + q)`` and
    ``m' = m`` modulo ``4pq``; 0 if there is none."""
    p, q = leaper.p, leaper.q
    for mp in range(m - m % 2, 0, -2):
        if mp % (2 * (p + q)) == 0 and (m - mp) % (4 * p * q) == 0:
            return mp
    return 0


def thresholds(leaper: Leaper, mode: str = "computed") -> Thresholds:
    """Board heights beyond which the constructions are guaranteed.

    ``formula`` gives the closed-form bounds; ``computed`` the exact values
    for this implementation's band layouts: ``m_I + 1`` is the smallest band
    height from which every odd height can be laid out, ``m_II`` the
    smallest board height from which every height works for ``tour_4pq``,
    and ``m_III`` the smallest even size from which ``tour_even_board``
    works (given a provider).
    """
    st = loom_stats(leaper)
    p, q = leaper.p, leaper.q
    prof = _profile(leaper)
    ell = comb_plan(leaper).ell if not leaper.is_knight else 1
    if mode == "formula":
        if leaper.is_knight:
            m1 = 4
        else:
            ext_len = 14 if leaper.is_antelope else 2 * q
            m1 = 6 * q * q + (st.xi + 2) * ext_len
        m2 = 4 * st.eta * (m1 + 1)
        m3 = m2 + 4 * p * q * (p + q)
        return Thresholds(mode, m1, m2, m3, st.eta, st.xi, ell, prof.part_min)
    if mode != "computed":
        raise ValueError("mode must be 'computed' or 'formula'")
    pm = prof.part_min
    top = (ell + 2) * pm + 2
    last_bad = 0
    for m in range(1, top + 1):
        if not _partitionable(m, pm, ell):
            last_bad = m
    m2 = last_bad + 1
    top3 = m2 + 8 * p * q * (p + q)
    last_bad = 0
    for m in range(2, top3 + 1, 2):
        mp = _joint_offset(leaper, m)
        if mp < m2 and not (mp > 0 and _partitionable(mp, pm, ell)):
            last_bad = m
        elif m < m2:
            last_bad = m
    return Thresholds(mode, pm - 1, m2, last_bad + 2, st.eta, st.xi, ell, pm)


# the m x 4pq construction -------------------------------------------------


def _designated_rows(layout: PatternLayout) -> list[tuple]:
    out = []
    for ext, off in layout.role("H"):
        e1, e2 = ext.designated
        out.append((e1[0] + off, e1[1] + off, e2[0] + off, e2[1] + off))
    return out


def _boundary_rhombi(loom: Loom, leaper: Leaper, upper: Interval) -> list[Switch]:
    p, q = leaper.p, leaper.q
    w = q - 1 if 3 * p < q else (p + q) // 2
    w1 = upper.lo + w
    w2, w3, w4 = w1 - p, w1 - p - q, w1 - q
    out = []
    for cyc in loom.cycles.cycles:
        u1, u2, u3, u4 = find_bracket(loom, cyc, "long")
        out.append(rhombus(((u1, w1), (u2, w2), (u3, w3), (u4, w4))))
        out.append(rhombus(((u1, w3), (u2, w4), (u3, w1), (u4, w2))))
    return out


def _joint_cells(leaper: Leaper, loom: Loom, pattern_edges) -> tuple:
    p, q = leaper.p, leaper.q
    us = [u for u in range(q - p, q) if loom.short_partner(u) == u - p]
    vs = [v for v in range(p, 2 * p) if edge(v, v + q) in pattern_edges]
    if not us or not vs:
        raise NoJoint("no joint edge available in the first band")
    u, v = us[0], vs[0]
    return ((u, v), (u - p, v + q))


@dataclass
class _Build:
    edges: frozenset
    parts: list
    layouts: list
    combs: list
    rhombi: list
    joint: tuple | None


def _assemble(leaper: Leaper, m: int) -> _Build:
    prof = _profile(leaper)
    plan = comb_plan(leaper)
    ell = 1 if leaper.is_knight else plan.ell
    try:
        parts = partition_height(m, prof.part_min, ell)
    except Unpartitionable as exc:
        raise BelowThreshold(str(exc)) from exc
    loom = build_loom(leaper, 2)
    width = loom.width
    layouts, lo = [], 0
    for size in parts:
        layouts.append(build_pattern(leaper, Interval.of_size(size, lo)))
        lo += size
    adj = {}
    pattern_edges = set()
    for lay in layouts:
        for y in lay.tour.vertices:
            adj[y] = lay.tour.neighbours(y)
        pattern_edges |= lay.tour.edges
    G = frozenset(scarf_edges(loom, adj, range(m)))
    dec = decompose_degree2(None, G, [(x, y) for x in range(width) for y in range(m)])

    combs, rhombi = [], []
    if leaper.is_knight:
        sh = shaft_at(leaper, 1)
        for lay in layouts:
            a = lay.rows.lo
            combs.append(build_comb(loom, adj, a, sh))
            rhombi.append(rhombus_from_opposite(leaper, G, (2, a), (5, a + 3)))
        for lay, nxt in zip(layouts, layouts[1:]):
            b = lay.rows.hi
            rhombi.append(rhombus_from_opposite(leaper, G, (1, b), (2, nxt.rows.lo)))
    else:
        if leaper.p == 1:
            sigs = []
            for (_, start), lay in zip(plan.keys, layouts):
                v = _mixed_in(lay, "E")[0]
                sh = shaft_at(leaper, start)
                combs.append(build_comb(loom, adj, v, sh))
                sigs.append(comb_signatures_direct(loom, v, sh))
            build_hypergraph(loom, dict(enumerate(sigs)), fixed=list(range(len(sigs))))
        else:
            for (d, start), want, lay in zip(plan.keys, plan.signature_sets, layouts):
                cands = _mixed_in(lay, "E", d)
                if not cands:
                    raise ConstructionError(f"no mixed row of parity {d} in the comb's extension")
                v = cands[0]
                sh = shaft_at(leaper, start)
                comb = build_comb(loom, adj, v, sh)
                got = frozenset(signature_of_cell(loom, *e[0]) for e in comb.in_edges)
                if got != want:
                    raise ConstructionError("comb touches unexpected braids")
                combs.append(comb)
            groups = {}
            band_of = {}
            for i, lay in enumerate(layouts):
                for y in lay.rows:
                    band_of[y] = i
            for ci, cyc in enumerate(dec.cycles):
                x, y = cyc[0]
                groups.setdefault((band_of[y],) + braid_class(loom, x, y), []).append(ci)
            for (band, lc, cls), members in sorted(groups.items()):
                rhombi += braid_rhombus_system(loom, G, dec, lc, cls, _designated_rows(layouts[band]), members)
        for lay, nxt in zip(layouts, layouts[1:]):
            rhombi += _boundary_rhombi(loom, leaper, nxt.rows)
    check_edge_disjoint(combs + rhombi)

    edges = G
    for c in combs:
        edges = flip_switch(edges, c, dec, leaper)
    dec2 = decompose_degree2(None, edges)
    rep = flip_rhombus_system(edges, rhombi, dec2, require_connected=False)
    joint = _joint_cells(leaper, loom, layouts[0].tour.edges)
    return _Build(rep.edges, parts, layouts, combs, rep.flipped, joint)


def tour_4pq(leaper: Leaper, m: int) -> BoardTour:
    """Closed tour of the board with ``m`` rows and ``4pq`` columns."""
    b = _assemble(leaper, m)
    width = 4 * leaper.p * leaper.q
    prov = {
        "construction": "tour_4pq",
        "bands": b.parts,
        "combs": len(b.combs),
        "rhombi_flipped": len(b.rhombi),
    }
    return BoardTour.from_edges(leaper, m, width, b.edges, prov)


def tour_4pq_with_joint(leaper: Leaper, m: int) -> tuple[BoardTour, tuple]:
    """Like :func:`tour_4pq`, also returning a joint: an edge
    ``(u, v)-(u - p, v + q)`` of the tour with ``q - p <= u < q`` and
    ``p <= v < 2p``."""
    b = _assemble(leaper, m)
    width = 4 * leaper.p * leaper.q
    t = BoardTour.from_edges(leaper, m, width, b.edges, {"construction": "tour_4pq", "bands": b.parts})
    if edge(*b.joint) not in b.edges:
        raise NoJoint(f"joint {b.joint} was used by a switch")
    return t, b.joint


# stitching ----------------------------------------------------------------


def stitch_joint(left: BoardTour, right: BoardTour, joint) -> BoardTour:
    """Place ``right`` to the right of ``left`` and merge the two tours with
    the rhombus through ``right``'s joint edge and the forced edge at
    ``left``'s bottom-right corner."""
    if left.height != right.height:
        raise HeightMismatch(f"heights {left.height} and {right.height} differ")
    L = left.leaper
    p, q = L.p, L.q
    (u, v), other = joint
    if other != (u - p, v + q) or not (q - p <= u < q and p <= v < 2 * p):
        raise NoJoint(f"{joint} is not a joint")
    if edge((u, v), other) not in right.edges():
        raise NoJoint(f"{joint} is not an edge of the right tour")
    X = left.width
    es = set(left.edges())
    es |= {edge((a + X, b), (c + X, d)) for (a, b), (c, d) in right.edges()}
    cells = ((X + u, v), (X + u - p, v + q), (X + u - p - q, v - p + q), (X + u - q, v - p))
    s = rhombus(cells)
    if s.in_edges[1] not in es:
        raise ConstructionError("the corner edge of the left tour is missing")
    new = flip_switch(es, s, leaper=L)
    prov = {"construction": "stitch", "left": left.provenance, "right_width": right.width}
    return BoardTour.from_edges(L, left.height, left.width + right.width, new, prov)


class Provider:
    """Source of tours for boards whose sides are multiples of ``2(p+q)``."""

    def block(self, leaper: Leaper, height: int, width: int) -> BoardTour | None:
        raise NotImplementedError


class FileProvider(Provider):
    """Reads tour files (the JSON format used by the command line) from a
    directory."""

    def __init__(self, directory):
        self.directory = Path(directory)

    def block(self, leaper, height, width):
        from .cli import read_tour_file

        if not self.directory.is_dir():
            return None
        for path in sorted(self.directory.glob("*.json")):
            try:
                t = read_tour_file(path)
            except (ValueError, KeyError, json.JSONDecodeError):
                continue
            if not isinstance(t, BoardTour) or t.leaper != leaper:
                continue
            if (t.height, t.width) == (height, width):
                return t
            if (t.width, t.height) == (height, width):
                return t.transpose()
        return None


class OracleProvider(Provider):
    """Finds tours of the ``2(p+q)``-square by exhaustive search, tiles the
    board with copies and merges them with edge-disjoint rhombi."""

    def __init__(self, budget: Budget | None = None, tiles_to_try: int = 8):
        self.budget = budget or Budget(max_nodes=2_000_000)
        self.tiles_to_try = tiles_to_try
        self._tiles = {}

    def _tile_tours(self, leaper):
        if leaper not in self._tiles:
            side = 2 * (leaper.p + leaper.q)
            g = build_leaper_graph(leaper, side, side)
            res = count_hamiltonian(g, limit=self.tiles_to_try, budget=self.budget)
            self._tiles[leaper] = res.cycles
        return self._tiles[leaper]

    def block(self, leaper, height, width):
        side = 2 * (leaper.p + leaper.q)
        if height % side or width % side or height <= 0 or width <= 0:
            return None
        for tile in self._tile_tours(leaper):
            es = set()
            for bx in range(0, width, side):
                for by in range(0, height, side):
                    for (a, b), (c, d) in cycle_edges(tile):
                        es.add(edge((a + bx, b + by), (c + bx, d + by)))
            merged = stitch_by_rhombi(leaper, es, height, width)
            if merged is not None:
                return BoardTour.from_edges(leaper, height, width, merged,
                                            {"construction": "tiled", "tile": side})
        return None


def tour_even_board(leaper: Leaper, m: int, n: int, provider: Provider | None = None) -> BoardTour:
    """Closed tour of the board with ``m`` rows and ``n`` columns, both
    even and large enough."""
    if m % 2 or n % 2:
        raise ParityViolation("both sides must be even")
    provider = provider or OracleProvider()
    mp, np_ = _joint_offset(leaper, m), _joint_offset(leaper, n)
    if mp == 0 or np_ == 0:
        raise BelowThreshold(f"{m}x{n} is too small")
    block = provider.block(leaper, mp, np_)
    if block is None:
        raise ProviderUnavailable(f"no tour of the {mp}x{np_} block")
    strip = 4 * leaper.p * leaper.q
    t = block
    if n > np_:
        right, joint = _joint_strip(leaper, mp)
        for _ in range((n - np_) // strip):
            t = stitch_joint(t, right, joint)
    if m > mp:
        t = t.transpose()
        right, joint = _joint_strip(leaper, n)
        for _ in range((m - mp) // strip):
            t = stitch_joint(t, right, joint)
        t = t.transpose()
    t = BoardTour(leaper, m, n, t.cycle, {"construction": "tour_even_board", "block": [mp, np_]})
    t.verify()
    return t


@lru_cache(maxsize=64)
def _joint_strip(leaper: Leaper, height: int):
    try:
        return tour_4pq_with_joint(leaper, height)
    except (Unpartitionable, LayoutInfeasible) as exc:
        raise BelowThreshold(str(exc)) from exc
