"""Exhaustive search: Hamiltonian cycles, 2-factors and the small-value
sweeps built on top of them.

The solver decides every edge in or out.  After each decision it
propagates two rules to a fixed point: a vertex with exactly two usable
edges takes both, and a vertex that already has two chosen edges drops the
rest.  For Hamiltonian cycles it also refuses any edge that would close a
cycle early and prunes states where the usable edges no longer connect the
graph.  Branching picks the open vertex with fewest usable edges (smallest
index on ties) and tries its smallest undecided neighbour first, in then
out.  Enumeration is therefore deterministic.
"""

from __future__ import annotations

import json
import os
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from .core import (
    CoprimePair,
    EdgeGraph,
    Interval,
    Leaper,
    build_leaper_graph,
    build_projection_graph,
    canonical_cycle,
    decompose_degree2,
)

FOUND = "found"
EXHAUSTED = "exhausted"
INDETERMINATE = "indeterminate"

DEFAULT_BUDGET_NODES = 50_000_000


def budget_from_env(default: int | None = DEFAULT_BUDGET_NODES) -> int | None:
    raw = os.environ.get("LEAPER_BUDGET_NODES")
    if raw is None or raw == "":
        return default
    return int(raw)


@dataclass
class Budget:
    max_nodes: int | None = None
    max_seconds: float | None = None

    @classmethod
    def default(cls) -> "Budget":
        return cls(max_nodes=budget_from_env())


class _Stop(Exception):
    pass


class _Solver:
    def __init__(self, graph: EdgeGraph, hamiltonian: bool, budget: Budget | None):
        self.graph = graph
        self.ham = hamiltonian
        self.budget = budget or Budget()
        verts = graph.vertices
        self.N = len(verts)
        idx = {v: i for i, v in enumerate(verts)}
        es = sorted((idx[u], idx[v]) for u, v in graph.edges)
        es = [(min(a, b), max(a, b)) for a, b in es]
        self.eu = [a for a, _ in es]
        self.ev = [b for _, b in es]
        inc = [[] for _ in range(self.N)]
        for e, (a, b) in enumerate(es):
            inc[a].append(e)
            inc[b].append(e)
        # smallest neighbour first
        for v in range(self.N):
            inc[v].sort(key=lambda e, v=v: self.eu[e] + self.ev[e] - v)
        self.inc = inc
        self.eid = {(a, b): e for e, (a, b) in enumerate(es)}
        self.status = [0] * len(es)
        self.din = [0] * self.N
        self.avail = [len(inc[v]) for v in range(self.N)]
        self.endp = list(range(self.N))
        self.flen = [0] * self.N
        self.n_in = 0
        self.trail = []
        self.nodes = 0
        self.start = time.monotonic()
        self.solutions = []

    # primitive moves, each recorded on the trail -----------------------------

    def _include(self, e, queue) -> bool:
        u, v = self.eu[e], self.ev[e]
        if self.din[u] >= 2 or self.din[v] >= 2:
            return False
        closing = False
        if self.ham:
            if self.endp[u] == v and u != v and self.din[u] <= 1 and self.din[v] <= 1:
                if self.flen[u] + 1 != self.N:
                    return False
                closing = True
        self.status[e] = 1
        self.din[u] += 1
        self.din[v] += 1
        self.n_in += 1
        self.trail.append(("i", e))
        if self.ham and not closing:
            a, b = self.endp[u], self.endp[v]
            length = self.flen[u] + self.flen[v] + 1
            for x in {a, b}:
                self.trail.append(("f", x, self.endp[x], self.flen[x]))
            self.endp[a], self.endp[b] = b, a
            self.flen[a] = self.flen[b] = length
            if length < self.N - 1:
                key = (a, b) if a < b else (b, a)
                ce = self.eid.get(key)
                if ce is not None and self.status[ce] == 0:
                    if not self._exclude(ce, queue):
                        return False
        queue.append(u)
        queue.append(v)
        return True

    def _exclude(self, e, queue) -> bool:
        u, v = self.eu[e], self.ev[e]
        self.status[e] = -1
        self.avail[u] -= 1
        self.avail[v] -= 1
        self.trail.append(("x", e))
        queue.append(u)
        queue.append(v)
        return self.avail[u] >= 2 and self.avail[v] >= 2

    def _undo(self, mark):
        trail = self.trail
        while len(trail) > mark:
            rec = trail.pop()
            kind = rec[0]
            if kind == "i":
                e = rec[1]
                self.status[e] = 0
                self.din[self.eu[e]] -= 1
                self.din[self.ev[e]] -= 1
                self.n_in -= 1
            elif kind == "x":
                e = rec[1]
                self.status[e] = 0
                self.avail[self.eu[e]] += 1
                self.avail[self.ev[e]] += 1
            else:
                _, x, ep, fl = rec
                self.endp[x] = ep
                self.flen[x] = fl

    def _propagate(self, queue) -> bool:
        status, din, avail, inc = self.status, self.din, self.avail, self.inc
        while queue:
            v = queue.pop()
            if avail[v] < 2:
                return False
            if din[v] == 2 and avail[v] > 2:
                for e in inc[v]:
                    if status[e] == 0 and not self._exclude(e, queue):
                        return False
            elif avail[v] == 2 and din[v] < 2:
                for e in inc[v]:
                    if status[e] == 0 and not self._include(e, queue):
                        return False
        return True

    def _connected(self) -> bool:
        seen = [False] * self.N
        seen[0] = True
        stack = [0]
        count = 1
        status, inc, eu, ev = self.status, self.inc, self.eu, self.ev
        while stack:
            v = stack.pop()
            for e in inc[v]:
                if status[e] >= 0:
                    w = eu[e] + ev[e] - v
                    if not seen[w]:
                        seen[w] = True
                        count += 1
                        stack.append(w)
        return count == self.N

    def _complete(self) -> bool:
        if self.ham:
            return self.n_in == self.N
        return all(d == 2 for d in self.din)

    def _tick(self):
        self.nodes += 1
        b = self.budget
        if b.max_nodes is not None and self.nodes > b.max_nodes:
            raise _Stop
        if b.max_seconds is not None and self.nodes % 1024 == 0:
            if time.monotonic() - self.start > b.max_seconds:
                raise _Stop

    def _branch_edge(self):
        best, best_v = None, -1
        din, avail = self.din, self.avail
        for v in range(self.N):
            if din[v] < 2 and (best is None or avail[v] < best):
                best, best_v = avail[v], v
                if best <= 3:
                    break
        if best_v < 0:
            return None
        for e in self.inc[best_v]:
            if self.status[e] == 0:
                return e
        return None

    def _search(self, limit):
        self._tick()
        if self._complete():
            self.solutions.append([e for e, s in enumerate(self.status) if s == 1])
            return len(self.solutions) >= limit
        e = self._branch_edge()
        if e is None:
            return False
        for choice in (1, -1):
            mark = len(self.trail)
            queue = []
            ok = self._include(e, queue) if choice == 1 else self._exclude(e, queue)
            ok = ok and self._propagate(queue)
            if ok and (not self.ham or self._connected()):
                if self._search(limit):
                    self._undo(mark)
                    return True
            self._undo(mark)
        return False

    def run(self, limit) -> str:
        if self.N == 0:
            return EXHAUSTED
        queue = list(range(self.N))
        ok = self._propagate(queue)
        if ok and self.ham:
            ok = self._connected() and self.N >= 3
        if not ok:
            return EXHAUSTED
        old = sys.getrecursionlimit()
        sys.setrecursionlimit(max(old, 10 * len(self.eu) + 1000))
        try:
            stopped = self._search(limit)
        except _Stop:
            return INDETERMINATE
        finally:
            sys.setrecursionlimit(old)
        if stopped or self.solutions:
            return FOUND if len(self.solutions) >= limit else EXHAUSTED
        return EXHAUSTED

    def edge_sets(self):
        verts = self.graph.vertices
        out = []
        for sol in self.solutions:
            out.append(frozenset((verts[self.eu[e]], verts[self.ev[e]]) for e in sol))
        return out


@dataclass
class HamiltonianResult:
    verdict: str
    cycle: tuple | None
    node_count: int
    seconds: float

    @property
    def found(self) -> bool:
        return self.verdict == FOUND


def find_hamiltonian(graph: EdgeGraph, budget: Budget | None = None) -> HamiltonianResult:
    """Search for one Hamiltonian cycle."""
    budget = budget or Budget.default()
    s = _Solver(graph, True, budget)
    verdict = s.run(1)
    cycle = None
    if s.solutions:
        dec = decompose_degree2(graph, s.edge_sets()[0])
        cycle = dec.cycle
        verdict = FOUND
    elif verdict == FOUND:
        verdict = EXHAUSTED
    return HamiltonianResult(verdict, cycle, s.nodes, time.monotonic() - s.start)


@dataclass
class CountResult:
    count: int
    complete: bool
    node_count: int
    cycles: list = field(default_factory=list)

    @property
    def verdict(self) -> str:
        return EXHAUSTED if self.complete else INDETERMINATE


def count_hamiltonian(graph: EdgeGraph, limit: int | None = None, budget: Budget | None = None) -> CountResult:
    """Count Hamiltonian cycles, stopping early once ``limit`` are found.

    ``complete`` is True when the count is exact (the search finished, or
    the limit was reached, in which case the count is a lower bound equal to
    the limit)."""
    budget = budget or Budget.default()
    s = _Solver(graph, True, budget)
    verdict = s.run(limit if limit is not None else float("inf"))
    cycles = [decompose_degree2(graph, es).cycle for es in s.edge_sets()]
    return CountResult(len(cycles), verdict != INDETERMINATE, s.nodes, cycles)


def enumerate_two_factors(graph: EdgeGraph, limit: int | None = None, budget: Budget | None = None) -> CountResult:
    """All spanning 2-regular subgraphs, each given as a list of cycles."""
    budget = budget or Budget.default()
    s = _Solver(graph, False, budget)
    verdict = s.run(limit if limit is not None else float("inf"))
    out = [decompose_degree2(graph, es).cycles for es in s.edge_sets()]
    return CountResult(len(out), verdict != INDETERMINATE, s.nodes, out)


def enumerate_pseudotours(leaper: Leaper, height: int, width: int, limit: int | None = None,
                          budget: Budget | None = None) -> CountResult:
    """Pseudotours (spanning unions of disjoint cycles) of the leaper graph
    on the board with ``height`` rows and ``width`` columns."""
    return enumerate_two_factors(build_leaper_graph(leaper, height, width), limit, budget)


# sweeps --------------------------------------------------------------------


def _pair(pair) -> CoprimePair:
    if isinstance(pair, CoprimePair):
        return pair
    if isinstance(pair, Leaper):
        return pair.pair
    return CoprimePair(*pair)


def _admissible(pair: CoprimePair, n: int) -> bool:
    return not (pair.both_odd and n % 2 == 1)


class RecordLog:
    """Line-delimited JSON records ``{pair, n, verdict, node_count,
    witness?}``; a run pointed at an existing log skips every ``(pair, n)``
    that already has a final verdict."""

    def __init__(self, path: str | Path | None = None, quantity: str = ""):
        self.path = Path(path) if path else None
        self.quantity = quantity
        self.done: dict = {}
        if self.path and self.path.exists():
            for line in self.path.read_text().splitlines():
                if not line.strip():
                    continue
                rec = json.loads(line)
                if rec.get("quantity", quantity) != quantity:
                    continue
                if rec["verdict"] in (FOUND, EXHAUSTED, "count"):
                    self.done[(tuple(rec["pair"]), rec["n"])] = rec

    def get(self, pair: CoprimePair, n: int):
        return self.done.get(((pair.a, pair.b), n))

    def add(self, pair: CoprimePair, n: int, verdict: str, node_count: int, witness=None, **extra):
        rec = {"quantity": self.quantity, "pair": [pair.a, pair.b], "n": n,
               "verdict": verdict, "node_count": node_count}
        if witness is not None:
            rec["witness"] = list(witness)
        rec.update(extra)
        if verdict in (FOUND, EXHAUSTED, "count"):
            self.done[((pair.a, pair.b), n)] = rec
        if self.path:
            with self.path.open("a") as fh:
                fh.write(json.dumps(rec) + "\n")
        return rec


@dataclass
class SearchResult:
    """Outcome of a sweep.  ``value`` is None when the sweep ran out of room
    (``status == "unknown"``, meaning the value exceeds ``n_max``) or out of
    budget (``status == "indeterminate"``)."""

    quantity: str
    pair: tuple
    value: int | None
    status: str
    n_max: int
    witnesses: list = field(default_factory=list)
    records: list = field(default_factory=list)
    bounds: tuple | None = None

    @property
    def exact(self) -> bool:
        return self.status == "exact"

    def describe(self) -> str:
        if self.value is not None:
            return str(self.value)
        if self.bounds is not None:
            lo, hi = self.bounds
            return f"[{lo};{'?' if hi is None else hi}]"
        if self.status == "unknown":
            return f"Unknown(>{self.n_max})"
        return "Indeterminate"


def _ham_at(pair: CoprimePair, n: int, budget, log: RecordLog):
    rec = log.get(pair, n)
    if rec is not None and rec["verdict"] in (FOUND, EXHAUSTED):
        return rec
    if not _admissible(pair, n):
        return log.add(pair, n, EXHAUSTED, 0, certificate="parity")
    g = build_projection_graph((pair.a, pair.b), Interval.of_size(n))
    res = find_hamiltonian(g, budget)
    return log.add(pair, n, res.verdict, res.node_count, res.cycle)


def search_mu_div(pair, n_max: int, budget: Budget | None = None, log: str | Path | None = None) -> SearchResult:
    """Smallest ``n`` not divisible by ``a + b`` with ``Pi(a, b, n)``
    Hamiltonian."""
    pair = _pair(pair)
    budget = budget or Budget.default()
    book = RecordLog(log, "mu_div")
    records = []
    for n in range(pair.a + pair.b + 1, n_max + 1):
        if n % (pair.a + pair.b) == 0:
            continue
        rec = _ham_at(pair, n, budget, book)
        records.append(rec)
        if rec["verdict"] == FOUND:
            return SearchResult("mu_div", (pair.a, pair.b), n, "exact", n_max, [rec.get("witness")], records)
        if rec["verdict"] == INDETERMINATE:
            return SearchResult("mu_div", (pair.a, pair.b), None, INDETERMINATE, n_max, [], records)
    return SearchResult("mu_div", (pair.a, pair.b), None, "unknown", n_max, [], records)


def search_mu_var(pair, n_max: int, budget: Budget | None = None, log: str | Path | None = None) -> SearchResult:
    """Smallest ``n`` such that ``Pi(a, b, n)`` has two or more tours."""
    pair = _pair(pair)
    budget = budget or Budget.default()
    book = RecordLog(log, "mu_var")
    records = []
    for n in range(3, n_max + 1):
        rec = book.get(pair, n)
        if rec is None:
            if not _admissible(pair, n):
                rec = book.add(pair, n, "count", 0, count=0, certificate="parity")
            else:
                g = build_projection_graph((pair.a, pair.b), Interval.of_size(n))
                res = count_hamiltonian(g, limit=2, budget=budget)
                if not res.complete:
                    rec = book.add(pair, n, INDETERMINATE, res.node_count)
                else:
                    wit = [list(c) for c in res.cycles] if res.count >= 2 else None
                    rec = book.add(pair, n, "count", res.node_count, count=res.count, tours=wit)
        records.append(rec)
        if rec["verdict"] == INDETERMINATE:
            return SearchResult("mu_var", (pair.a, pair.b), None, INDETERMINATE, n_max, [], records)
        if rec["count"] >= 2:
            return SearchResult("mu_var", (pair.a, pair.b), n, "exact", n_max, rec.get("tours") or [], records)
    return SearchResult("mu_var", (pair.a, pair.b), None, "unknown", n_max, [], records)


def search_mu_pi(pair, n_max: int, budget: Budget | None = None, log: str | Path | None = None) -> SearchResult:
    """Smallest ``N`` with ``Pi(a, b, n)`` Hamiltonian for every admissible
    ``n >= N``.

    The value is exact once a run of Hamiltonian admissible ``n`` spanning
    ``2b`` consecutive integers has been seen: tours of length ``n`` yield
    tours of length ``n + 2b`` (``2a < b``) and ``n + a + b`` (``2a > b``),
    so nothing beyond the run can fail.
    """
    pair = _pair(pair)
    a, b = pair.a, pair.b
    budget = budget or Budget.default()
    book = RecordLog(log, "mu_pi")
    records = []
    if (a, b) == (1, 2):
        window = 3
    else:
        window = 2 * b
    last_bad = 0
    for n in range(1, n_max + 1):
        if not _admissible(pair, n):
            continue
        rec = _ham_at(pair, n, budget, book)
        records.append(rec)
        if rec["verdict"] == INDETERMINATE:
            return SearchResult("mu_pi", (a, b), None, INDETERMINATE, n_max, [], records)
        if rec["verdict"] != FOUND:
            last_bad = n
        elif n - last_bad >= window:
            value = last_bad + 1
            while not _admissible(pair, value):
                value += 1
            return SearchResult("mu_pi", (a, b), value, "exact", n_max, [], records)
    return SearchResult("mu_pi", (a, b), None, "unknown", n_max, [], records)


def probe_side(leaper: Leaper, w_max: int, budget: Budget | None = None,
               log: str | Path | None = None) -> SearchResult:
    """Bounds on the smallest height of a board the leaper tours.

    The lower bound ``p + q`` is backed by a degree check: every board of
    smaller height and width up to ``w_max`` has a cell with fewer than two
    neighbours.  The upper bound is ``p + q`` once a tour of height ``p + q``
    turns up for some width up to ``w_max`` (that tour is the witness);
    otherwise it stays open.  The value is never reported as exact because
    only finitely many widths are examined.
    """
    budget = budget or Budget.default()
    book = RecordLog(log, "mu_side")
    h = leaper.p + leaper.q
    pair = leaper.pair
    lower = h
    for m in range(1, h):
        for w in range(1, w_max + 1):
            g = build_leaper_graph(leaper, m, w)
            if min(g.degree(v) for v in g.vertices) >= 2:
                lower = min(lower, m)
    records, witness, status = [], None, "unknown"
    for w in range(h, w_max + 1):
        if (h * w) % 2:
            continue
        rec = book.get(pair, w)
        if rec is None:
            res = find_hamiltonian(build_leaper_graph(leaper, h, w), budget)
            cyc = [list(c) for c in res.cycle] if res.cycle else None
            rec = book.add(pair, w, res.verdict, res.node_count, cyc, height=h)
        records.append(rec)
        if rec["verdict"] == FOUND:
            witness, status = rec.get("witness"), "bounds"
            break
        if rec["verdict"] == INDETERMINATE:
            status = INDETERMINATE
            break
    upper = h if witness is not None else None
    return SearchResult("mu_side", (leaper.p, leaper.q), None, status, w_max,
                        [witness] if witness else [], records, (lower, upper))


def check_unique_tour_put(pair, budget: Budget | None = None) -> dict:
    """Build the candidate tour on ``2 alpha b - d`` points and count all
    tours of that graph (stopping at two)."""
    from .projection import tour_unique_candidate

    pair = _pair(pair)
    t = tour_unique_candidate((pair.a, pair.b))
    n = len(t.vertices)
    g = build_projection_graph((pair.a, pair.b), Interval.of_size(n))
    dec = decompose_degree2(g, t.edges)
    res = count_hamiltonian(g, limit=2, budget=budget or Budget.default())
    unique = res.complete and res.count == 1
    return {
        "pair": (pair.a, pair.b),
        "n": n,
        "construction_valid": dec.is_tour,
        "count": res.count,
        "complete": res.complete,
        "unique": unique,
        "matches_construction": unique and canonical_cycle(res.cycles[0]) == dec.cycle,
        "node_count": res.node_count,
    }


# matchings and unique pseudotours -------------------------------------------


def enumerate_perfect_matchings(graph: EdgeGraph, limit: int | None = None) -> list[frozenset]:
    """All perfect matchings, found by always matching the smallest
    unmatched vertex."""
    out = []
    matched = set()
    chosen = []
    verts = list(graph.vertices)

    def rec(i):
        if limit is not None and len(out) >= limit:
            return
        while i < len(verts) and verts[i] in matched:
            i += 1
        if i == len(verts):
            out.append(frozenset(chosen))
            return
        u = verts[i]
        matched.add(u)
        for w in graph.neighbours(u):
            if w in matched:
                continue
            matched.add(w)
            chosen.append((min(u, w), max(u, w)))
            rec(i + 1)
            chosen.pop()
            matched.discard(w)
        matched.discard(u)

    rec(0)
    return out


def enumerate_looms(leaper: Leaper, n: int) -> list[frozenset]:
    """Alternating pseudotours of ``Pi(p, q, n)``: unions of a perfect
    matching by short edges with one by long edges."""
    iv = Interval.of_size(n)
    shorts = enumerate_perfect_matchings(_step_graph(iv, leaper.p))
    longs = enumerate_perfect_matchings(_step_graph(iv, leaper.q))
    return [s | l for s in shorts for l in longs]


def _step_graph(iv: Interval, step: int) -> EdgeGraph:
    return EdgeGraph(iv, [(u, u + step) for u in iv if u + step in iv])


def check_unique_pseudotour(leaper: Leaper, budget: Budget | None = None) -> dict:
    """Enumerate the pseudotours of the ``(p + q) x 2pq`` board (stopping at
    two) and compare with the scarf of the one-block loom and the unique
    projection tour on ``p + q`` rows."""
    from .loom import build_loom
    from .projection import tour_pst
    from .scarf import build_scarf

    h, w = leaper.p + leaper.q, 2 * leaper.p * leaper.q
    res = enumerate_pseudotours(leaper, h, w, limit=2, budget=budget)
    scarf = build_scarf(build_loom(leaper, 1), tour_pst(leaper))
    match = None
    if res.count == 1:
        found = {e for c in res.cycles[0] for e in _cycle_edge_set(c)}
        match = found == set(scarf.graph.edges)
    return {
        "leaper": (leaper.p, leaper.q),
        "board": (h, w),
        "count": res.count,
        "complete": res.complete,
        "unique": res.complete and res.count == 1,
        "matches_scarf": match,
        "node_count": res.node_count,
    }


def _cycle_edge_set(cycle) -> set:
    n = len(cycle)
    return {tuple(sorted((cycle[i], cycle[(i + 1) % n]))) for i in range(n)}


# predicted values ------------------------------------------------------------


def predicted_mu_div(pair) -> tuple[int, int]:
    """Closed interval ``(lo, hi)`` that the smallest Hamiltonian
    non-multiple of ``a + b`` is expected to lie in."""
    pair = _pair(pair)
    a, b = pair.a, pair.b
    if 2 * a < b:
        return 3 * a + b, 3 * a + b
    d = b - a
    alpha = b // d
    if d == 1:
        v = (alpha - 1) * (a + b) + 1
        return v, v
    return alpha * (a + b) + 1, alpha * (a + b) + d


def predicted_mu_var(pair) -> int | None:
    """Expected smallest size with two or more tours; None when no size is
    expected to have two."""
    pair = _pair(pair)
    a, b = pair.a, pair.b
    if (a, b) == (1, 2):
        return None
    if a == 1 and b % 2 == 1:
        return 2 * b
    if b - a == 1 and a >= 2:
        return 3 * (a + b)
    return 2 * (a + b)


def coprime_pairs(max_sum: int, min_sum: int = 3):
    """Pairs ``a < b`` with ``gcd(a, b) = 1`` ordered by ``a + b`` then ``a``."""
    from math import gcd

    for s in range(min_sum, max_sum + 1):
        for a in range(1, (s + 1) // 2):
            b = s - a
            if a < b and gcd(a, b) == 1:
                yield CoprimePair(a, b)
