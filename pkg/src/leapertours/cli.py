"""The ``leaper`` command line and the JSON tour file format.

A tour file looks like::

    {"schema_version": 1, "kind": "board", "params": {"p": 1, "q": 2},
     "board": {"height": 10, "width": 8}, "cycle": [[0, 0], ...],
     "provenance": {...}}

Projection tours use ``"kind": "projection"``, ``"params": {"a": .., "b": ..}``,
``"interval": {"lo": .., "hi": ..}`` and a list of integers as the cycle.
A file may hold ``"cycles"`` (a list of cycles) instead of ``"cycle"`` to
describe a pseudotour.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import render
from .assembly import (
    BoardTour,
    FileProvider,
    OracleProvider,
    ProviderUnavailable,
    thresholds,
    tour_4pq,
    tour_4pq_with_joint,
    tour_even_board,
)
from .core import (
    CoprimePair,
    DegreeViolation,
    Interval,
    Leaper,
    LeaperError,
    NotASubgraph,
    canonical_cycle,
    decompose_degree2,
    edge,
    is_leaper_move,
)
from .loom import build_lstar
from .oracle import (
    Budget,
    check_unique_pseudotour,
    check_unique_tour_put,
    coprime_pairs,
    predicted_mu_div,
    predicted_mu_var,
    probe_side,
    search_mu_div,
    search_mu_pi,
    search_mu_var,
)
from .projection import BelowThreshold, ParityViolation, interval_of, projection_tour

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_NOT_A_TOUR = 1
EXIT_INVALID = 2
EXIT_BELOW_THRESHOLD = 3
EXIT_NO_PROVIDER = 4


class TourFileError(ValueError):
    pass


@dataclass(frozen=True)
class ProjectionTour:
    a: int
    b: int
    interval: Interval
    cycle: tuple
    provenance: dict = field(default_factory=dict, compare=False, hash=False)


def tour_to_dict(tour) -> dict:
    if isinstance(tour, BoardTour):
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": "board",
            "params": {"p": tour.leaper.p, "q": tour.leaper.q},
            "board": {"height": tour.height, "width": tour.width},
            "cycle": [list(c) for c in tour.cycle],
            "provenance": tour.provenance or "external",
        }
    if isinstance(tour, ProjectionTour):
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": "projection",
            "params": {"a": tour.a, "b": tour.b},
            "interval": {"lo": tour.interval.lo, "hi": tour.interval.hi},
            "cycle": list(tour.cycle),
            "provenance": tour.provenance or "external",
        }
    raise TypeError(f"cannot serialise {type(tour).__name__}")


def dumps_tour(tour) -> str:
    return json.dumps(tour_to_dict(tour), sort_keys=True) + "\n"


def _load(path) -> dict:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise TourFileError(f"not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise TourFileError("top level must be an object")
    if data.get("schema_version") != SCHEMA_VERSION:
        raise TourFileError(f"unsupported schema_version {data.get('schema_version')!r}")
    if data.get("kind") not in ("board", "projection"):
        raise TourFileError(f"unknown kind {data.get('kind')!r}")
    if not any(k in data for k in ("cycle", "cycles", "edges")):
        raise TourFileError("no cycle")
    return data


def _vertex(data: dict, v):
    return tuple(v) if data["kind"] == "board" else v


def _cycles_of(data: dict) -> list[list]:
    """The cycles of a file; an ``edges`` list is decomposed first (and
    must then have every degree equal to two)."""
    if "edges" in data:
        es = [edge(_vertex(data, u), _vertex(data, v)) for u, v in data["edges"]]
        return [list(c) for c in decompose_degree2(None, es).cycles]
    raw = [data["cycle"]] if "cycle" in data else data["cycles"]
    return [[_vertex(data, c) for c in cyc] for cyc in raw]


def _edges_of(data: dict) -> list[tuple]:
    if "edges" in data:
        return [(_vertex(data, u), _vertex(data, v)) for u, v in data["edges"]]
    out = []
    for cyc in _cycles_of(data):
        if len(cyc) < 3:
            raise TourFileError("a cycle needs at least three vertices")
        out += [(cyc[i], cyc[(i + 1) % len(cyc)]) for i in range(len(cyc))]
    return out


def read_tour_file(path):
    """Parse a tour file into a :class:`BoardTour` or
    :class:`ProjectionTour`.  Only the structure is checked here;
    :func:`verify_data` checks the tour itself."""
    data = _load(path)
    try:
        cycles = _cycles_of(data)
    except (DegreeViolation, NotASubgraph, ValueError, TypeError) as exc:
        raise TourFileError(f"edges do not form cycles: {exc}") from exc
    if len(cycles) != 1:
        raise TourFileError("file holds a pseudotour, not a tour")
    prov = data.get("provenance", "external")
    prov = prov if isinstance(prov, dict) else {"source": prov}
    try:
        if data["kind"] == "board":
            leaper = Leaper(data["params"]["p"], data["params"]["q"])
            b = data["board"]
            return BoardTour(leaper, b["height"], b["width"], canonical_cycle(cycles[0]), prov)
        iv = Interval(data["interval"]["lo"], data["interval"]["hi"])
        return ProjectionTour(data["params"]["a"], data["params"]["b"], iv, canonical_cycle(cycles[0]), prov)
    except (KeyError, TypeError) as exc:
        raise TourFileError(f"missing field {exc}") from exc


def verify_data(data: dict) -> tuple[str, int]:
    """Return ``(verdict, exit code)`` for a parsed tour file."""
    try:
        if data["kind"] == "board":
            leaper = Leaper(data["params"]["p"], data["params"]["q"])
            h, w = data["board"]["height"], data["board"]["width"]
            cells = [(x, y) for x in range(w) for y in range(h)]
            is_move = lambda u, v: is_leaper_move(leaper, u, v)  # noqa: E731
        else:
            pair = CoprimePair(data["params"]["a"], data["params"]["b"])
            iv = Interval(data["interval"]["lo"], data["interval"]["hi"])
            cells = list(iv)
            is_move = lambda u, v: abs(u - v) in (pair.a, pair.b)  # noqa: E731
    except (KeyError, TypeError, ValueError) as exc:
        return f"invalid(BadParameters: {exc})", EXIT_INVALID
    universe = set(cells)
    es = set()
    try:
        pairs = _edges_of(data)
    except TourFileError:
        return "invalid(ShortCycle)", EXIT_NOT_A_TOUR
    except (TypeError, ValueError) as exc:
        return f"invalid(BadParameters: {exc})", EXIT_INVALID
    for u, v in pairs:
        if u not in universe or v not in universe:
            return f"invalid(OffBoard: {u if u not in universe else v})", EXIT_NOT_A_TOUR
        if u == v or not is_move(u, v):
            return f"invalid(NotASubgraph: {u}-{v})", EXIT_NOT_A_TOUR
        es.add(edge(u, v))
    try:
        dec = decompose_degree2(None, es, cells)
    except DegreeViolation as exc:
        return f"invalid(DegreeViolation: {exc})", EXIT_NOT_A_TOUR
    except NotASubgraph as exc:
        return f"invalid(NotASubgraph: {exc})", EXIT_NOT_A_TOUR
    if dec.is_tour:
        return f"tour, {len(cells)} cells", EXIT_OK
    return f"pseudotour({len(dec)} cycles)", EXIT_NOT_A_TOUR


# commands ------------------------------------------------------------------


def _leaper(args) -> Leaper:
    return Leaper(args.p, args.q)


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_construct(args) -> int:
    try:
        if args.what == "projection":
            g = projection_tour((args.p, args.q), args.n)
            dec = decompose_degree2(g, g.edges)
            t = ProjectionTour(args.p, args.q, interval_of(g), dec.cycle, {"construction": "projection_tour"})
        elif args.what == "board":
            L = _leaper(args)
            if args.joint:
                t, joint = tour_4pq_with_joint(L, args.height)
                t = BoardTour(L, t.height, t.width, t.cycle,
                              {**t.provenance, "joint": [list(joint[0]), list(joint[1])]})
            else:
                t = tour_4pq(L, args.height)
        else:
            L = _leaper(args)
            provider = FileProvider(args.provider) if args.provider != "oracle" else OracleProvider(Budget.default())
            t = tour_even_board(L, args.height, args.width, provider)
    except (BelowThreshold, ParityViolation) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BELOW_THRESHOLD
    except ProviderUnavailable as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_PROVIDER
    except (LeaperError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    text = dumps_tour(t)
    verdict, code = verify_data(json.loads(text))
    if code != EXIT_OK:
        print(f"error: constructed output failed verification: {verdict}", file=sys.stderr)
        return EXIT_NOT_A_TOUR
    _emit(text, args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        data = _load(args.file)
    except (OSError, TourFileError) as exc:
        print(f"unreadable: {exc}")
        return EXIT_INVALID
    verdict, code = verify_data(data)
    print(verdict)
    return code


def cmd_render(args) -> int:
    try:
        data = _load(args.file)
        cycles = _cycles_of(data)
    except (OSError, TourFileError, DegreeViolation, NotASubgraph) as exc:
        print(f"unreadable: {exc}", file=sys.stderr)
        return EXIT_INVALID
    cyc = [c for cy in cycles for c in cy] if len(cycles) > 1 else cycles[0]
    if data["kind"] == "board":
        h, w = data["board"]["height"], data["board"]["width"]
        text = render.board_svg(h, w, cyc) if args.format == "svg" else render.board_ascii(h, w, cyc)
    else:
        iv = data["interval"]
        if args.format == "svg":
            text = render.projection_svg(iv["lo"], iv["hi"], cyc, data["params"]["a"])
        else:
            text = render.projection_ascii(cyc)
    _emit(text, args.out)
    return EXIT_OK


def cmd_thresholds(args) -> int:
    t = thresholds(_leaper(args), args.mode)
    for name in ("m_I", "m_II", "m_III", "eta", "xi", "ell", "part_min"):
        print(f"{name}\t{getattr(t, name)}")
    return EXIT_OK


def _budget(args) -> Budget:
    b = Budget.default()
    if getattr(args, "budget", None):
        b.max_nodes = args.budget
    return b


def cmd_search(args) -> int:
    fn = {"mu-div": search_mu_div, "mu-var": search_mu_var, "mu-pi": search_mu_pi}.get(args.quantity)
    try:
        if fn is None:
            res = probe_side(Leaper(args.a, args.b), args.max_n, _budget(args), args.resume)
        else:
            res = fn((args.a, args.b), args.max_n, _budget(args), args.resume)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    print("pair\tquantity\tvalue\tstatus")
    print(f"({args.a},{args.b})\t{res.quantity}\t{res.describe()}\t{res.status}")
    if res.status == "indeterminate":
        print("warning: search budget exhausted", file=sys.stderr)
    return EXIT_OK


# check tables ----------------------------------------------------------------


def _row_pde(pair, budget, log):
    lo, _ = predicted_mu_div(pair)
    res = search_mu_div(pair, lo, budget, log)
    ok = res.value == lo
    return [str(pair), str(lo), res.describe(), "ok" if ok else ("unknown" if res.value is None else "MISMATCH")]


def _row_pdd(pair, budget, log):
    lo, hi = predicted_mu_div(pair)
    res = search_mu_div(pair, hi, budget, log)
    ok = res.value is not None and lo <= res.value <= hi
    status = "ok" if ok else ("unknown" if res.status == "indeterminate" else "MISMATCH")
    return [str(pair), f"[{lo};{hi}]", res.describe(), status]


def _row_pvt(pair, budget, log):
    want = predicted_mu_var(pair)
    n_max = want if want is not None else 6 * (pair.a + pair.b)
    res = search_mu_var(pair, n_max, budget, log)
    if want is None:
        ok = res.value is None and res.status == "unknown"
    else:
        ok = res.value == want
    status = "ok" if ok else ("unknown" if res.status == "indeterminate" else "MISMATCH")
    return [str(pair), "inf" if want is None else str(want), res.describe(), status]


def _row_put(pair, budget, log):
    r = check_unique_tour_put(pair, budget)
    status = "ok" if r["unique"] and r["construction_valid"] and r["matches_construction"] else (
        "unknown" if not r["complete"] else "MISMATCH")
    return [str(pair), str(r["n"]), str(r["count"]), status]


def _row_unique(leaper, budget, log):
    r = check_unique_pseudotour(leaper, budget)
    status = "ok" if r["unique"] and r["matches_scarf"] else ("unknown" if not r["complete"] else "MISMATCH")
    return [str(leaper), f"{r['board'][0]}x{r['board'][1]}", str(r["count"]), status]


def _row_lstar(leaper, budget, log):
    comps = [build_lstar(leaper, k).components for k in (1, 2, 3)]
    status = "disconnected" if all(c > 1 for c in comps) else "CONNECTED"
    return [str(leaper), ",".join(map(str, comps)), status]


def _skew_free(max_sum):
    for pair in coprime_pairs(max_sum):
        if (pair.a + pair.b) % 2 == 1:
            yield Leaper(pair.a, pair.b)


def _put_admissible(pair) -> bool:
    a, b = pair.a, pair.b
    if not 2 * a > b:
        return False
    d = b - a
    alpha = b // d
    return alpha % 2 == 0 and 2 * (a % d) > d


CHECKS = {
    "pde": (["pair", "expected", "found", "status"], _row_pde,
            lambda s: [p for p in coprime_pairs(s) if 2 * p.a < p.b]),
    "pdd": (["pair", "expected", "found", "status"], _row_pdd,
            lambda s: [p for p in coprime_pairs(s) if 2 * p.a > p.b]),
    "pvt": (["pair", "expected", "found", "status"], _row_pvt, lambda s: list(coprime_pairs(s))),
    "put": (["pair", "n", "tours", "status"], _row_put, lambda s: [p for p in coprime_pairs(s) if _put_admissible(p)]),
    "use": (["leaper", "board", "pseudotours", "status"], _row_unique,
            lambda s: [L for L in _skew_free(s) if L.p == 1]),
    "usd": (["leaper", "board", "pseudotours", "status"], _row_unique,
            lambda s: [L for L in _skew_free(s) if L.q == L.p + 1]),
    "lstar": (["leaper", "components k=1,2,3", "status"], _row_lstar,
              lambda s: [L for L in _skew_free(s) if L.p >= 3]),
}


def _run_row(job):
    name, item, budget, log = job
    return CHECKS[name][1](item, budget, log)


def cmd_check(args) -> int:
    header, _, items = CHECKS[args.what]
    budget = _budget(args)
    jobs = [(args.what, item, budget, args.resume) for item in items(args.max_sum)]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            rows = list(pool.map(_run_row, jobs))
    else:
        rows = [_run_row(j) for j in jobs]
    print("\t".join(header))
    for r in rows:
        print("\t".join(r))
    if any(r[-1] == "unknown" for r in rows):
        print("warning: some rows are unknown (budget exhausted)", file=sys.stderr)
    return EXIT_OK


# parser ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="leaper", description="Closed tours of skew-free leapers.")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="build a tour and write it as JSON")
    c.add_argument("what", choices=["projection", "board", "even"])
    c.add_argument("--p", type=int, required=True)
    c.add_argument("--q", type=int, required=True)
    c.add_argument("--n", type=int, help="number of points (projection)")
    c.add_argument("--height", type=int)
    c.add_argument("--width", type=int, help="board width (even)")
    c.add_argument("--joint", action="store_true", help="also report a joint edge (board)")
    c.add_argument("--provider", default="oracle", help="'oracle' or a directory of tour files (even)")
    c.add_argument("--out")
    c.set_defaults(func=cmd_construct)

    v = sub.add_parser("verify", help="check a tour file")
    v.add_argument("file")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("search", help="exhaustive search for a threshold quantity")
    s.add_argument("quantity", choices=["mu-div", "mu-var", "mu-pi", "mu-side"])
    s.add_argument("--a", type=int, required=True)
    s.add_argument("--b", type=int, required=True)
    s.add_argument("--max-n", type=int, required=True)
    s.add_argument("--budget", type=int, help="node budget per search")
    s.add_argument("--resume", help="line-delimited record file to reuse and extend")
    s.set_defaults(func=cmd_search)

    k = sub.add_parser("check", help="tabulate a family of predictions")
    k.add_argument("what", choices=sorted(CHECKS))
    k.add_argument("--max-sum", type=int, required=True)
    k.add_argument("--jobs", type=int, default=1)
    k.add_argument("--budget", type=int)
    k.add_argument("--resume")
    k.set_defaults(func=cmd_check)

    r = sub.add_parser("render", help="draw a tour file")
    r.add_argument("file")
    r.add_argument("--format", choices=["svg", "ascii"], default="svg")
    r.add_argument("--out")
    r.set_defaults(func=cmd_render)

    t = sub.add_parser("thresholds", help="print the height thresholds of a leaper")
    t.add_argument("--p", type=int, required=True)
    t.add_argument("--q", type=int, required=True)
    t.add_argument("--mode", choices=["computed", "formula"], default="computed")
    t.set_defaults(func=cmd_thresholds)
    return ap


def _validate(ap, args):
    if args.command == "construct":
        need = {"projection": ["n"], "board": ["height"], "even": ["height", "width"]}[args.what]
        missing = [f"--{n}" for n in need if getattr(args, n) is None]
        if missing:
            ap.error(f"construct {args.what} needs {' '.join(missing)}")


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    _validate(ap, args)
    try:
        return args.func(args)
    except (LeaperError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
