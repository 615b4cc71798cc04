import itertools
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from leapertours.core import (
    CoprimePair,
    EdgeGraph,
    Interval,
    Leaper,
    build_leaper_graph,
    build_projection_graph,
    canonical_cycle,
)
from leapertours.oracle import (
    EXHAUSTED,
    FOUND,
    INDETERMINATE,
    Budget,
    RecordLog,
    check_unique_pseudotour,
    check_unique_tour_put,
    count_hamiltonian,
    enumerate_perfect_matchings,
    enumerate_pseudotours,
    enumerate_two_factors,
    find_hamiltonian,
    predicted_mu_div,
    predicted_mu_var,
    probe_side,
    search_mu_div,
    search_mu_pi,
    search_mu_var,
)


def pi(a, b, n):
    return build_projection_graph((a, b), Interval.of_size(n))


def brute_force_cycles(graph):
    """Every Hamiltonian cycle by trying all vertex orders."""
    vs = list(graph.vertices)
    if len(vs) < 3:
        return set()
    es = set(graph.edges)
    found = set()
    first = vs[0]
    for rest in itertools.permutations(vs[1:]):
        order = (first,) + rest
        if all((min(x, y), max(x, y)) in es for x, y in zip(order, order[1:] + order[:1])):
            found.add(canonical_cycle(order))
    return found


def test_small_tour_found():
    res = find_hamiltonian(pi(1, 2, 4))
    assert res.verdict == FOUND and res.cycle == (0, 1, 3, 2)


@pytest.mark.parametrize("n", range(1, 9))
def test_knight_has_no_tour_with_four_rows(n):
    assert find_hamiltonian(build_leaper_graph(Leaper(1, 2), 4, n)).verdict == EXHAUSTED


def test_exhausted_projection_graph():
    assert find_hamiltonian(pi(2, 3, 7)).verdict == EXHAUSTED


@pytest.mark.parametrize("a,b,n", [(1, 3, 6), (2, 3, 15)])
def test_graphs_with_several_tours(a, b, n):
    res = count_hamiltonian(pi(a, b, n))
    assert res.complete and res.count >= 2
    assert len(set(res.cycles)) == res.count


@pytest.mark.parametrize("L,h,w", [(Leaper(1, 2), 3, 4), (Leaper(1, 4), 5, 8), (Leaper(2, 3), 5, 12)], ids=str)
def test_boards_with_exactly_one_pseudotour(L, h, w):
    res = enumerate_pseudotours(L, h, w)
    assert res.complete and res.count == 1


def test_budget_gives_indeterminate():
    res = find_hamiltonian(build_leaper_graph(Leaper(1, 2), 6, 6), Budget(max_nodes=5))
    assert res.verdict == INDETERMINATE and res.cycle is None
    assert search_mu_div((3, 4), 40, Budget(max_nodes=1)).status == INDETERMINATE


@st.composite
def small_graphs(draw):
    n = draw(st.integers(3, 7))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs)))
    return EdgeGraph(range(n), chosen)


@given(small_graphs())
@settings(max_examples=150, deadline=None)
def test_solver_agrees_with_brute_force(g):
    res = count_hamiltonian(g)
    assert res.complete
    assert set(res.cycles) == brute_force_cycles(g)
    assert find_hamiltonian(g).found == bool(res.count)


@given(small_graphs())
@settings(max_examples=100, deadline=None)
def test_two_factors_cover_every_vertex_twice(g):
    res = enumerate_two_factors(g)
    seen = set()
    for cycles in res.cycles:
        assert sorted(v for c in cycles for v in c) == sorted(g.vertices)
        key = frozenset(frozenset((c[i], c[(i + 1) % len(c)])) for c in cycles for i in range(len(c)))
        assert key not in seen
        seen.add(key)
    assert brute_force_cycles(g) == {cs[0] for cs in res.cycles if len(cs) == 1}


def test_perfect_matchings_of_a_path_and_a_square():
    path = EdgeGraph(range(4), [(0, 1), (1, 2), (2, 3)])
    assert enumerate_perfect_matchings(path) == [frozenset({(0, 1), (2, 3)})]
    square = EdgeGraph(range(4), [(0, 1), (1, 2), (2, 3), (0, 3)])
    assert len(enumerate_perfect_matchings(square)) == 2


@pytest.mark.parametrize("pair", [(1, 4), (2, 3), (2, 5), (3, 4), (1, 6), (3, 5), (2, 7)])
def test_smallest_non_multiple_matches_prediction(pair):
    res = search_mu_div(pair, 60)
    lo, hi = predicted_mu_div(pair)
    assert res.exact and lo <= res.value <= hi


@pytest.mark.parametrize("pair", [(1, 4), (2, 3), (2, 5), (3, 4), (1, 6), (3, 5)])
def test_smallest_size_with_two_tours_matches_prediction(pair):
    assert search_mu_var(pair, 40).value == predicted_mu_var(pair)


def test_knight_projection_never_has_two_tours():
    res = search_mu_var((1, 2), 30)
    assert res.status == "unknown" and res.describe() == "Unknown(>30)"


@pytest.mark.parametrize("pair,value", [((1, 2), 3), ((1, 4), 7), ((2, 3), 10), ((2, 5), 16)])
def test_smallest_hamiltonian_tail(pair, value):
    assert search_mu_pi(pair, 80).value == value


def test_record_log_resumes(tmp_path):
    log = tmp_path / "mu.jsonl"
    first = search_mu_div((2, 5), 40, log=log)
    lines = log.read_text().splitlines()
    assert [json.loads(x)["n"] for x in lines] == [r["n"] for r in first.records]
    again = search_mu_div((2, 5), 40, Budget(max_nodes=0), log=log)
    assert again.value == first.value
    assert log.read_text().splitlines() == lines
    book = RecordLog(log, "mu_div")
    assert book.get(CoprimePair(2, 5), first.value)["verdict"] == FOUND


@pytest.mark.parametrize("L", [Leaper(1, 2), Leaper(1, 4), Leaper(2, 3), Leaper(3, 4)], ids=str)
def test_unique_pseudotour_is_the_scarf(L):
    rep = check_unique_pseudotour(L)
    assert rep["unique"] and rep["matches_scarf"]


def test_unique_tour_candidate_is_the_only_tour():
    rep = check_unique_tour_put((5, 8))
    assert rep["construction_valid"] and rep["complete"]
    assert rep["n"] == 29 and rep["unique"] and rep["matches_construction"]


def test_both_odd_pair_tail_counts_even_sizes_only():
    res = search_mu_pi((1, 3), 60)
    assert res.value == 4
    assert all(r["n"] % 2 == 0 for r in res.records)


def test_exhaustion_is_replayable():
    a = search_mu_div((3, 5), 20)
    b = search_mu_div((3, 5), 20)
    assert [(r["n"], r["verdict"], r["node_count"]) for r in a.records] == \
           [(r["n"], r["verdict"], r["node_count"]) for r in b.records]


@pytest.mark.parametrize("L,width", [(Leaper(1, 2), 10), (Leaper(2, 3), 16), (Leaper(1, 4), 24)], ids=str)
def test_side_probe_brackets_the_smallest_height(L, width):
    res = probe_side(L, width)
    h = L.p + L.q
    assert res.bounds == (h, h) and res.describe() == f"[{h};{h}]"
    assert res.records[-1]["n"] == width
    cells = [tuple(c) for c in res.witnesses[0]]
    assert len(set(cells)) == h * width
    assert all(sorted((abs(a - c), abs(b - d))) == [L.p, L.q]
               for (a, b), (c, d) in zip(cells, cells[1:] + cells[:1]))


def test_side_probe_without_a_tour_leaves_the_top_open():
    res = probe_side(Leaper(1, 4), 20)
    assert res.bounds == (5, None) and res.describe() == "[5;?]"
