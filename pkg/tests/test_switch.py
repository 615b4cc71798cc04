import random

import pytest

from leapertours.assembly import build_pattern, comb_plan
from leapertours.core import Interval, Leaper, cycle_edges, decompose_degree2
from leapertours.loom import build_loom, enumerate_shafts, shaft_at, signature_of_cell
from leapertours.projection import mu_pi_bound, projection_tour, tour_pkt, tour_pst
from leapertours.scarf import PreconditionUnmet, braid_class, build_scarf
from leapertours.switch import (
    NotASwitch,
    NotConnecting,
    NotEdgeDisjoint,
    NotMixed,
    Switch,
    braid_rhombus_system,
    build_comb,
    build_hypergraph,
    comb_signatures_direct,
    comb_touch_signatures,
    find_rhombus_switches,
    flip_rhombus_system,
    flip_switch,
    rhombus,
    stitch_by_rhombi,
)


def same_cycle(a, b):
    """Equal as closed walks, up to rotation and direction."""
    if len(a) != len(b):
        return False
    n = len(a)
    for seq in (list(b), list(reversed(b))):
        for k in range(n):
            if list(a) == seq[k:] + seq[:k]:
                return True
    return False


def adjacency(tour):
    return {y: tour.neighbours(y) for y in tour.vertices}


def test_zebra_comb_golden():
    L = Leaper(2, 3)
    loom = build_loom(L, 2)
    comb = build_comb(loom, adjacency(tour_pst((2, 3))), 0, shaft_at(L, 7))
    expected = [(7, 0), (10, 2), (13, 0), (16, 2), (19, 0), (17, 3), (15, 0), (13, 3), (11, 0), (9, 3)]
    assert same_cycle(comb.cells, expected)
    sc = build_scarf(loom, tour_pst((2, 3)))
    new = flip_switch(sc.graph.edges, comb, sc.cycles, L)
    assert len(decompose_degree2(None, new)) == len(sc.cycles) - len(comb.in_edges) + 1


def test_knight_comb_is_a_switch():
    L = Leaper(1, 2)
    loom = build_loom(L, 2)
    pat = tour_pkt(7)
    sc = build_scarf(loom, pat)
    comb = build_comb(loom, adjacency(pat), 0, shaft_at(L, 1))
    flip_switch(sc.graph.edges, comb, sc.cycles, L)


def test_comb_needs_a_mixed_row():
    L = Leaper(1, 2)
    with pytest.raises(NotMixed):
        build_comb(build_loom(L, 2), adjacency(tour_pkt(5)), 2, shaft_at(L, 1))


def two_squares():
    a = [0, 1, 2, 3]
    b = [10, 11, 12, 13]
    return set(cycle_edges(a)) | set(cycle_edges(b))


def test_single_rhombus_merges_two_squares():
    es = two_squares()
    new = flip_switch(es, rhombus((0, 1, 11, 10)))
    dec = decompose_degree2(None, new)
    assert dec.is_tour and len(dec.cycle) == 8


def test_switch_with_in_edges_on_one_cycle_is_rejected():
    es = two_squares()
    with pytest.raises(NotASwitch):
        flip_switch(es, rhombus((0, 1, 2, 3)))
    with pytest.raises(NotASwitch):
        flip_switch(es, rhombus((0, 1, 12, 10)))


def test_rhombus_system_flips_a_spanning_tree():
    es = set(cycle_edges([0, 1, 2, 3])) | set(cycle_edges([10, 11, 12, 13])) | set(cycle_edges([20, 21, 22, 23]))
    system = [rhombus((0, 1, 11, 10)), rhombus((12, 13, 21, 20)), rhombus((2, 3, 23, 22))]
    rep = flip_rhombus_system(es, system)
    assert len(rep.flipped) == 2 and rep.touched_cycles == 3
    dec = decompose_degree2(None, rep.edges)
    assert dec.is_tour and len(dec.cycle) == 12


def test_rhombus_system_rejects_shared_edges_and_gaps():
    es = set(cycle_edges([0, 1, 2, 3])) | set(cycle_edges([10, 11, 12, 13])) | set(cycle_edges([20, 21, 22, 23]))
    with pytest.raises(NotEdgeDisjoint):
        flip_rhombus_system(es, [rhombus((0, 1, 11, 10)), rhombus((0, 1, 21, 20))])
    es |= set(cycle_edges([30, 31, 32, 33]))
    with pytest.raises(NotConnecting):
        flip_rhombus_system(es, [rhombus((0, 1, 11, 10)), rhombus((22, 23, 33, 32))])


def test_switch_shift_swaps_roles():
    s = Switch((1, 2, 3, 4))
    assert s.shifted().in_edges == s.out_edges


def test_flip_arithmetic_on_random_switches():
    rng = random.Random(11)
    leapers = [Leaper(1, 2), Leaper(1, 4), Leaper(2, 3), Leaper(2, 5), Leaper(3, 4)]
    done = 0
    while done < 100:
        L = rng.choice(leapers)
        loom = build_loom(L, rng.choice([1, 2]))
        n = mu_pi_bound((L.p, L.q)) + rng.randrange(0, 20)
        pat = projection_tour((L.p, L.q), n)
        sc = build_scarf(loom, pat)
        if rng.random() < 0.5:
            cands = find_rhombus_switches(L, sc.graph.edges, n, loom.width)
            cands = [s for s in cands if len({sc.cycles.cycle_of(e[0]) for e in s.in_edges}) == 2]
        else:
            adj = adjacency(pat)
            mixed = [v for v in pat.vertices
                     if sorted(abs(w - v) for w in adj[v]) == [L.p, L.q]]
            cands = []
            if mixed and loom.k == 2:
                v = rng.choice(mixed)
                cands = [build_comb(loom, adj, v, s) for s in enumerate_shafts(L)]
                cands = [s for s in cands
                         if len({sc.cycles.cycle_of(e[0]) for e in s.in_edges}) == len(s.in_edges)]
        if not cands:
            continue
        s = rng.choice(cands)
        touched = {sc.cycles.cycle_of(e[0]) for e in s.in_edges}
        new = flip_switch(sc.graph.edges, s, sc.cycles, L)
        dec = decompose_degree2(None, new, sc.graph.vertices)
        assert len(dec) == len(sc.cycles) - len(touched) + 1
        done += 1


def test_stitching_tiles_of_knight_tours():
    from leapertours.core import build_leaper_graph
    from leapertours.oracle import find_hamiltonian

    L = Leaper(1, 2)
    tile = find_hamiltonian(build_leaper_graph(L, 6, 6)).cycle
    es = set()
    for bx in (0, 6):
        for by in (0, 6):
            es |= {((a + bx, b + by), (c + bx, d + by)) for (a, b), (c, d) in cycle_edges(tile)}
    merged = stitch_by_rhombi(L, es, 12, 12)
    assert merged is not None and decompose_degree2(None, merged).is_tour


def test_comb_signatures_do_not_depend_on_the_pattern():
    L = Leaper(2, 3)
    loom = build_loom(L, 2)
    for n in (17, 27, 37):
        pat = projection_tour((2, 3), n)
        sc = build_scarf(loom, pat)
        sig = {i: signature_of_cell(loom, *c[0]) for i, c in enumerate(sc.cycles.cycles)}
        adj = adjacency(pat)
        mixed = [v for v in pat.vertices if sorted(abs(w - v) for w in adj[v]) == [2, 3]]
        for v in mixed[:4]:
            for s in enumerate_shafts(L):
                comb = build_comb(loom, adj, v, s)
                assert comb_touch_signatures(loom, comb, sc.cycles, sig) == comb_signatures_direct(loom, v, s)


@pytest.mark.parametrize("L", [Leaper(2, 3), Leaper(2, 5), Leaper(3, 4)], ids=str)
def test_comb_signatures_depend_only_on_row_parity(L):
    loom = build_loom(L, 2)
    for s in enumerate_shafts(L):
        for v in range(6):
            assert comb_signatures_direct(loom, v, s) == comb_signatures_direct(loom, v + 2, s)


def test_zebra_hypergraph_selection_is_small():
    plan = comb_plan(Leaper(2, 3))
    assert 1 <= plan.ell <= 3


@pytest.mark.parametrize("L", [Leaper(2, 5), Leaper(3, 4), Leaper(4, 5)], ids=str)
def test_hypergraph_selection_within_bound(L):
    from leapertours.loom import loom_stats

    assert comb_plan(L).ell <= 4 * loom_stats(L).eta - 1


@pytest.mark.parametrize("q", [2, 4, 6])
def test_p1_shortcut_shafts_connect_every_signature(q):
    from leapertours.switch import DisconnectedHypergraph

    L = Leaper(1, q)
    loom = build_loom(L, 2)
    first, second = shaft_at(L, 1), shaft_at(L, 2 * q - 2)
    working = []
    for a in (0, 1):
        for b in (0, 1):
            edges = {0: comb_signatures_direct(loom, a, first), 1: comb_signatures_direct(loom, b, second)}
            try:
                build_hypergraph(loom, edges, fixed=[0, 1])
            except DisconnectedHypergraph:
                continue
            working.append((a, b))
    assert working


def test_braid_rhombi_connect_each_braid():
    L = Leaper(2, 5)
    loom = build_loom(L, 2)
    lay = build_pattern(L, Interval(0, 104))
    sc = build_scarf(loom, lay.tour)
    des = []
    for ext, off in lay.role("H"):
        (a, b), (c, d) = ext.designated
        des.append((a + off, b + off, c + off, d + off))
    groups = {}
    for i, cyc in enumerate(sc.cycles.cycles):
        groups.setdefault(braid_class(loom, *cyc[0]), []).append(i)
    for (lc, cls), members in groups.items():
        system = braid_rhombus_system(loom, sc.graph.edges, sc.cycles, lc, cls, des, members)
        rep = flip_rhombus_system(sc.graph.edges, system, sc.cycles)
        assert rep.touched_cycles == len(members) or len(members) == 1


def test_braid_rhombi_need_p_at_least_two():
    L = Leaper(1, 4)
    loom = build_loom(L, 2)
    sc = build_scarf(loom, tour_pst((1, 4)))
    with pytest.raises(PreconditionUnmet):
        braid_rhombus_system(loom, sc.graph.edges, sc.cycles, 0, 0, [(0, 4, 1, 5)])
