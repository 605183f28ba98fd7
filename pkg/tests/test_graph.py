import random
from math import factorial

import pytest
from hypothesis import given, settings

from conftest import graphs
from oracles import brute_aut, brute_certificate, brute_chromatic, labeled_graphs
from turangood.families import book, clique, cycle, fan, matching_complement, path, star, turan
from turangood.graph import (
    Edge,
    Graph,
    GraphError,
    canonical_form,
    chromatic_number,
    clique_number,
    color_critical_edges,
    complete_graph,
    induced_subgraph,
    is_isomorphic,
    make_graph,
    same_orbit,
)


def test_make_graph_basics():
    assert make_graph(0, []).n == 0
    k3 = make_graph(3, [(0, 1), (1, 2), (0, 2)])
    assert k3.num_edges == 3 and k3 == complete_graph(3)
    c4 = make_graph(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
    assert c4.degrees() == [2, 2, 2, 2]


@pytest.mark.parametrize(
    "n, edges",
    [
        (17, []),
        (3, [(0, 0)]),
        (3, [(0, 3)]),
        (3, [(0, 1), (1, 0)]),
    ],
)
def test_make_graph_rejects(n, edges):
    with pytest.raises(GraphError):
        make_graph(n, edges)


def test_graph_invariants_enforced():
    with pytest.raises(GraphError):
        Graph(2, (0b10, 0))  # asymmetric
    with pytest.raises(GraphError):
        Graph(1, (0b1,))  # loop
    with pytest.raises(GraphError):
        Graph(2, (0b110, 0b1))  # bit beyond n
    with pytest.raises(GraphError):
        Edge(2, 1)


def test_canonical_form_relabeling_examples():
    c4 = cycle(4)
    shuffled = make_graph(4, [(0, 2), (2, 1), (1, 3), (3, 0)])
    assert canonical_form(c4).bytes == canonical_form(shuffled).bytes
    assert canonical_form(clique(3)).aut_count == 6
    assert canonical_form(path(4)).aut_count == brute_aut(path(4)) == 2


def test_isomorphism_examples():
    assert is_isomorphic(cycle(4), turan(2, 4))
    assert not is_isomorphic(path(4), star(3))
    assert is_isomorphic(matching_complement(2), cycle(4))


@settings(max_examples=60, deadline=None)
@given(graphs(max_n=7))
def test_canonical_form_invariant_under_permutation(g):
    rng = random.Random(str(g.adj))
    cf = canonical_form(g)
    for _ in range(50):
        perm = list(range(g.n))
        rng.shuffle(perm)
        other = canonical_form(g.relabel(perm))
        assert other.bytes == cf.bytes
        assert other.aut_count == cf.aut_count


@settings(max_examples=40, deadline=None)
@given(graphs(max_n=6))
def test_canonical_graph_is_isomorphic_to_input(g):
    cf = canonical_form(g)
    canon = cf.graph()
    assert brute_certificate(canon) == brute_certificate(g)
    assert g.relabel(cf.labeling) == canon
    assert factorial(g.n) % cf.aut_count == 0


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_labeled_class_sizes_match_aut(n):
    # aut(G) * |labeled copies of G| = n!, and classes agree with brute-force certificates
    by_canon = {}
    by_brute = {}
    for g in labeled_graphs(n):
        cf = canonical_form(g)
        by_canon.setdefault(cf.bytes, []).append(g)
        by_brute.setdefault(brute_certificate(g), set()).add(cf.bytes)
    assert all(len(v) == 1 for v in by_brute.values())
    assert len(by_canon) == len(by_brute)
    for members in by_canon.values():
        aut = canonical_form(members[0]).aut_count
        assert aut == brute_aut(members[0])
        assert aut * len(members) == factorial(n)


def test_aut_count_of_symmetric_graphs():
    assert canonical_form(complete_graph(10)).aut_count == factorial(10)
    assert canonical_form(turan(2, 12)).aut_count == 2 * factorial(6) ** 2
    assert canonical_form(turan(3, 7)).aut_count == factorial(3) * factorial(2) ** 2 * 2
    assert canonical_form(cycle(9)).aut_count == 18
    assert canonical_form(complete_graph(16)).aut_count == factorial(16)


def test_petersen_like_regular_graph():
    # Petersen graph: vertex-transitive, 120 automorphisms, refinement alone is useless
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    pet = make_graph(10, outer + spokes + inner)
    assert canonical_form(pet).aut_count == 120
    perm = list(range(10))
    random.Random(3).shuffle(perm)
    assert canonical_form(pet.relabel(perm)).bytes == canonical_form(pet).bytes
    assert same_orbit(pet, 0, 7)


def test_same_orbit():
    p4 = path(4)
    assert same_orbit(p4, 0, 3)
    assert not same_orbit(p4, 0, 1)


def test_chromatic_number_examples():
    assert chromatic_number(cycle(5)) == 3
    assert chromatic_number(matching_complement(3)) == 3
    assert chromatic_number(fan(2)) == 3
    assert chromatic_number(make_graph(0, [])) == 0
    assert chromatic_number(make_graph(3, [])) == 1


@pytest.mark.parametrize("r", range(1, 9))
def test_chromatic_number_of_cliques(r):
    assert chromatic_number(clique(r)) == r


@pytest.mark.parametrize("r", range(2, 6))
@pytest.mark.parametrize("n", [6, 11, 16])
def test_chromatic_number_of_turan_graphs(r, n):
    assert chromatic_number(turan(r, n)) == r


@settings(max_examples=60, deadline=None)
@given(graphs(max_n=7))
def test_chromatic_number_matches_brute_force(g):
    assert chromatic_number(g) == brute_chromatic(g)


def test_clique_number():
    assert clique_number(turan(3, 9)) == 3
    assert clique_number(cycle(5)) == 2
    assert clique_number(book(3)) == 3


def test_color_critical_edges_examples():
    assert len(color_critical_edges(cycle(5))) == 5
    assert color_critical_edges(fan(2)) == []
    assert color_critical_edges(book(2)) == [Edge(0, 1)]
    with pytest.raises(GraphError):
        color_critical_edges(make_graph(3, []))


@settings(max_examples=40, deadline=None)
@given(graphs(min_n=2, max_n=7))
def test_color_critical_edges_by_recomputation(g):
    if g.num_edges == 0:
        return
    chi = brute_chromatic(g)
    expected = [e for e in g.edges() if brute_chromatic(g.without_edge(e.u, e.v)) < chi]
    assert color_critical_edges(g) == expected


def test_induced_subgraph_examples():
    k4 = clique(4)
    assert induced_subgraph(k4, 0b1011) == clique(3)
    c5 = cycle(5)
    assert induced_subgraph(c5, 0b00111) == path(3)
    two = induced_subgraph(cycle(4), 0b0101)
    assert two.n == 2 and two.num_edges == 0
    with pytest.raises(GraphError):
        induced_subgraph(k4, 1 << 5)
