import pytest

from oracles import has_clique
from turangood.counting import contains
from turangood.families import (
    ClassVector,
    FamilyError,
    FamilySpec,
    Kind,
    book,
    build,
    clique,
    complete_multipartite,
    cycle,
    describe,
    fan,
    glue_h_prime,
    matching_complement,
    parse_family,
    path,
    star,
    turan,
    turan_plus_edge,
    turan_sizes,
)
from turangood.graph import chromatic_number, is_isomorphic, make_graph


def test_fan_f2():
    g = fan(2)
    assert (g.n, g.num_edges) == (5, 6)
    triangles = [t for t in [(0, 1, 2), (0, 3, 4)] if all(g.has_edge(a, b) for a, b in [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])])]
    assert len(triangles) == 2
    assert set(triangles[0]) & set(triangles[1]) == {0}
    assert not has_clique(g, 4)


def test_matching_complements_small():
    assert is_isomorphic(matching_complement(2), cycle(4))
    assert is_isomorphic(matching_complement(2, plus=True), book(2))


def test_book_b2_is_k4_minus_edge():
    assert is_isomorphic(book(2), clique(4).without_edge(2, 3))
    assert book(3).num_edges == 7


@pytest.mark.parametrize("r, n, edges, sizes", [(2, 5, 6, (3, 2)), (3, 7, 16, (3, 2, 2)), (2, 4, 4, (2, 2))])
def test_turan_examples(r, n, edges, sizes):
    g = turan(r, n)
    assert g.num_edges == edges
    assert turan_sizes(r, n) == sizes


def test_turan_labels_are_consecutive_with_big_classes_first():
    g = turan(3, 7)
    # classes {0,1,2}, {3,4}, {5,6}
    assert not g.has_edge(0, 2) and not g.has_edge(3, 4) and not g.has_edge(5, 6)
    assert g.has_edge(2, 3) and g.has_edge(4, 5)
    assert is_isomorphic(turan(2, 4), cycle(4))


@pytest.mark.parametrize("r, n", [(0, 3), (4, 3), (2, 17)])
def test_turan_rejects(r, n):
    with pytest.raises(FamilyError):
        turan(r, n)


def test_complete_multipartite_examples():
    assert complete_multipartite((1, 1, 1)) == clique(3)
    assert is_isomorphic(complete_multipartite((2, 2)), cycle(4))
    assert complete_multipartite(ClassVector((6, 2))).num_edges == 12
    with pytest.raises(FamilyError):
        complete_multipartite((9, 8))
    with pytest.raises(FamilyError):
        ClassVector((2, 0))


def test_class_vector_derived_fields():
    cv = ClassVector((2, 3, 1))
    assert (cv.n, cv.r) == (6, 3)
    assert cv.sorted().sizes == (3, 2, 1)


def test_glue_examples():
    k2 = clique(2)
    c4 = glue_h_prime(k2, 0b11, 3, [(0, 0), (1, 1)])
    assert is_isomorphic(c4, cycle(4))
    assert sorted(c4.edge_tuples()) == [(0, 1), (0, 2), (1, 3), (2, 3)]
    two_k2 = glue_h_prime(k2, 0, 3, [])
    assert two_k2 == make_graph(4, [(0, 1), (2, 3)])
    p4 = glue_h_prime(k2, 0b01, 3, [(0, 0)])
    assert is_isomorphic(p4, path(4))


def test_glue_rejects():
    with pytest.raises(FamilyError):
        glue_h_prime(path(3), 0b101, 3, [])  # 0 and 2 are not adjacent
    with pytest.raises(FamilyError):
        glue_h_prime(clique(2), 0b01, 3, [(1, 0)])  # 1 not in X
    with pytest.raises(FamilyError):
        glue_h_prime(clique(2), 0b11, 3, [(0, 2)])  # clique only has indices 0, 1
    with pytest.raises(FamilyError):
        glue_h_prime(clique(10), 0b1, 8, [])  # 17 vertices


@pytest.mark.parametrize("k", [2, 3, 4])
@pytest.mark.parametrize("h, mask", [(clique(3), 0b111), (path(4), 0b0110), (cycle(5), 0b1), (fan(2), 0b00111)])
def test_glue_contains_clique_and_h(h, mask, k):
    pattern = [(x, j) for j in range(k - 1) for x in range(h.n) if mask >> x & 1 and (x + j) % 2 == 0]
    g = glue_h_prime(h, mask, k, pattern)
    assert g.n == h.n + k - 1
    assert contains(clique(k - 1), g)
    for u, v in h.edge_tuples():
        assert g.has_edge(u, v)
    assert sum(1 for u, v in g.edge_tuples() if u < h.n <= v) == len(pattern)


@pytest.mark.parametrize("n", range(1, 11))
def test_turan_is_its_own_multipartite_graph(n):
    for r in range(1, n + 1):
        assert turan(r, n) == complete_multipartite(turan_sizes(r, n))
        shuffled = complete_multipartite(sorted(turan_sizes(r, n)))
        assert is_isomorphic(turan(r, n), shuffled)


@pytest.mark.parametrize("parts", range(1, 6))
def test_turan_graph_is_clique_free(parts):
    for n in range(parts, 13):
        g = turan(parts, n)
        assert not has_clique(g, parts + 1)
        assert has_clique(g, parts)


@pytest.mark.parametrize("k", range(1, 5))
def test_matching_complement_plus(k):
    bare = matching_complement(k)
    plus = matching_complement(k, plus=True)
    assert plus.num_edges == bare.num_edges + 1
    assert bare.adj != plus.adj and all(bare.adj[v] & ~plus.adj[v] == 0 for v in range(2 * k))
    assert chromatic_number(bare) == k
    assert chromatic_number(plus) == k + 1


@pytest.mark.parametrize(
    "text, kind, params",
    [
        ("C5", Kind.CYCLE, (5,)),
        ("M(3,2,2)", Kind.COMPLETE_MULTIPARTITE, (3, 2, 2)),
        ("T(2,10)", Kind.TURAN, (2, 10)),
        ("MbarP3", Kind.MATCHING_COMPLEMENT_PLUS, (3,)),
        ("Mbar2", Kind.MATCHING_COMPLEMENT, (2,)),
        ("S3", Kind.STAR, (3,)),
        (" B2 ", Kind.BOOK, (2,)),
    ],
)
def test_parse_family(text, kind, params):
    spec = parse_family(text)
    assert spec == FamilySpec(kind, params)
    assert parse_family(str(spec)) == spec


def test_parse_multipartite_matches_turan():
    assert is_isomorphic(build(parse_family("M(3,2,2)")), turan(3, 7))
    assert build("T(2,10)").num_edges == 25


def test_parse_graph6_literal_round_trip():
    spec = parse_family("g6:Cr")
    g = build(spec)
    assert describe(g) == "g6:Cr"
    assert is_isomorphic(g, cycle(4))


@pytest.mark.parametrize(
    "text, offset",
    [
        ("", 0),
        ("Q5", 0),
        ("C", 0),
        ("C5x", 2),
        ("C2", 1),
        ("T(2,", 4),
        ("T(3,2)", 2),
        ("M(3,0)", 2),
        ("M(3;2)", 3),
        ("K17", 1),
        ("g6:", 3),
    ],
)
def test_parse_errors_carry_offsets(text, offset):
    with pytest.raises(FamilyError) as info:
        parse_family(text)
    assert info.value.offset == offset


def test_small_families_counts():
    assert path(1).num_edges == 0
    assert star(4).degree(0) == 4
    with pytest.raises(FamilyError):
        cycle(2)
    with pytest.raises(FamilyError):
        path(0)
    with pytest.raises(FamilyError):
        fan(8)


def test_turan_plus_edge():
    g = turan_plus_edge(2, 6)
    assert g.num_edges == 10
    assert not contains(fan(2), g)
    with pytest.raises(FamilyError):
        turan_plus_edge(3, 3)
