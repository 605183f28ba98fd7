import math

import numpy as np
import pytest
from hypothesis import given, settings

from conftest import graphs
from turangood.counting import count_subgraph
from turangood.families import clique, complete_multipartite, cycle, path, star, turan
from turangood.graph import GraphError, empty_graph
from turangood.search import enumerate_graphs
from turangood.spectral import (
    adjacency_matrix,
    check_path_bound,
    path_spectral_bound,
    spectral_radius,
    walk_count,
)


def test_walk_count_examples():
    assert walk_count(cycle(4), 2) == 16
    assert walk_count(clique(3), 1) == 6
    for g in (cycle(5), star(4), empty_graph(3)):
        assert walk_count(g, 0) == g.n
    with pytest.raises(ValueError):
        walk_count(cycle(4), -1)


@settings(max_examples=50, deadline=None)
@given(graphs(min_n=1, max_n=8))
def test_walk_count_matches_matrix_power(g):
    a = adjacency_matrix(g).astype(np.int64)
    ones = np.ones(g.n, dtype=np.int64)
    for m in range(6):
        assert walk_count(g, m) == int(ones @ np.linalg.matrix_power(a, m) @ ones)


def test_walk_count_is_exact_for_large_values():
    # n (n-1)^m overflows 64-bit floats' exact range well before m = 20
    assert walk_count(clique(16), 20) == 16 * 15**20


@pytest.mark.parametrize("g, mu", [(cycle(4), 2.0), (clique(4), 3.0), (complete_multipartite((3, 3)), 3.0)])
def test_spectral_radius_examples(g, mu):
    est = spectral_radius(g)
    assert abs(est.mu - mu) < 1e-9
    assert est.residual < 1e-4


@settings(max_examples=60, deadline=None)
@given(graphs(min_n=1, max_n=9))
def test_spectral_radius_matches_eigvalsh(g):
    est = spectral_radius(g)
    exact = float(np.linalg.eigvalsh(adjacency_matrix(g))[-1]) if g.n else 0.0
    assert abs(est.mu - exact) < 1e-6
    degs = g.degrees()
    assert sum(degs) / g.n - 1e-9 <= est.mu <= max(degs) + 1e-9


@pytest.mark.parametrize("n", range(1, 17))
def test_closed_forms(n):
    assert abs(spectral_radius(clique(n)).mu - (n - 1)) < 1e-8
    if n >= 3:
        assert abs(spectral_radius(cycle(n)).mu - 2.0) < 1e-8
    for a in range(1, n):
        b = n - a
        assert abs(spectral_radius(complete_multipartite((a, b))).mu - math.sqrt(a * b)) < 1e-8


def test_spectral_radius_rejects():
    with pytest.raises(GraphError):
        spectral_radius(empty_graph(0))
    with pytest.raises(ValueError):
        spectral_radius(cycle(4), tol=0)
    assert spectral_radius(empty_graph(4)).mu == 0.0


@pytest.mark.parametrize("parts", [2, 3, 4])
def test_turan_radius_density(parts):
    mu = spectral_radius(turan(parts, 16)).mu
    assert abs(mu / 16 - (1 - 1 / parts)) < 0.05


def test_path_bound_examples():
    chk = check_path_bound(cycle(4), 3)
    assert (chk.paths, chk.half_walks) == (4, 8) and abs(chk.bound - 8) < 1e-9 and chk.holds
    chk = check_path_bound(clique(3), 3)
    assert (chk.paths, chk.half_walks) == (3, 6) and abs(chk.bound - 6) < 1e-9 and chk.holds
    for l in (3, 4, 5):
        chk = check_path_bound(empty_graph(5), l)
        assert chk.paths == 0 and chk.bound == 0 and chk.holds
    with pytest.raises(ValueError):
        path_spectral_bound(cycle(4), 2)


def test_one_step_walk_ratio_can_exceed_mu():
    # w(m+1) <= mu * w(m) fails on stars: w1 = 6, w2 = 12, mu = sqrt(3)
    g = star(3)
    mu = spectral_radius(g).mu
    assert walk_count(g, 2) > mu * walk_count(g, 1)


@settings(max_examples=60, deadline=None)
@given(graphs(min_n=1, max_n=8))
def test_walks_bounded_by_n_mu_power(g):
    mu = spectral_radius(g).mu
    for m in range(8):
        assert walk_count(g, m) <= g.n * mu**m * (1 + 1e-9) + 1e-9


@settings(max_examples=60, deadline=None)
@given(graphs(min_n=1, max_n=8))
def test_even_walk_ratio_bounded_by_mu_squared(g):
    # the valid multi-step form: w(m+2) <= mu^2 w(m) for even m
    mu = spectral_radius(g).mu
    for m in (0, 2, 4):
        assert walk_count(g, m + 2) <= mu**2 * walk_count(g, m) * (1 + 1e-9) + 1e-9


@pytest.mark.parametrize("n", range(3, 8))
def test_path_bound_over_all_graphs(n):
    for g in enumerate_graphs(n):
        for l in (3, 4, 5):
            paths = count_subgraph(path(l), g).copies if l <= n else 0
            assert 2 * paths <= walk_count(g, l - 1)
            assert check_path_bound(g, l).holds
