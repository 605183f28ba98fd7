"""Generalized Turán numbers: exact counting, exhaustive search and verification."""

__version__ = "0.1.0"

from .counting import (
    CountReport,
    copies_containing_edge,
    count_induced,
    count_subgraph,
    edges_in_triangles,
    multipartite_count,
    pair_count_slack,
    turan_c4_count,
    turan_clique_count,
    turan_p4_count,
)
from .families import ClassVector, FamilySpec, build, complete_multipartite, glue_h_prime, parse_family, turan
from .graph import (
    CanonicalForm,
    Edge,
    Graph,
    canonical_form,
    chromatic_number,
    color_critical_edges,
    induced_subgraph,
    is_isomorphic,
    make_graph,
)
from .graph6 import parse_graph6, write_graph6
from .search import (
    check_turan_good,
    enumerate_graphs,
    ex_generalized,
    find_k0,
    optimize_multipartite,
    vertex_move_delta,
)
from .spectral import check_path_bound, path_spectral_bound, spectral_radius, walk_count

