"""Small-graph kernel: bitmask graphs, canonical labeling, chromatic invariants.

Vertices are ``0..n-1`` with ``n <= 16``; ``adj[v]`` is the neighbor mask of ``v``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

MAX_VERTICES = 16


class GraphError(ValueError):
    """Invalid graph construction or argument."""


@dataclass(frozen=True)
class Edge:
    u: int
    v: int

    def __post_init__(self):
        if not 0 <= self.u < self.v:
            raise GraphError(f"edge endpoints must satisfy 0 <= u < v, got ({self.u}, {self.v})")

    def __iter__(self):
        yield self.u
        yield self.v


@dataclass(frozen=True)
class Graph:
    n: int
    adj: tuple[int, ...]

    def __post_init__(self):
        if not 0 <= self.n <= MAX_VERTICES:
            raise GraphError(f"vertex count {self.n} outside 0..{MAX_VERTICES}")
        if len(self.adj) != self.n:
            raise GraphError("adjacency length does not match n")
        full = (1 << self.n) - 1
        for v, mask in enumerate(self.adj):
            if mask & ~full:
                raise GraphError(f"vertex {v} has neighbors outside range")
            if mask >> v & 1:
                raise GraphError(f"loop at vertex {v}")
            m = mask
            while m:
                low = m & -m
                u = low.bit_length() - 1
                if not self.adj[u] >> v & 1:
                    raise GraphError(f"asymmetric adjacency between {v} and {u}")
                m ^= low

    @classmethod
    def from_edges(cls, n: int, edges: Iterable) -> "Graph":
        return make_graph(n, edges)

    @classmethod
    def trusted(cls, n: int, adj: tuple[int, ...]) -> "Graph":
        """Skip validation; ``adj`` must already satisfy the invariants."""
        g = object.__new__(cls)
        object.__setattr__(g, "n", n)
        object.__setattr__(g, "adj", adj)
        return g

    @property
    def num_edges(self) -> int:
        return sum(m.bit_count() for m in self.adj) // 2

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def degrees(self) -> list[int]:
        return [m.bit_count() for m in self.adj]

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def edges(self) -> list[Edge]:
        out = []
        for u in range(self.n):
            m = self.adj[u] >> (u + 1)
            v = u + 1
            while m:
                if m & 1:
                    out.append(Edge(u, v))
                m >>= 1
                v += 1
        return out

    def edge_tuples(self) -> list[tuple[int, int]]:
        return [(e.u, e.v) for e in self.edges()]

    def with_edge(self, u: int, v: int) -> "Graph":
        if u == v or self.has_edge(u, v):
            raise GraphError(f"cannot add edge ({u}, {v})")
        adj = list(self.adj)
        adj[u] |= 1 << v
        adj[v] |= 1 << u
        return Graph(self.n, tuple(adj))

    def without_edge(self, u: int, v: int) -> "Graph":
        if not self.has_edge(u, v):
            raise GraphError(f"({u}, {v}) is not an edge")
        adj = list(self.adj)
        adj[u] &= ~(1 << v)
        adj[v] &= ~(1 << u)
        return Graph(self.n, tuple(adj))

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Return the graph with vertex ``v`` renamed ``perm[v]``."""
        adj = [0] * self.n
        for v in range(self.n):
            m = self.adj[v]
            pv = perm[v]
            while m:
                low = m & -m
                adj[pv] |= 1 << perm[low.bit_length() - 1]
                m ^= low
        return Graph(self.n, tuple(adj))

    def disjoint_union(self, other: "Graph") -> "Graph":
        shift = self.n
        return Graph(self.n + other.n, self.adj + tuple(m << shift for m in other.adj))

    def __str__(self) -> str:
        return f"Graph(n={self.n}, m={self.num_edges})"


def make_graph(n: int, edges: Iterable) -> Graph:
    """Build a graph from an edge list of pairs (or :class:`Edge`)."""
    if not 0 <= n <= MAX_VERTICES:
        raise GraphError(f"vertex count {n} outside 0..{MAX_VERTICES}")
    adj = [0] * n
    for e in edges:
        u, v = e
        if u == v:
            raise GraphError(f"loop at vertex {u}")
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"edge ({u}, {v}) has an endpoint outside 0..{n - 1}")
        if adj[u] >> v & 1:
            raise GraphError(f"duplicate edge ({u}, {v})")
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    return Graph(n, tuple(adj))


def empty_graph(n: int) -> Graph:
    return Graph(n, (0,) * n)


def complete_graph(n: int) -> Graph:
    full = (1 << n) - 1
    return Graph(n, tuple(full & ~(1 << v) for v in range(n)))


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def induced_subgraph(g: Graph, subset: int) -> Graph:
    """Subgraph induced by the vertex mask ``subset``, relabeled in ascending order."""
    if subset >> g.n:
        raise GraphError("subset mask references vertices outside the graph")
    verts = list(iter_bits(subset))
    index = {v: i for i, v in enumerate(verts)}
    adj = []
    for v in verts:
        m = 0
        for u in iter_bits(g.adj[v] & subset):
            m |= 1 << index[u]
        adj.append(m)
    return Graph(len(verts), tuple(adj))


def delete_vertex(g: Graph, v: int) -> Graph:
    return induced_subgraph(g, ((1 << g.n) - 1) & ~(1 << v))


# ---------------------------------------------------------------------------
# Canonical labeling
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CanonicalForm:
    """Canonical certificate of a graph.

    ``bytes`` encodes ``n`` followed by the upper triangle (column-major, the
    graph6 bit order) of the relabeled graph; ``labeling[v]`` is the canonical
    position of input vertex ``v``.
    """

    bytes: bytes
    aut_count: int
    labeling: tuple[int, ...] = field(compare=False)

    @property
    def n(self) -> int:
        return self.bytes[0]

    def graph(self) -> Graph:
        n = self.n
        bits = int.from_bytes(self.bytes[1:], "big") if n > 1 else 0
        total = n * (n - 1) // 2
        edges = []
        pos = total - 1
        for j in range(1, n):
            for i in range(j):
                if bits >> pos & 1:
                    edges.append((i, j))
                pos -= 1
        return make_graph(n, edges)


def _neighbor_lists(g: Graph) -> list[list[int]]:
    return [list(iter_bits(m)) for m in g.adj]


def _refine(nbrs: list[list[int]], colors: Sequence[int]) -> tuple[int, ...]:
    # Equitable refinement; new colors are ranks of (old color, neighbor color multiset),
    # so the result is label-invariant and cell order is preserved.
    k = -1
    cur = colors
    while True:
        sigs = [(cur[v], tuple(sorted([cur[u] for u in nb]))) for v, nb in enumerate(nbrs)]
        distinct = sorted(set(sigs))
        if len(distinct) == k:
            return tuple(cur)
        rank = {s: i for i, s in enumerate(distinct)}
        cur = [rank[s] for s in sigs]
        k = len(distinct)


def _individualize(colors: Sequence[int], v: int) -> list[int]:
    cv = colors[v]
    return [2 * c + (1 if c == cv and u != v else 0) for u, c in enumerate(colors)]


def _target_cell(colors: Sequence[int]) -> list[int] | None:
    n = len(colors)
    counts = [0] * n
    for c in colors:
        counts[c] += 1
    for c in range(n):
        if counts[c] > 1:
            return [v for v in range(n) if colors[v] == c]
    return None


def _cell_signature(nbrs, colors) -> tuple:
    return tuple(sorted((colors[v], tuple(sorted(colors[u] for u in nb))) for v, nb in enumerate(nbrs)))


def _certificate(adj: Sequence[int], order: Sequence[int]) -> int:
    """Upper-triangle bit string (column-major) of the graph relabeled by ``order``."""
    bits = 0
    n = len(order)
    for j in range(1, n):
        row = adj[order[j]]
        for i in range(j):
            bits = (bits << 1) | (row >> order[i] & 1)
    return bits


def _extend_isomorphism(adj, nbrs, left: tuple[int, ...], right: tuple[int, ...]) -> bool:
    """Is there an automorphism whose refined partitions map ``left`` onto ``right``?"""
    if _cell_signature(nbrs, left) != _cell_signature(nbrs, right):
        return False
    cell = _target_cell(left)
    if cell is None:
        n = len(left)
        perm = [0] * n
        inv_right = [0] * n
        for v, c in enumerate(right):
            inv_right[c] = v
        for v, c in enumerate(left):
            perm[v] = inv_right[c]
        for v in range(n):
            image = 0
            for u in nbrs[v]:
                image |= 1 << perm[u]
            if image != adj[perm[v]]:
                return False
        return True
    x = cell[0]
    c = left[x]
    new_left = _refine(nbrs, _individualize(left, x))
    for y in range(len(right)):
        if right[y] != c:
            continue
        if _extend_isomorphism(adj, nbrs, new_left, _refine(nbrs, _individualize(right, y))):
            return True
    return False


def _orbits(adj, nbrs, colors, cell) -> list[list[int]]:
    """Orbits of the pointwise stabilizer of the current node acting on ``cell``."""
    refined = {w: _refine(nbrs, _individualize(colors, w)) for w in cell}
    orbits: list[list[int]] = []
    for w in cell:
        for orb in orbits:
            if _extend_isomorphism(adj, nbrs, refined[orb[0]], refined[w]):
                orb.append(w)
                break
        else:
            orbits.append([w])
    return orbits


def _canonical_search(g: Graph, colors: Sequence[int] | None = None):
    nbrs = _neighbor_lists(g)
    adj = g.adj
    start = _refine(nbrs, colors if colors is not None else [0] * g.n)
    best: list = [None, None]  # certificate, order
    aut = 1
    first_path = True

    def visit(part):
        nonlocal aut, first_path
        cell = _target_cell(part)
        if cell is None:
            order = [0] * len(part)
            for v, c in enumerate(part):
                order[c] = v
            cert = _certificate(adj, order)
            if best[0] is None or cert < best[0]:
                best[0], best[1] = cert, order
            first_path = False
            return
        orbits = _orbits(adj, nbrs, part, cell)
        if first_path:
            aut *= len(orbits[0])
        for orb in orbits:
            visit(_refine(nbrs, _individualize(part, orb[0])))

    visit(start)
    return best[0], best[1], aut


def canonical_form(g: Graph, colors: Sequence[int] | None = None) -> CanonicalForm:
    """Canonical certificate and automorphism group order.

    ``colors`` optionally gives an initial vertex coloring that relabelings
    must respect (used for rooted comparisons).
    """
    if g.n == 0:
        return CanonicalForm(bytes([0]), 1, ())
    cert, order, aut = _canonical_search(g, colors)
    nbytes = (g.n * (g.n - 1) // 2 + 7) // 8
    labeling = [0] * g.n
    for pos, v in enumerate(order):
        labeling[v] = pos
    return CanonicalForm(bytes([g.n]) + cert.to_bytes(nbytes, "big"), aut, tuple(labeling))


def canonical_graph(g: Graph) -> Graph:
    return canonical_form(g).graph()


def is_isomorphic(g1: Graph, g2: Graph) -> bool:
    if g1.n != g2.n or g1.num_edges != g2.num_edges:
        return False
    if sorted(g1.degrees()) != sorted(g2.degrees()):
        return False
    return canonical_form(g1).bytes == canonical_form(g2).bytes


def same_orbit(g: Graph, u: int, v: int) -> bool:
    """True iff some automorphism of ``g`` maps ``u`` to ``v``."""
    if u == v:
        return True
    nbrs = _neighbor_lists(g)
    base = _refine(nbrs, [0] * g.n)
    if base[u] != base[v]:
        return False
    return _extend_isomorphism(
        g.adj, nbrs, _refine(nbrs, _individualize(base, u)), _refine(nbrs, _individualize(base, v))
    )


# ---------------------------------------------------------------------------
# Cliques and coloring
# ---------------------------------------------------------------------------


def clique_number(g: Graph) -> int:
    best = 0

    def expand(size, cand):
        nonlocal best
        if not cand:
            best = max(best, size)
            return
        if size + cand.bit_count() <= best:
            return
        while cand:
            if size + cand.bit_count() <= best:
                return
            low = cand & -cand
            v = low.bit_length() - 1
            cand ^= low
            expand(size + 1, cand & g.adj[v])

    expand(0, (1 << g.n) - 1)
    return best


def is_k_colorable(g: Graph, k: int) -> bool:
    n = g.n
    if n == 0:
        return True
    if k <= 0:
        return False
    color = [-1] * n
    # per-vertex mask of colors used by neighbors
    forbidden = [0] * n
    full = (1 << k) - 1

    def pick():
        best, best_key = -1, None
        for v in range(n):
            if color[v] < 0:
                key = (forbidden[v].bit_count(), g.adj[v].bit_count())
                if best_key is None or key > best_key:
                    best, best_key = v, key
        return best

    def solve(colored, used):
        if colored == n:
            return True
        v = pick()
        options = full & ~forbidden[v]
        # symmetry break: at most one fresh color
        fresh = full & ~used
        if fresh:
            options &= used | (fresh & -fresh)
        while options:
            low = options & -options
            c = low.bit_length() - 1
            options ^= low
            color[v] = c
            changed = []
            for u in iter_bits(g.adj[v]):
                if color[u] < 0 and not forbidden[u] & low:
                    forbidden[u] |= low
                    changed.append(u)
            if solve(colored + 1, used | low):
                return True
            for u in changed:
                forbidden[u] &= ~low
            color[v] = -1
        return False

    return solve(0, 0)


def chromatic_number(g: Graph) -> int:
    """Exact chromatic number by backtracking, starting at the clique number."""
    if g.n == 0:
        return 0
    k = max(1, clique_number(g))
    while not is_k_colorable(g, k):
        k += 1
    return k


def color_critical_edges(g: Graph) -> list[Edge]:
    edges = g.edges()
    if not edges:
        raise GraphError("graph has no edges to classify")
    chi = chromatic_number(g)
    return [e for e in edges if chromatic_number(g.without_edge(e.u, e.v)) < chi]
