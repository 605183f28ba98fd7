"""Exact subgraph counting: backtracking embeddings and closed forms for multipartite hosts."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Sequence

from .families import ClassVector, clique, path, turan_sizes
from .graph import Edge, Graph, GraphError, canonical_form, iter_bits, same_orbit


@dataclass(frozen=True)
class CountReport:
    copies: int
    embeddings: int
    aut: int

    def __post_init__(self):
        if self.embeddings != self.copies * self.aut:
            raise ArithmeticError("embeddings must equal copies * aut")


def _search_order(h: Graph, first: int | None = None) -> list[int]:
    """Connectivity-respecting order: most already-placed neighbors first, then degree."""
    order: list[int] = []
    placed = 0
    remaining = set(range(h.n))
    while remaining:
        if first is not None and not order:
            v = first
        else:
            v = max(
                remaining,
                key=lambda u: ((h.adj[u] & placed).bit_count(), h.adj[u].bit_count(), -u),
            )
        order.append(v)
        placed |= 1 << v
        remaining.discard(v)
    return order


class _Plan:
    """Precomputed backtracking plan for embedding a pattern into hosts."""

    __slots__ = ("order", "back_nbrs", "back_non", "degrees", "size")

    def __init__(self, h: Graph, induced: bool = False, first: int | None = None):
        self.order = _search_order(h, first)
        pos = {v: i for i, v in enumerate(self.order)}
        self.size = h.n
        self.back_nbrs = []
        self.back_non = []
        self.degrees = []
        for i, v in enumerate(self.order):
            self.back_nbrs.append([pos[u] for u in iter_bits(h.adj[v]) if pos[u] < i])
            if induced:
                self.back_non.append([j for j in range(i) if not h.adj[v] >> self.order[j] & 1])
            else:
                self.back_non.append([])
            self.degrees.append(h.adj[v].bit_count())


def _degree_masks(g: Graph) -> list[int]:
    masks = [0] * (g.n + 1)
    for v in range(g.n):
        d = g.adj[v].bit_count()
        for t in range(d + 1):
            masks[t] |= 1 << v
    return masks


def _count(plan: _Plan, g: Graph, fixed: Sequence[int] = (), stop_at_one: bool = False) -> int:
    m = plan.size
    if m == 0:
        return 1
    if m > g.n:
        return 0
    adj = g.adj
    degmask = _degree_masks(g)
    allowed = []
    for d in plan.degrees:
        allowed.append(degmask[d] if d <= g.n else 0)
    image = [0] * m
    back_nbrs = plan.back_nbrs
    back_non = plan.back_non
    last = m - 1

    def rec(i: int, used: int) -> int:
        cand = allowed[i] & ~used
        for j in back_nbrs[i]:
            cand &= adj[image[j]]
        for j in back_non[i]:
            cand &= ~adj[image[j]]
        if i < len(fixed):
            cand &= 1 << fixed[i]
        if i == last:
            return cand.bit_count()
        total = 0
        while cand:
            low = cand & -cand
            image[i] = low.bit_length() - 1
            total += rec(i + 1, used | low)
            if stop_at_one and total:
                return total
            cand ^= low
        return total

    return rec(0, 0)


def count_embeddings(h: Graph, g: Graph, induced: bool = False) -> int:
    """Injective maps ``V(h) -> V(g)`` preserving edges (and non-edges when ``induced``)."""
    return _count(_Plan(h, induced), g)


@lru_cache(maxsize=4096)
def aut_order(h: Graph) -> int:
    return canonical_form(h).aut_count


def count_subgraph(h: Graph, g: Graph) -> CountReport:
    """Unlabeled (not necessarily induced) copies of ``h`` in ``g``."""
    if h.n < 1:
        raise GraphError("pattern must have at least one vertex")
    emb = count_embeddings(h, g)
    aut = aut_order(h)
    copies, rem = divmod(emb, aut)
    if rem:
        raise ArithmeticError(f"embedding count {emb} not divisible by |Aut(H)| = {aut}")
    return CountReport(copies, emb, aut)


def count_copies(h: Graph, g: Graph) -> int:
    return count_subgraph(h, g).copies


def count_induced(h: Graph, g: Graph) -> int:
    if h.n < 1:
        raise GraphError("pattern must have at least one vertex")
    emb = count_embeddings(h, g, induced=True)
    copies, rem = divmod(emb, aut_order(h))
    if rem:
        raise ArithmeticError("induced embedding count not divisible by |Aut(H)|")
    return copies


def contains(f: Graph, g: Graph) -> bool:
    """Does ``g`` contain ``f`` as a (not necessarily induced) subgraph?"""
    if f.n > g.n or f.num_edges > g.num_edges:
        return False
    return _count(_Plan(f), g, stop_at_one=True) > 0


class RootedContainment:
    """Tests whether a copy of ``f`` passes through a given host vertex.

    Used by the enumerator: a child graph built from an ``f``-free parent can
    only contain ``f`` through the newly added vertex.
    """

    def __init__(self, f: Graph):
        self.f = f
        self.m = f.num_edges
        reps = []
        for v in range(f.n):
            if not any(same_orbit(f, v, r) for r in reps):
                reps.append(v)
        self.plans = [_Plan(f, first=v) for v in reps]

    def through(self, g: Graph, v: int) -> bool:
        if self.f.n > g.n or self.m > g.num_edges:
            return False
        for plan in self.plans:
            if _count(plan, g, fixed=(v,), stop_at_one=True):
                return True
        return False


def copies_containing_edge(h: Graph, g: Graph, e: Edge | tuple[int, int]) -> int:
    u, v = e
    if not g.has_edge(u, v):
        raise GraphError(f"({u}, {v}) is not an edge of the host")
    return count_copies(h, g) - count_copies(h, g.without_edge(u, v))


def edges_in_triangles(g: Graph) -> int:
    return sum(1 for e in g.edges() if g.adj[e.u] & g.adj[e.v])


def pair_count_slack(g: Graph) -> int:
    """``|E|(n-2) - 2 * induced P3 - 3 * triangles``; zero on complete multipartite graphs."""
    if g.n < 3:
        raise GraphError("pair count needs at least 3 vertices")
    return g.num_edges * (g.n - 2) - 2 * count_induced(path(3), g) - 3 * count_copies(clique(3), g)


# ---------------------------------------------------------------------------
# Complete multipartite hosts
# ---------------------------------------------------------------------------


def falling_factorial(x: int, k: int) -> int:
    out = 1
    for i in range(k):
        out *= x - i
    return out


@lru_cache(maxsize=1024)
def independent_partitions(h: Graph) -> dict[tuple[int, ...], int]:
    """Set partitions of ``V(h)`` into independent blocks, tallied by sorted block sizes."""
    tally: dict[tuple[int, ...], int] = {}
    n = h.n
    adj = h.adj

    def rec(v: int, blocks: list[int]) -> None:
        if v == n:
            key = tuple(sorted((b.bit_count() for b in blocks), reverse=True))
            tally[key] = tally.get(key, 0) + 1
            return
        bit = 1 << v
        for i, b in enumerate(blocks):
            if not adj[v] & b:
                blocks[i] = b | bit
                rec(v + 1, blocks)
                blocks[i] = b
        blocks.append(bit)
        rec(v + 1, blocks)
        blocks.pop()

    rec(0, [])
    return tally


def _injective_assignments(block_sizes: tuple[int, ...], sizes: Sequence[int]) -> int:
    """Sum over injective block->class maps of the product of falling factorials."""
    b = len(block_sizes)
    if b > len(sizes):
        return 0
    full = (1 << b) - 1
    dp = {0: 1}
    for s in sizes:
        nxt = dict(dp)
        for mask, val in dp.items():
            free = full & ~mask
            while free:
                low = free & -free
                j = low.bit_length() - 1
                free ^= low
                w = falling_factorial(s, block_sizes[j])
                if w:
                    nxt[mask | low] = nxt.get(mask | low, 0) + val * w
        dp = nxt
    return dp.get(full, 0)


def multipartite_embeddings(h: Graph, sizes: Sequence[int]) -> int:
    total = 0
    for block_sizes, mult in independent_partitions(h).items():
        total += mult * _injective_assignments(block_sizes, sizes)
    return total


def multipartite_count(h: Graph, cv: ClassVector | Sequence[int]) -> int:
    """Copies of ``h`` in the complete multipartite graph with the given class sizes.

    Pure arithmetic, so class sizes may exceed the 16-vertex kernel. Zero-size
    classes are tolerated and contribute nothing.
    """
    sizes = cv.sizes if isinstance(cv, ClassVector) else tuple(cv)
    if h.n == 0:
        return 1
    emb = multipartite_embeddings(h, sizes)
    copies, rem = divmod(emb, aut_order(h))
    if rem:
        raise ArithmeticError("multipartite embedding count not divisible by |Aut(H)|")
    return copies


def turan_count(h: Graph, r: int, n: int) -> int:
    """Copies of ``h`` in ``T_r(n)`` (``K_n`` when ``n < r``)."""
    return multipartite_count(h, turan_sizes(min(r, n), n)) if n else 0


def turan_clique_count(r: int, k: int, n: int) -> int:
    """Copies of ``K_r`` in ``T_{k-1}(n)``."""
    if r >= k:
        raise ValueError(f"clique size r={r} must be smaller than k={k}")
    if r < 1:
        raise ValueError("r must be positive")
    if n < k - 1:
        return comb(n, r)
    sizes = turan_sizes(k - 1, n)
    e = [1] + [0] * r  # elementary symmetric polynomials
    for s in sizes:
        for j in range(r, 0, -1):
            e[j] += e[j - 1] * s
    return e[r]


def turan_clique_bound(r: int, k: int, n: int) -> int:
    q = -(-n // (k - 1))
    return comb(k - 1, r) * q ** r


def turan_p4_count(n: int) -> int:
    if n < 4:
        return 0
    return (n * n // 4) * (n // 2 - 1) * (-(-n // 2) - 1)


def turan_p4_per_edge(n: int) -> int:
    if n < 4:
        return 0
    return 3 * (n // 2 - 1) * (-(-n // 2) - 1)


def turan_c4_count(n: int) -> int:
    if n < 4:
        return 0
    return (n * n // 4) * ((n - 2) ** 2 // 4) // 4
