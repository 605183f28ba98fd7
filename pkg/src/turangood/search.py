"""Isomorph-free enumeration, generalized Turán numbers and multipartite optimization."""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence

from .counting import RootedContainment, contains, count_copies, multipartite_count, turan_count
from .families import ClassVector, as_graph, complete_multipartite, describe, turan, turan_sizes
from .graph import Graph, GraphError, canonical_form, chromatic_number, empty_graph, same_orbit
from .graph6 import parse_graph6, write_graph6

MAX_EXHAUSTIVE = 10
WITNESS_CAP = 64


class DegenerateError(ValueError):
    """``H`` contains ``F``, which the goodness definition excludes."""


# ---------------------------------------------------------------------------
# Pruners
# ---------------------------------------------------------------------------


class FFree:
    """Hereditary pruner keeping graphs with no copy of ``f``.

    ``accepts_child`` assumes the parent is already ``f``-free, so only copies
    through the new vertex need checking.
    """

    def __init__(self, f: Graph):
        self.f = f
        self._rooted = RootedContainment(f)

    def __call__(self, g: Graph) -> bool:
        return not contains(self.f, g)

    def accepts_child(self, g: Graph, v: int) -> bool:
        return not self._rooted.through(g, v)

    def __reduce__(self):
        return (FFree, (self.f,))


Pruner = Callable[[Graph], bool]


def _child_ok(pruner, g: Graph, v: int) -> bool:
    if pruner is None:
        return True
    rooted = getattr(pruner, "accepts_child", None)
    if rooted is not None:
        return rooted(g, v)
    return pruner(g)


# ---------------------------------------------------------------------------
# Canonical augmentation
# ---------------------------------------------------------------------------


def _vertex_invariant(adj: Sequence[int], v: int) -> tuple:
    m = adj[v]
    nd = []
    while m:
        low = m & -m
        nd.append(adj[low.bit_length() - 1].bit_count())
        m ^= low
    nd.sort()
    return (adj[v].bit_count(), tuple(nd))


def children(parent: Graph, pruner=None) -> list[Graph]:
    """Canonical children of ``parent`` (itself a canonical representative).

    A child ``parent + v`` is kept only if ``v`` lies in the automorphism orbit
    of the child's canonical deletion vertex: the maximum-invariant vertex with
    the smallest canonical label. Siblings are deduplicated by certificate.
    """
    m = parent.n
    if m + 1 > 16:
        raise GraphError("capacity exceeded")
    out: dict[bytes, Graph] = {}
    base = list(parent.adj) + [0]
    for mask in range(1 << m):
        adj = base[:]
        adj[m] = mask
        bit = 1 << m
        x = mask
        while x:
            low = x & -x
            adj[low.bit_length() - 1] |= bit
            x ^= low
        child = Graph.trusted(m + 1, tuple(adj))
        if not _child_ok(pruner, child, m):
            continue
        invs = [_vertex_invariant(adj, v) for v in range(m + 1)]
        top = max(invs)
        if invs[m] != top:
            continue
        cf = canonical_form(child)
        if cf.bytes in out:
            continue
        cands = [v for v in range(m + 1) if invs[v] == top]
        deletion = min(cands, key=lambda v: cf.labeling[v])
        if deletion != m and not same_orbit(child, m, deletion):
            continue
        out[cf.bytes] = cf.graph()
    return [out[k] for k in sorted(out)]


def _subtree(root: Graph, n: int, pruner) -> Iterator[Graph]:
    if root.n == n:
        yield root
        return
    for child in children(root, pruner):
        yield from _subtree(child, n, pruner)


def _level(n: int, pruner) -> list[Graph]:
    layer = [empty_graph(0)]
    for _ in range(n):
        layer = [c for g in layer for c in children(g, pruner)]
    return layer


def _check_n(n: int) -> None:
    if not 0 <= n <= MAX_EXHAUSTIVE:
        raise GraphError(f"exhaustive enumeration supports 0 <= n <= {MAX_EXHAUSTIVE}, got {n}")


def _split_level(n: int, jobs: int) -> int:
    return min(n, 2 if jobs <= 1 else max(2, min(n - 2, 6)))


def enumerate_graphs(n: int, pruner=None, jobs: int = 1) -> Iterator[Graph]:
    """One canonical representative per isomorphism class of ``n``-vertex graphs.

    ``pruner`` must be hereditary (closed under induced subgraphs); subtrees
    whose root fails it are discarded.
    """
    _check_n(n)
    if jobs <= 1:
        for root in _level(_split_level(n, jobs), pruner):
            yield from _subtree(root, n, pruner)
        return
    roots = _level(_split_level(n, jobs), pruner)
    tasks = [(write_graph6(r), n, pruner) for r in roots]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        for chunk in ex.map(_enumerate_task, tasks):
            for s in chunk:
                yield parse_graph6(s)


def _enumerate_task(args) -> list[str]:
    root, n, pruner = args
    return [write_graph6(g) for g in _subtree(parse_graph6(root), n, pruner)]


def count_classes(n: int, pruner=None, jobs: int = 1) -> int:
    return sum(1 for _ in enumerate_graphs(n, pruner, jobs))


# ---------------------------------------------------------------------------
# ex(n, H, F)
# ---------------------------------------------------------------------------


@dataclass
class _Accumulator:
    value: int = -1
    witnesses: list = field(default_factory=list)
    witness_count: int = 0
    searched: int = 0

    def add(self, g: Graph, copies: int, cap: int) -> None:
        self.searched += 1
        if copies < self.value:
            return
        if copies > self.value:
            self.value = copies
            self.witnesses = []
            self.witness_count = 0
        self.witness_count += 1
        self.witnesses.append(write_graph6(g))
        if len(self.witnesses) > 4 * cap:
            self.witnesses = sorted(self.witnesses)[:cap]

    def merge(self, other: "_Accumulator", cap: int) -> "_Accumulator":
        out = _Accumulator(searched=self.searched + other.searched)
        if self.value > other.value:
            best = [self]
        elif other.value > self.value:
            best = [other]
        else:
            best = [self, other]
        out.value = best[0].value
        out.witness_count = sum(b.witness_count for b in best)
        out.witnesses = sorted(w for b in best for w in b.witnesses)[:cap]
        return out

    def finish(self, cap: int) -> "_Accumulator":
        self.witnesses = sorted(self.witnesses)[:cap]
        return self


def _ex_task(args) -> _Accumulator:
    roots, n, h, pruner, cap = args
    acc = _Accumulator()
    for r in roots:
        for g in _subtree(parse_graph6(r), n, pruner):
            acc.add(g, count_copies(h, g), cap)
    return acc.finish(cap)


@dataclass(frozen=True)
class ExtremalRecord:
    n: int
    h_spec: str
    f_spec: str
    value: int
    witnesses: tuple[str, ...]
    witness_count: int
    turan_value: int | None
    turan_f_free: bool | None
    turan_is_extremal: bool | None
    unique_extremal: bool
    graphs_searched: int
    elapsed: float

    def summary(self) -> str:
        turan_part = "n/a" if self.turan_value is None else str(self.turan_value)
        return f"value={self.value} turan={turan_part} unique={str(self.unique_extremal).lower()}"


def ex_generalized(
    n: int,
    h: Graph | str,
    f: Graph | str,
    *,
    jobs: int = 1,
    allow_degenerate: bool = False,
    witness_cap: int = WITNESS_CAP,
) -> ExtremalRecord:
    """Maximum number of copies of ``h`` over all ``n``-vertex ``f``-free graphs."""
    _check_n(n)
    h_spec, f_spec = describe(h), describe(f)
    h, f = as_graph(h), as_graph(f)
    if h.n < 1:
        raise GraphError("H must have at least one vertex")
    if contains(f, h) and not allow_degenerate:
        raise DegenerateError(f"H={h_spec} contains F={f_spec}; the problem is degenerate")
    start = time.perf_counter()
    pruner = FFree(f)
    roots = [write_graph6(r) for r in _level(_split_level(n, jobs), pruner)]
    if jobs <= 1 or len(roots) <= 1:
        acc = _ex_task((roots, n, h, pruner, witness_cap))
    else:
        chunks = [roots[i::jobs] for i in range(jobs)]
        acc = _Accumulator()
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            for part in ex.map(_ex_task, [(c, n, h, pruner, witness_cap) for c in chunks]):
                acc = acc.merge(part, witness_cap)
    value = max(acc.value, 0)

    turan_value = turan_free = turan_extremal = None
    chi = chromatic_number(f)
    if chi >= 2 and n >= 1:
        r = min(chi - 1, n)
        t = turan(r, n)
        turan_free = not contains(f, t)
        turan_value = turan_count(h, r, n) if h.n <= n else 0
        turan_extremal = value == turan_value
    return ExtremalRecord(
        n=n,
        h_spec=h_spec,
        f_spec=f_spec,
        value=value,
        witnesses=tuple(acc.witnesses),
        witness_count=acc.witness_count,
        turan_value=turan_value,
        turan_f_free=turan_free,
        turan_is_extremal=turan_extremal,
        unique_extremal=acc.witness_count == 1,
        graphs_searched=acc.searched,
        elapsed=time.perf_counter() - start,
    )


@dataclass(frozen=True)
class GoodnessRow:
    n: int
    value: int
    turan_value: int
    equal: bool
    unique: bool


@dataclass(frozen=True)
class GoodnessVerdict:
    h_spec: str
    f_spec: str
    rows: tuple[GoodnessRow, ...]
    threshold: int | None

    @property
    def all_equal(self) -> bool:
        return all(r.equal for r in self.rows)


def goodness_threshold(rows: Sequence[GoodnessRow]) -> int | None:
    """Smallest ``n`` from which equality holds through the end of the range."""
    threshold = None
    for row in reversed(rows):
        if not row.equal:
            break
        threshold = row.n
    return threshold


def check_turan_good(h: Graph | str, f: Graph | str, n_lo: int, n_hi: int, *, jobs: int = 1) -> GoodnessVerdict:
    """Compare ``ex(n, H, F)`` with the Turán-graph count for each ``n`` in range.

    This only reports what happens inside the range; it says nothing about
    larger ``n``.
    """
    if n_lo > n_hi:
        raise ValueError("empty range")
    _check_n(n_hi)
    h_spec, f_spec = describe(h), describe(f)
    hg, fg = as_graph(h), as_graph(f)
    chi = chromatic_number(fg)
    if chi < 2:
        raise ValueError("F must have chromatic number at least 2")
    rows = []
    for n in range(n_lo, n_hi + 1):
        rec = ex_generalized(n, hg, fg, jobs=jobs)
        if not rec.turan_f_free:
            raise GraphError(f"T_{chi - 1}({n}) contains F; chromatic number misuse")
        rows.append(GoodnessRow(n, rec.value, rec.turan_value, rec.turan_is_extremal, rec.unique_extremal))
    return GoodnessVerdict(h_spec, f_spec, tuple(rows), goodness_threshold(rows))


# ---------------------------------------------------------------------------
# Complete multipartite optimization
# ---------------------------------------------------------------------------


def nonincreasing_compositions(n: int, r: int, cap: int | None = None) -> Iterator[tuple[int, ...]]:
    """Partitions of ``n`` into exactly ``r`` positive parts, listed nonincreasing."""
    if cap is None:
        cap = n
    if r == 0:
        if n == 0:
            yield ()
        return
    if n < r:
        return
    hi = min(cap, n - (r - 1))
    lo = -(-n // r)
    for first in range(hi, lo - 1, -1):
        for rest in nonincreasing_compositions(n - first, r - 1, first):
            yield (first,) + rest


@dataclass(frozen=True)
class MultipartiteOptimum:
    best: tuple[ClassVector, ...]
    value: int
    balanced_value: int
    balanced_is_optimal: bool

    def summary(self) -> str:
        vecs = " ".join(str(cv) for cv in self.best)
        return f"{vecs} value={self.value} balanced={str(self.balanced_is_optimal).lower()}"


def optimize_multipartite(h: Graph | str, r: int, n: int) -> MultipartiteOptimum:
    """Exact maximum of ``N(H, K_{a_1..a_r})`` over all ``r``-part class vectors of ``n``."""
    h = as_graph(h)
    chi = chromatic_number(h)
    if r < chi:
        raise ValueError(f"r={r} is below chi(H)={chi}; every count is zero")
    if n < r:
        raise ValueError(f"cannot split {n} vertices into {r} nonempty classes")
    best_value = -1
    best: list[ClassVector] = []
    for sizes in nonincreasing_compositions(n, r):
        value = multipartite_count(h, sizes)
        if value > best_value:
            best_value, best = value, [ClassVector(sizes)]
        elif value == best_value:
            best.append(ClassVector(sizes))
    balanced = multipartite_count(h, turan_sizes(r, n))
    return MultipartiteOptimum(tuple(best), best_value, balanced, balanced == best_value)


def vertex_move_delta(h: Graph | str, cv: ClassVector | Sequence[int], source: int, target: int) -> int:
    """Change in copies of ``H`` when one vertex moves from class ``source`` to ``target``.

    Emptying the source class is allowed; the class then simply disappears.
    """
    h = as_graph(h)
    sizes = list(cv.sizes if isinstance(cv, ClassVector) else cv)
    r = len(sizes)
    if not (0 <= source < r and 0 <= target < r) or source == target:
        raise IndexError(f"invalid move {source}->{target} for {r} classes")
    if sizes[source] < 1:
        raise ValueError("source class is empty")
    before = multipartite_count(h, sizes)
    sizes[source] -= 1
    sizes[target] += 1
    return multipartite_count(h, sizes) - before


@dataclass(frozen=True)
class K0Evidence:
    """Empirical k0: numerical evidence only, not a proof."""

    k0: int | None
    k_max: int
    probes: tuple[int, ...]
    balanced: dict  # (k, n) -> bool

    label = "EVIDENCE"

    def summary(self) -> str:
        found = "not found" if self.k0 is None else str(self.k0)
        return f"k0={found} ({self.label}, k<={self.k_max}, probes={list(self.probes)})"


def find_k0(h: Graph | str, k_max: int, probes: Iterable[int]) -> K0Evidence:
    """Smallest ``k <= k_max`` with the balanced vector optimal for all ``k' in [k, k_max]``."""
    h = as_graph(h)
    probes = tuple(sorted(set(probes)))
    chi = chromatic_number(h)
    table: dict[tuple[int, int], bool] = {}
    k0 = None
    for k in range(k_max, 1, -1):
        r = k - 1
        if r < chi:
            break
        ok = True
        for n in probes:
            if n < r:
                ok = False
                table[(k, n)] = False
                continue
            table[(k, n)] = optimize_multipartite(h, r, n).balanced_is_optimal
            ok = ok and table[(k, n)]
        if not ok:
            break
        k0 = k
    return K0Evidence(k0, k_max, probes, table)


def optimize_by_search(h: Graph | str, r: int, n: int) -> int:
    """Best count over complete ``r``-partite ``n``-vertex graphs via explicit hosts (n <= 16)."""
    h = as_graph(h)
    return max(count_copies(h, complete_multipartite(s)) for s in nonincreasing_compositions(n, r))
