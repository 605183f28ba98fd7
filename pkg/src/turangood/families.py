"""Named graph families and a tiny textual DSL for them.

Grammar (one family per string)::

    P<l> | C<l> | K<r> | S<t> | B<k> | F<k> | Mbar<k> | MbarP<k>
    | T(<r>,<n>) | M(<s1>,...,<sr>) | g6:<literal>

Vertex labelings are fixed:

* ``P<l>``: path ``0-1-...-(l-1)`` on ``l`` vertices; ``C<l>`` closes it with ``(l-1, 0)``.
* ``S<t>``: center 0, leaves ``1..t``.
* ``B<k>``: spine ``0-1``, page vertices ``2..k+1`` each joined to 0 and 1.
* ``F<k>``: center 0, triangles ``(0, 2i-1, 2i)`` for ``i = 1..k``.
* ``Mbar<k>``: ``K_{2k}`` minus the matching ``{2i, 2i+1}``; ``MbarP<k>`` restores ``{0, 1}``.
* ``T(r,n)`` and ``M(...)``: classes on consecutive labels, larger classes first for ``T``.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .graph import MAX_VERTICES, Graph, GraphError, complete_graph, iter_bits, make_graph
from .graph6 import Graph6Error, parse_graph6, write_graph6


class FamilyError(ValueError):
    """Bad family parameters or DSL syntax; ``offset`` points into the source text."""

    def __init__(self, message: str, offset: int | None = None):
        self.offset = offset
        if offset is not None:
            message = f"{message} (at offset {offset})"
        super().__init__(message)


class Kind(enum.Enum):
    PATH = "P"
    CYCLE = "C"
    CLIQUE = "K"
    STAR = "S"
    BOOK = "B"
    FAN = "F"
    MATCHING_COMPLEMENT = "Mbar"
    MATCHING_COMPLEMENT_PLUS = "MbarP"
    TURAN = "T"
    COMPLETE_MULTIPARTITE = "M"
    GRAPH6 = "g6"


@dataclass(frozen=True)
class FamilySpec:
    kind: Kind
    params: tuple = ()

    def __str__(self) -> str:
        if self.kind is Kind.GRAPH6:
            return f"g6:{self.params[0]}"
        if self.kind in (Kind.TURAN, Kind.COMPLETE_MULTIPARTITE):
            return f"{self.kind.value}({','.join(map(str, self.params))})"
        return f"{self.kind.value}{self.params[0]}"


@dataclass(frozen=True)
class ClassVector:
    sizes: tuple[int, ...]

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.sizes)
        object.__setattr__(self, "sizes", sizes)
        if not sizes:
            raise FamilyError("class vector needs at least one class")
        if any(s < 1 for s in sizes):
            raise FamilyError(f"class sizes must be positive, got {sizes}")

    @property
    def n(self) -> int:
        return sum(self.sizes)

    @property
    def r(self) -> int:
        return len(self.sizes)

    def sorted(self) -> "ClassVector":
        return ClassVector(tuple(sorted(self.sizes, reverse=True)))

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.sizes)) + ")"


def turan_sizes(r: int, n: int) -> tuple[int, ...]:
    q, rem = divmod(n, r)
    return tuple(q + 1 if i < rem else q for i in range(r))


def _check_capacity(n: int) -> None:
    if n > MAX_VERTICES:
        raise FamilyError(f"construction needs {n} vertices, capacity is {MAX_VERTICES}")


def complete_multipartite(cv: ClassVector | Sequence[int]) -> Graph:
    if not isinstance(cv, ClassVector):
        cv = ClassVector(tuple(cv))
    _check_capacity(cv.n)
    n = cv.n
    full = (1 << n) - 1
    adj = [0] * n
    start = 0
    for s in cv.sizes:
        block = ((1 << s) - 1) << start
        for v in range(start, start + s):
            adj[v] = full & ~block
        start += s
    return Graph(n, tuple(adj))


def turan(r: int, n: int) -> Graph:
    """Turán graph ``T_r(n)``: the first ``n mod r`` classes get the extra vertex."""
    if r < 1 or n < r:
        raise FamilyError(f"turan needs 1 <= r <= n, got r={r}, n={n}")
    _check_capacity(n)
    return complete_multipartite(ClassVector(turan_sizes(r, n)))


def path(l: int) -> Graph:
    if l < 1:
        raise FamilyError("path needs at least 1 vertex")
    _check_capacity(l)
    return make_graph(l, [(i, i + 1) for i in range(l - 1)])


def cycle(l: int) -> Graph:
    if l < 3:
        raise FamilyError("cycle needs at least 3 vertices")
    _check_capacity(l)
    return make_graph(l, [(i, i + 1) for i in range(l - 1)] + [(0, l - 1)])


def clique(r: int) -> Graph:
    if r < 1:
        raise FamilyError("clique needs at least 1 vertex")
    _check_capacity(r)
    return complete_graph(r)


def star(t: int) -> Graph:
    if t < 1:
        raise FamilyError("star needs at least 1 leaf")
    _check_capacity(t + 1)
    return make_graph(t + 1, [(0, i) for i in range(1, t + 1)])


def book(k: int) -> Graph:
    if k < 1:
        raise FamilyError("book needs at least 1 page")
    _check_capacity(k + 2)
    edges = [(0, 1)]
    for p in range(2, k + 2):
        edges += [(0, p), (1, p)]
    return make_graph(k + 2, edges)


def fan(k: int) -> Graph:
    if k < 1:
        raise FamilyError("fan needs at least 1 triangle")
    _check_capacity(2 * k + 1)
    edges = []
    for i in range(1, k + 1):
        a, b = 2 * i - 1, 2 * i
        edges += [(0, a), (0, b), (a, b)]
    return make_graph(2 * k + 1, edges)


def matching_complement(k: int, plus: bool = False) -> Graph:
    if k < 1:
        raise FamilyError("matching complement needs k >= 1")
    n = 2 * k
    _check_capacity(n)
    edges = [
        (u, v)
        for u in range(n)
        for v in range(u + 1, n)
        if not (u // 2 == v // 2) or (plus and (u, v) == (0, 1))
    ]
    return make_graph(n, edges)


def build(spec: FamilySpec | str) -> Graph:
    if isinstance(spec, str):
        spec = parse_family(spec)
    kind, p = spec.kind, spec.params
    if kind is Kind.PATH:
        return path(p[0])
    if kind is Kind.CYCLE:
        return cycle(p[0])
    if kind is Kind.CLIQUE:
        return clique(p[0])
    if kind is Kind.STAR:
        return star(p[0])
    if kind is Kind.BOOK:
        return book(p[0])
    if kind is Kind.FAN:
        return fan(p[0])
    if kind is Kind.MATCHING_COMPLEMENT:
        return matching_complement(p[0])
    if kind is Kind.MATCHING_COMPLEMENT_PLUS:
        return matching_complement(p[0], plus=True)
    if kind is Kind.TURAN:
        return turan(p[0], p[1])
    if kind is Kind.COMPLETE_MULTIPARTITE:
        return complete_multipartite(ClassVector(p))
    if kind is Kind.GRAPH6:
        try:
            return parse_graph6(p[0])
        except (Graph6Error, GraphError) as exc:
            raise FamilyError(f"bad graph6 literal: {exc}") from None
    raise FamilyError(f"unknown family kind {kind}")


def family_graph(text: str) -> Graph:
    return build(parse_family(text))


def as_graph(x: Graph | str | FamilySpec) -> Graph:
    if isinstance(x, Graph):
        return x
    return build(x)


def describe(x: Graph | str | FamilySpec) -> str:
    """Family string for ``x``; bare graphs are written as graph6 literals."""
    if isinstance(x, Graph):
        return "g6:" + write_graph6(x)
    return str(x).strip()


# ---------------------------------------------------------------------------
# DSL parser
# ---------------------------------------------------------------------------

_INT = re.compile(r"\d+")
_SINGLE = [  # longest prefix first
    ("MbarP", Kind.MATCHING_COMPLEMENT_PLUS),
    ("Mbar", Kind.MATCHING_COMPLEMENT),
    ("P", Kind.PATH),
    ("C", Kind.CYCLE),
    ("K", Kind.CLIQUE),
    ("S", Kind.STAR),
    ("B", Kind.BOOK),
    ("F", Kind.FAN),
]


def _int_at(text: str, pos: int) -> tuple[int, int]:
    m = _INT.match(text, pos)
    if not m:
        raise FamilyError("expected an integer", pos)
    return int(m.group()), m.end()


def _int_list(text: str, pos: int) -> tuple[list[int], int]:
    if pos >= len(text) or text[pos] != "(":
        raise FamilyError("expected '('", pos)
    pos += 1
    values = []
    while True:
        value, pos = _int_at(text, pos)
        values.append(value)
        if pos < len(text) and text[pos] == ",":
            pos += 1
            continue
        if pos < len(text) and text[pos] == ")":
            return values, pos + 1
        raise FamilyError("expected ',' or ')'", pos)


def parse_family(text: str) -> FamilySpec:
    """Parse a family string; errors carry the offending offset."""
    src = text.strip()
    if not src:
        raise FamilyError("empty family string", 0)
    if src.startswith("g6:"):
        literal = src[3:]
        if not literal:
            raise FamilyError("missing graph6 literal", 3)
        spec = FamilySpec(Kind.GRAPH6, (literal,))
        build(spec)
        return spec
    if src[0] in "TM" and src[1:2] == "(":
        values, end = _int_list(src, 1)
        if end != len(src):
            raise FamilyError("trailing characters", end)
        if src[0] == "T":
            if len(values) != 2:
                raise FamilyError("T(r,n) takes exactly two integers", 1)
            r, n = values
            if not 1 <= r <= n:
                raise FamilyError(f"T(r,n) needs 1 <= r <= n, got ({r},{n})", 2)
            if n > MAX_VERTICES:
                raise FamilyError(f"T(r,n) exceeds capacity {MAX_VERTICES}", 2)
            return FamilySpec(Kind.TURAN, (r, n))
        if any(v < 1 for v in values):
            raise FamilyError("class sizes must be positive", 2)
        if sum(values) > MAX_VERTICES:
            raise FamilyError(f"M(...) exceeds capacity {MAX_VERTICES}", 2)
        return FamilySpec(Kind.COMPLETE_MULTIPARTITE, tuple(values))
    for prefix, kind in _SINGLE:
        if src.startswith(prefix) and src[len(prefix):len(prefix) + 1].isdigit():
            value, end = _int_at(src, len(prefix))
            if end != len(src):
                raise FamilyError("trailing characters", end)
            spec = FamilySpec(kind, (value,))
            try:
                build(spec)
            except FamilyError as exc:
                raise FamilyError(str(exc), len(prefix)) from None
            return spec
    raise FamilyError(f"unknown family {src!r}", 0)


# ---------------------------------------------------------------------------
# Clique gluing
# ---------------------------------------------------------------------------


def glue_h_prime(h: Graph, clique_mask: int, k: int, pattern: Iterable[tuple[int, int]]) -> Graph:
    """Attach a disjoint ``K_{k-1}`` to ``h`` and join it to the clique ``clique_mask``.

    ``pattern`` lists pairs ``(x, j)`` with ``x`` a vertex of the clique and
    ``j`` in ``0..k-2`` indexing the new clique, whose vertices are labeled
    ``h.n + j``.
    """
    if k < 2:
        raise FamilyError("k must be at least 2")
    if clique_mask >> h.n:
        raise FamilyError("clique mask references vertices outside H")
    for v in iter_bits(clique_mask):
        if (clique_mask & ~(1 << v)) & ~h.adj[v]:
            raise FamilyError("the chosen vertex set is not a clique of H")
    size = h.n + k - 1
    _check_capacity(size)
    g = h.disjoint_union(complete_graph(k - 1))
    adj = list(g.adj)
    seen = set()
    for x, j in pattern:
        if not clique_mask >> x & 1:
            raise FamilyError(f"pattern vertex {x} is not in the chosen clique")
        if not 0 <= j < k - 1:
            raise FamilyError(f"pattern index {j} outside the new clique")
        if (x, j) in seen:
            raise FamilyError(f"duplicate pattern pair ({x}, {j})")
        seen.add((x, j))
        w = h.n + j
        adj[x] |= 1 << w
        adj[w] |= 1 << x
    return Graph(size, tuple(adj))


def turan_plus_edge(r: int, n: int) -> Graph:
    """``T_r(n)`` with one extra edge inside the first (largest) class."""
    sizes = turan_sizes(r, n)
    if sizes[0] < 2:
        raise FamilyError(f"T({r},{n}) has no class with two vertices")
    return turan(r, n).with_edge(0, 1)
