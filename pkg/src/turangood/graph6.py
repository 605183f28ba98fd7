"""graph6 codec restricted to graphs with at most 16 vertices."""

from __future__ import annotations

from pathlib import Path
from typing import Iterable, Iterator

from .graph import MAX_VERTICES, Graph, make_graph


class Graph6Error(ValueError):
    pass


HEADER = ">>graph6<<"


def write_graph6(g: Graph) -> str:
    n = g.n
    chars = [chr(63 + n)]
    acc = 0
    nbits = 0
    for j in range(1, n):
        row = g.adj[j]
        for i in range(j):
            acc = (acc << 1) | (row >> i & 1)
            nbits += 1
            if nbits == 6:
                chars.append(chr(63 + acc))
                acc = 0
                nbits = 0
    if nbits:
        chars.append(chr(63 + (acc << (6 - nbits))))
    return "".join(chars)


def parse_graph6(text: str) -> Graph:
    s = text.strip()
    if s.startswith(HEADER):
        s = s[len(HEADER):]
    if not s:
        raise Graph6Error("empty graph6 string")
    for pos, ch in enumerate(s):
        if not 63 <= ord(ch) <= 126:
            raise Graph6Error(f"byte {ord(ch)} out of range at offset {pos}")
    n = ord(s[0]) - 63
    if n == 63:
        raise Graph6Error(f"extended-size graph6 header not supported (n > {MAX_VERTICES})")
    if n > MAX_VERTICES:
        raise Graph6Error(f"graph has {n} vertices, more than {MAX_VERTICES}")
    nbits = n * (n - 1) // 2
    expected = 1 + (nbits + 5) // 6
    if len(s) != expected:
        raise Graph6Error(f"length {len(s)} does not match {expected} for n={n}")
    bits = []
    for ch in s[1:]:
        x = ord(ch) - 63
        bits.extend((x >> (5 - k)) & 1 for k in range(6))
    if any(bits[nbits:]):
        raise Graph6Error("nonzero padding bits")
    edges = []
    pos = 0
    for j in range(1, n):
        for i in range(j):
            if bits[pos]:
                edges.append((i, j))
            pos += 1
    return make_graph(n, edges)


def read_graph6_file(path: str | Path) -> Iterator[Graph]:
    with open(path, encoding="ascii") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line == HEADER:
                continue
            try:
                yield parse_graph6(line)
            except Graph6Error as exc:
                raise Graph6Error(f"{path}:{lineno}: {exc}") from None


def write_graph6_file(path: str | Path, graphs: Iterable[Graph]) -> None:
    with open(path, "w", encoding="ascii") as fh:
        for g in graphs:
            fh.write(write_graph6(g) + "\n")
