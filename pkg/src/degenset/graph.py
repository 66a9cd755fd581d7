"""Graphs, instances and the text formats they are read from.

Vertices are the dense indices ``0..n-1``. All weights are
:class:`fractions.Fraction` so that bound values compare exactly.
"""

from __future__ import annotations

import numbers
import re
import warnings
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import lcm
from typing import Iterable, Sequence

Rational = Fraction

GRAPH6_MAX_N = 62
_RATIONAL_RE = re.compile(r"^[+-]?\d+(/\d+)?$")


class GraphFormatError(ValueError):
    """Malformed graph or profile text. ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class InstanceError(ValueError):
    """A weight or capacity profile violates the instance constraints."""

    def __init__(self, message: str, vertex: int | None = None):
        self.vertex = vertex
        super().__init__(message)


class DuplicateEdgeWarning(UserWarning):
    def __init__(self, count: int):
        self.count = count
        super().__init__(f"{count} duplicate edge line(s) collapsed")


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices ``0..n-1`` with sorted adjacency lists."""

    n: int
    adjacency: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.adjacency) != self.n:
            raise GraphFormatError(f"adjacency has {len(self.adjacency)} rows for n={self.n}")
        for u, nbrs in enumerate(self.adjacency):
            if list(nbrs) != sorted(set(nbrs)):
                raise GraphFormatError(f"adjacency of {u} is not sorted and duplicate free")
            for v in nbrs:
                if not 0 <= v < self.n:
                    raise GraphFormatError(f"neighbour {v} of {u} out of range")
                if v == u:
                    raise GraphFormatError(f"self-loop at {u}")
                if u not in self.adjacency[v]:
                    raise GraphFormatError(f"edge {u}-{v} is not symmetric")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> Graph:
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphFormatError(f"edge {u}-{v} out of range for n={n}")
            if u == v:
                raise GraphFormatError(f"self-loop at {u}")
            nbrs[u].add(v)
            nbrs[v].add(u)
        return cls(n, tuple(tuple(sorted(s)) for s in nbrs))

    @classmethod
    def from_masks(cls, masks: Sequence[int]) -> Graph:
        n = len(masks)
        adjacency = tuple(
            tuple(v for v in range(n) if (int(masks[u]) >> v) & 1) for u in range(n)
        )
        return cls(n, adjacency)

    @classmethod
    def empty(cls, n: int) -> Graph:
        return cls(n, tuple(() for _ in range(n)))

    @classmethod
    def complete(cls, n: int) -> Graph:
        return cls(n, tuple(tuple(v for v in range(n) if v != u) for u in range(n)))

    @classmethod
    def path(cls, n: int) -> Graph:
        return cls.from_edges(n, ((i, i + 1) for i in range(n - 1)))

    @classmethod
    def star(cls, leaves: int) -> Graph:
        return cls.from_edges(leaves + 1, ((0, i) for i in range(1, leaves + 1)))

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(len(nbrs) for nbrs in self.adjacency)

    @cached_property
    def m(self) -> int:
        return sum(self.degrees) // 2

    @cached_property
    def masks(self) -> tuple[int, ...]:
        return tuple(sum(1 << v for v in nbrs) for nbrs in self.adjacency)

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.adjacency[u] if u < v]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adjacency[u]

    def is_clique(self) -> bool:
        return all(d == self.n - 1 for d in self.degrees)

    def induced(self, keep: Sequence[int]) -> Graph:
        """Subgraph induced by ``keep``; vertex ``keep[i]`` becomes ``i``."""
        index = {v: i for i, v in enumerate(keep)}
        return Graph(
            len(keep),
            tuple(tuple(sorted(index[w] for w in self.adjacency[v] if w in index)) for v in keep),
        )


def check_vertex(g: Graph, u) -> int:
    if isinstance(u, bool) or not isinstance(u, int) or not 0 <= u < g.n:
        raise InstanceError(f"vertex {u!r} is not in 0..{g.n - 1}")
    return u


@dataclass(frozen=True)
class Instance:
    """A graph with weights ``c > 0`` and capacities ``0 <= kappa <= d``."""

    graph: Graph
    c: tuple[Fraction, ...]
    kappa: tuple[int, ...]

    def __post_init__(self):
        g = self.graph
        if len(self.c) != g.n or len(self.kappa) != g.n:
            raise InstanceError(
                f"profiles must have length n={g.n} (got c: {len(self.c)}, kappa: {len(self.kappa)})"
            )
        for u, (cu, ku) in enumerate(zip(self.c, self.kappa)):
            if cu <= 0:
                raise InstanceError(f"nonpositive weight c({u})={cu}", vertex=u)
            if ku < 0:
                raise InstanceError(f"negative capacity kappa({u})={ku}", vertex=u)
            if ku > g.degrees[u]:
                raise InstanceError(f"kappa({u})={ku} > d({u})={g.degrees[u]}", vertex=u)

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def degrees(self) -> tuple[int, ...]:
        return self.graph.degrees

    def weight(self, vertices: Iterable[int]) -> Fraction:
        return sum((self.c[u] for u in vertices), Fraction(0))

    def total_weight(self) -> Fraction:
        return self.weight(range(self.n))

    def restrict(self, keep: Sequence[int], kappa: Sequence[int] | None = None) -> Instance:
        """Instance on the induced subgraph; ``kappa`` overrides the restricted capacities."""
        if kappa is None:
            kappa = [self.kappa[v] for v in keep]
        return Instance(self.graph.induced(keep), tuple(self.c[v] for v in keep), tuple(kappa))


def parse_rational(text: str) -> Fraction:
    """Parse an integer or ``p/q`` string into an exact fraction."""
    text = str(text).strip()
    if not _RATIONAL_RE.match(text):
        raise ValueError(f"not an integer or p/q fraction: {text!r}")
    num, _, den = text.partition("/")
    if den and int(den) == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(int(num), int(den) if den else 1)


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def as_rational(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, numbers.Rational) and not isinstance(value, bool):
        return Fraction(int(value.numerator), int(value.denominator))
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"weights must be int, Fraction or 'p/q' strings, got {type(value).__name__}")


def validate_instance(g: Graph, c=None, kappa=None) -> Instance:
    """Build an :class:`Instance`, defaulting to ``c = 1`` and ``kappa = 0``.

    Raises :class:`InstanceError` naming the offending vertex.
    """
    c = [Fraction(1)] * g.n if c is None else [as_rational(x) for x in c]
    kappa = [0] * g.n if kappa is None else [int(k) for k in kappa]
    return Instance(g, tuple(c), tuple(kappa))


def scale_to_integers(values: Sequence[Fraction]) -> tuple[list[int], int]:
    """Return integers ``a`` and a denominator ``D`` with ``values[i] == a[i] / D``."""
    den = lcm(1, *(Fraction(x).denominator for x in values))
    return [int(Fraction(x) * den) for x in values], den


def components(g: Graph) -> list[list[int]]:
    """Connected components, each sorted, ordered by smallest vertex."""
    seen = [False] * g.n
    blocks = []
    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = True
        block = [s]
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v in g.adjacency[u]:
                if not seen[v]:
                    seen[v] = True
                    block.append(v)
                    queue.append(v)
        blocks.append(sorted(block))
    return blocks


def is_connected(g: Graph) -> bool:
    return len(components(g)) <= 1


# -- edge lists ---------------------------------------------------------------

def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield lineno, line


def parse_edge_list(text: str) -> Graph:
    """Parse the ``n m`` header plus ``m`` lines of ``u v``.

    Duplicate edges are collapsed and reported with a single
    :class:`DuplicateEdgeWarning`.
    """
    lines = _content_lines(text)
    try:
        lineno, header = next(lines)
    except StopIteration:
        raise GraphFormatError("missing 'n m' header") from None
    parts = header.split()
    if len(parts) != 2 or not all(p.isdigit() for p in parts):
        raise GraphFormatError(f"expected header 'n m', got {header!r}", lineno)
    n, m = int(parts[0]), int(parts[1])
    edges: set[tuple[int, int]] = set()
    duplicates = 0
    seen_lines = 0
    for lineno, line in lines:
        seen_lines += 1
        if seen_lines > m:
            raise GraphFormatError(f"more than the declared {m} edge lines", lineno)
        parts = line.split()
        if len(parts) != 2:
            raise GraphFormatError(f"expected 'u v', got {line!r}", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError(f"non-integer vertex in {line!r}", lineno) from None
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(f"vertex index out of range 0..{n - 1} in {line!r}", lineno)
        if u == v:
            raise GraphFormatError(f"self-loop at vertex {u}", lineno)
        key = (min(u, v), max(u, v))
        if key in edges:
            duplicates += 1
        edges.add(key)
    if seen_lines < m:
        raise GraphFormatError(f"header declares {m} edges but only {seen_lines} edge lines follow")
    if duplicates:
        warnings.warn(DuplicateEdgeWarning(duplicates), stacklevel=2)
    return Graph.from_edges(n, sorted(edges))


def format_edge_list(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"] + [f"{u} {v}" for u, v in g.edges()]
    return "\n".join(lines) + "\n"


def parse_profile_file(text: str, n: int) -> tuple[list[Fraction], list[int]]:
    """Read ``v c [kappa]`` lines; absent vertices get ``c = 1`` and ``kappa = 0``."""
    c = [Fraction(1)] * n
    kappa = [0] * n
    for lineno, line in _content_lines(text):
        parts = line.split()
        if len(parts) not in (2, 3):
            raise GraphFormatError(f"expected 'v c kappa', got {line!r}", lineno)
        try:
            v = int(parts[0])
            cv = parse_rational(parts[1])
            kv = int(parts[2]) if len(parts) == 3 else 0
        except ValueError as exc:
            raise GraphFormatError(str(exc), lineno) from None
        if not 0 <= v < n:
            raise GraphFormatError(f"vertex {v} out of range 0..{n - 1}", lineno)
        c[v] = cv
        kappa[v] = kv
    return c, kappa


def format_profile_file(inst: Instance) -> str:
    return "".join(f"{u} {format_rational(inst.c[u])} {inst.kappa[u]}\n" for u in range(inst.n))


# -- graph6 -------------------------------------------------------------------

def _pairs(n: int):
    for j in range(1, n):
        for i in range(j):
            yield i, j


def parse_graph6(line: str | bytes) -> Graph:
    """Decode one graph6 word (n <= 62)."""
    if isinstance(line, bytes):
        line = line.decode("ascii", errors="replace")
    word = line.strip()
    if word.startswith(">>graph6<<"):
        word = word[len(">>graph6<<"):]
    if not word:
        raise GraphFormatError("empty graph6 word")
    for ch in word:
        if not 63 <= ord(ch) <= 126:
            raise GraphFormatError(f"non-printable or out-of-range graph6 byte {ch!r}")
    n = ord(word[0]) - 63
    if n > GRAPH6_MAX_N:
        raise GraphFormatError("graph6 words with n >= 63 are not supported")
    npairs = n * (n - 1) // 2
    expected = (npairs + 5) // 6
    body = word[1:]
    if len(body) != expected:
        raise GraphFormatError(
            f"graph6 bit field for n={n} needs {expected} bytes, got {len(body)}"
        )
    bits = []
    for ch in body:
        value = ord(ch) - 63
        bits.extend((value >> (5 - k)) & 1 for k in range(6))
    edges = [pair for pair, bit in zip(_pairs(n), bits) if bit]
    return Graph.from_edges(n, edges)


def encode_graph6(g: Graph) -> str:
    if g.n > GRAPH6_MAX_N:
        raise GraphFormatError("graph6 encoding for n >= 63 is not supported")
    bits = [1 if g.has_edge(i, j) else 0 for i, j in _pairs(g.n)]
    bits += [0] * (-len(bits) % 6)
    out = [chr(63 + g.n)]
    for k in range(0, len(bits), 6):
        value = 0
        for bit in bits[k:k + 6]:
            value = (value << 1) | bit
        out.append(chr(63 + value))
    return "".join(out)


def graph6_code(g: Graph) -> int:
    """Edge code with bit k set for the k-th graph6 pair; matches ``kernels.graph_masks``."""
    return sum(1 << k for k, (i, j) in enumerate(_pairs(g.n)) if g.has_edge(i, j))


def read_graph6_lines(lines: Iterable[str]):
    """Yield ``(lineno, Graph | GraphFormatError)`` for each non-blank corpus line."""
    for lineno, raw in enumerate(lines, start=1):
        if not raw.strip():
            continue
        try:
            yield lineno, parse_graph6(raw)
        except GraphFormatError as exc:
            yield lineno, GraphFormatError(str(exc), lineno)
