"""Labeled simple graphs and their 1K/2K degree statistics.

A graph on ``n`` nodes is stored as an integer bitmask over the C(n,2)
unordered node pairs.  Pair ``(i, j)`` with ``i < j`` lives in bit
``j*(j-1)//2 + i``, so the integers ``0 .. 2**C(n,2) - 1`` enumerate every
labeled graph exactly once.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Sequence

from .errors import GraphFormatError, InconsistentBiDegreeError, InvalidDegreeVectorError

DegreeVector = tuple[int, ...]
BiDegreeVector = tuple[int, ...]
ScaledBiDegreeVector = tuple[Fraction, ...]


def slot(i: int, j: int) -> int:
    """Bit index of the unordered pair {i, j}."""
    if i > j:
        i, j = j, i
    return j * (j - 1) // 2 + i


@lru_cache(maxsize=None)
def slot_pairs(n: int) -> tuple[tuple[int, int], ...]:
    """Node pairs in slot order for an n-node graph."""
    return tuple((i, j) for j in range(n) for i in range(j))


@lru_cache(maxsize=None)
def degree_pairs(n: int) -> tuple[tuple[int, int], ...]:
    """Degree pairs (k1, k2), 1 <= k1 <= k2 <= n-1, in lexicographic order."""
    return tuple((k1, k2) for k1 in range(1, n) for k2 in range(k1, n))


def pair_index(k1: int, k2: int, n: int) -> int:
    """Position of the degree pair {k1, k2} in :func:`degree_pairs`."""
    if k1 > k2:
        k1, k2 = k2, k1
    if not 1 <= k1 <= k2 <= n - 1:
        raise ValueError(f"degree pair ({k1}, {k2}) out of range for n={n}")
    # rows k=1..k1-1 hold (n-k) entries each
    before = (k1 - 1) * (n - 1) - (k1 - 1) * (k1 - 2) // 2
    return before + (k2 - k1)


@dataclass(frozen=True)
class Graph:
    n: int
    edges: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("a graph needs at least one node")
        if self.edges < 0 or self.edges >> (self.n * (self.n - 1) // 2):
            raise ValueError(f"edge mask has bits outside the {self.n}-node slot range")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        mask = 0
        for i, j in edges:
            if i == j:
                raise ValueError(f"self-loop at node {i}")
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"edge ({i}, {j}) out of range for n={n}")
            bit = 1 << slot(i, j)
            if mask & bit:
                raise ValueError(f"duplicate edge ({i}, {j})")
            mask |= bit
        return cls(n, mask)

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls(n, (1 << (n * (n - 1) // 2)) - 1)

    @property
    def num_edges(self) -> int:
        return self.edges.bit_count()

    def has_edge(self, i: int, j: int) -> bool:
        return i != j and bool(self.edges >> slot(i, j) & 1)

    def edge_list(self) -> list[tuple[int, int]]:
        m = self.edges
        return [p for s, p in enumerate(slot_pairs(self.n)) if m >> s & 1]

    def degrees(self) -> list[int]:
        deg = [0] * self.n
        for i, j in self.edge_list():
            deg[i] += 1
            deg[j] += 1
        return deg

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Graph with node ``v`` renamed to ``perm[v]``."""
        return Graph.from_edges(self.n, ((perm[i], perm[j]) for i, j in self.edge_list()))


def degree_vector(g: Graph) -> DegreeVector:
    counts = [0] * g.n
    for d in g.degrees():
        counts[d] += 1
    return tuple(counts)


def bi_degree_vector(g: Graph) -> BiDegreeVector:
    n = g.n
    deg = g.degrees()
    counts = [0] * (n * (n - 1) // 2)
    for i, j in g.edge_list():
        counts[pair_index(deg[i], deg[j], n)] += 1
    return tuple(counts)


@lru_cache(maxsize=None)
def pair_scales(n: int) -> tuple[Fraction, ...]:
    """(k1+k2)/(k1*k2) for every degree pair, in :func:`degree_pairs` order."""
    return tuple(Fraction(k1 + k2, k1 * k2) for k1, k2 in degree_pairs(n))


def scale_bi_degrees(b: Sequence[int], n: int) -> ScaledBiDegreeVector:
    return tuple(s * c for s, c in zip(pair_scales(n), b))


def scaled_bi_degree(g: Graph) -> ScaledBiDegreeVector:
    return scale_bi_degrees(bi_degree_vector(g), g.n)


def edges_from_degrees(d: Sequence[int]) -> int:
    twice = sum(k * c for k, c in enumerate(d))
    if twice % 2:
        raise InvalidDegreeVectorError(f"degree sum {twice} is odd")
    return twice // 2


def degrees_from_bidegrees(b: Sequence[int], n: int) -> DegreeVector:
    """Recover the degree vector from bi-degree counts.

    Each edge in class (k1, k2) contributes one endpoint of degree k1 and one
    of degree k2; dividing the endpoint tally for degree k by k gives n_k.
    Raises :class:`InconsistentBiDegreeError` when a tally is not divisible
    or the implied node count exceeds ``n``.
    """
    pairs = degree_pairs(n)
    if len(b) != len(pairs):
        raise InconsistentBiDegreeError(f"expected {len(pairs)} bi-degree entries for n={n}, got {len(b)}")
    endpoints = [0] * n
    for (k1, k2), c in zip(pairs, b):
        if c < 0:
            raise InconsistentBiDegreeError("negative bi-degree count")
        endpoints[k1] += c
        endpoints[k2] += c
    counts = [0] * n
    for k in range(1, n):
        q, r = divmod(endpoints[k], k)
        if r:
            raise InconsistentBiDegreeError(f"{endpoints[k]} endpoints of degree {k} is not a multiple of {k}")
        counts[k] = q
    counts[0] = n - sum(counts)
    if counts[0] < 0:
        raise InconsistentBiDegreeError(f"bi-degrees imply more than {n} nodes")
    return tuple(counts)


# -- edge-list I/O -------------------------------------------------------


def parse_edge_list(text: str, source: str = "<string>") -> Graph:
    """Parse the ``n m`` header + ``i j`` lines format, or its JSON mirror."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return _parse_json_graph(stripped, source)

    lines = [(no, ln.split()) for no, ln in enumerate(text.splitlines(), 1)]
    lines = [(no, parts) for no, parts in lines if parts]
    if not lines:
        raise GraphFormatError(f"{source}: empty input")
    no, header = lines[0]
    n, m = _ints(header, 2, source, no)
    if n < 1 or m < 0:
        raise GraphFormatError(f"{source}:{no}: bad header 'n m' = {n} {m}")
    body = lines[1:]
    if len(body) != m:
        raise GraphFormatError(f"{source}: header announces {m} edges, found {len(body)}")
    mask = 0
    for no, parts in body:
        i, j = _ints(parts, 2, source, no)
        _check_pair(i, j, n, source, no)
        bit = 1 << slot(i, j)
        if mask & bit:
            raise GraphFormatError(f"{source}:{no}: duplicate edge {i} {j}")
        mask |= bit
    return Graph(n, mask)


def _ints(parts, count, source, no):
    if len(parts) != count:
        raise GraphFormatError(f"{source}:{no}: expected {count} integers, got {' '.join(parts)!r}")
    try:
        return [int(p) for p in parts]
    except ValueError:
        raise GraphFormatError(f"{source}:{no}: non-integer token in {' '.join(parts)!r}") from None


def _check_pair(i, j, n, source, no):
    if not (0 <= i < n and 0 <= j < n):
        raise GraphFormatError(f"{source}:{no}: endpoint out of range 0..{n - 1}: {i} {j}")
    if i >= j:
        raise GraphFormatError(f"{source}:{no}: endpoints must satisfy i < j, got {i} {j}")


def _parse_json_graph(text, source):
    try:
        obj = json.loads(text)
        n = int(obj["n"])
        edges = obj["edges"]
    except (ValueError, KeyError, TypeError) as exc:
        raise GraphFormatError(f"{source}: malformed JSON graph ({exc})") from None
    if n < 1:
        raise GraphFormatError(f"{source}: n must be positive")
    mask = 0
    for pos, e in enumerate(edges):
        if len(e) != 2:
            raise GraphFormatError(f"{source}: edge #{pos} is not a pair")
        i, j = int(e[0]), int(e[1])
        _check_pair(i, j, n, source, f"edge #{pos}")
        bit = 1 << slot(i, j)
        if mask & bit:
            raise GraphFormatError(f"{source}: duplicate edge {i} {j} (edge #{pos})")
        mask |= bit
    return Graph(n, mask)


def read_graph(path: str | Path) -> Graph:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise GraphFormatError(f"cannot read {path}: {exc.strerror}") from None
    return parse_edge_list(text, str(path))


def format_edge_list(g: Graph) -> str:
    edges = g.edge_list()
    lines = [f"{g.n} {len(edges)}"] + [f"{i} {j}" for i, j in edges]
    return "\n".join(lines) + "\n"


def graph_to_json(g: Graph) -> dict:
    return {"n": g.n, "edges": [list(e) for e in g.edge_list()]}
