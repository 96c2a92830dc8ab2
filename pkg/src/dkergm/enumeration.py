"""Exhaustive enumeration of labeled graphs, compressed by sufficient statistic.

Every model quantity in this package (log-partition functions, exact
probabilities, moments, polytopes) is a weighted sum over all labeled graphs
on ``n`` nodes.  Graphs that share a sufficient statistic contribute the same
term, so :func:`enumerate_graphs` sweeps the 2**C(n,2) edge masks once and
keeps only ``statistic -> multiplicity``.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Callable, Hashable

import numpy as np

from . import _backend
from .errors import EnumerationCapError
from .graph import Graph, degree_pairs, pair_scales

KEY_KINDS = (
    "degree-vector",
    "reduced-degree-vector",
    "scaled-bi-degree",
    "isolated-node-count",
    "custom",
)

DEFAULT_CAP = 7
HARD_CAP = 8
CHUNK = 1 << 20


@dataclass(frozen=True)
class PartitionTable:
    """Map from statistic value to the number of labeled graphs attaining it.

    ``scaled-bi-degree`` keys are the scaled bi-degree vector with the
    reference pair (n-1, n-1) removed, as exact fractions.
    ``reduced-degree-vector`` keys drop n_{n-1}.
    """

    n: int
    key_kind: str
    restricted: bool
    entries: dict = field(repr=False)

    @property
    def total(self) -> int:
        return sum(self.entries.values())

    def __len__(self):
        return len(self.entries)

    @cached_property
    def keys(self) -> np.ndarray:
        """Keys as a float matrix, one row per entry."""
        rows = [[float(x) for x in k] for k in self.entries]
        width = len(next(iter(self.entries))) if self.entries else 0
        return np.array(rows, dtype=float).reshape(len(rows), width)

    @cached_property
    def counts(self) -> np.ndarray:
        return np.array([float(c) for c in self.entries.values()])

    @cached_property
    def log_counts(self) -> np.ndarray:
        return np.log(self.counts)

    def to_json(self) -> dict:
        exact = self.key_kind == "scaled-bi-degree"
        return {
            "n": self.n,
            "key_kind": self.key_kind,
            "restricted": self.restricted,
            "entries": [
                {"key": [str(x) if exact else int(x) for x in k], "count": c}
                for k, c in self.entries.items()
            ],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "PartitionTable":
        exact = obj["key_kind"] == "scaled-bi-degree"
        conv = Fraction if exact else int
        entries = {tuple(conv(x) for x in e["key"]): int(e["count"]) for e in obj["entries"]}
        return cls(int(obj["n"]), obj["key_kind"], bool(obj["restricted"]), entries)

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def _check_cap(n, cap, cap_override):
    if n < 1:
        raise ValueError("n must be at least 1")
    limit = HARD_CAP if cap_override else cap
    if n > min(limit, HARD_CAP):
        graphs = 2 ** (n * (n - 1) // 2)
        hint = "" if cap_override or n > HARD_CAP else f"; pass cap_override to allow n={HARD_CAP}"
        raise EnumerationCapError(
            f"n={n} means sweeping {graphs:,} labeled graphs (~{graphs:.2e}); cap is n={min(limit, HARD_CAP)}{hint}"
        )


def _chunk_counts(n, key_kind, restricted, lo, hi, tally, key_fn):
    if key_kind == "custom":
        out = Counter()
        for mask in range(lo, hi):
            g = Graph(n, mask)
            if restricted and 0 in g.degrees():
                continue
            out[key_fn(g)] += 1
        return out

    rows, counts = tally(n, lo, hi, key_kind == "scaled-bi-degree", restricted)
    out = Counter()
    if key_kind == "scaled-bi-degree":
        scales = pair_scales(n)[:-1]
        for row, c in zip(rows.tolist(), counts.tolist()):
            out[tuple(s * x for s, x in zip(scales, row))] += c
        return out

    for row, c in zip(rows.tolist(), counts.tolist()):
        if key_kind == "degree-vector":
            key = tuple(row)
        elif key_kind == "reduced-degree-vector":
            key = tuple(row[:-1])
        else:
            key = (row[0],)
        out[key] += c
    return out


def enumerate_graphs(
    n: int,
    key_kind: str = "degree-vector",
    restricted: bool = False,
    *,
    key_fn: Callable[[Graph], Hashable] | None = None,
    cap: int = DEFAULT_CAP,
    cap_override: bool = False,
    workers: int = 1,
    backend: str | None = None,
    chunk: int = CHUNK,
) -> PartitionTable:
    """Sweep every labeled n-node graph and tabulate a statistic.

    With ``restricted=True`` only graphs without isolated nodes are counted.
    The mask range is split into contiguous chunks; with ``workers > 1`` the
    chunks run on a thread pool (the compiled kernel releases the GIL).  The
    merged table is sorted by key, so the result does not depend on
    ``workers``.
    """
    if key_kind not in KEY_KINDS:
        raise ValueError(f"unknown key kind {key_kind!r}; choose from {KEY_KINDS}")
    if key_kind == "custom" and key_fn is None:
        raise ValueError("custom key kind needs key_fn")
    _check_cap(n, cap, cap_override)

    tally = _backend.get_tally(backend)
    total = 1 << (n * (n - 1) // 2)
    ranges = [(lo, min(lo + chunk, total)) for lo in range(0, total, chunk)]

    def work(r):
        return _chunk_counts(n, key_kind, restricted, r[0], r[1], tally, key_fn)

    merged = Counter()
    if workers > 1 and len(ranges) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(work, ranges):
                merged.update(part)
    else:
        for r in ranges:
            merged.update(work(r))

    entries = {k: merged[k] for k in sorted(merged)}
    return PartitionTable(n, key_kind, restricted, entries)


@lru_cache(maxsize=64)
def partition_table(n: int, key_kind: str, restricted: bool = False, cap_override: bool = False) -> PartitionTable:
    """Cached :func:`enumerate_graphs` for the fixed key kinds."""
    if key_kind == "custom":
        raise ValueError("custom tables are not cached")
    return enumerate_graphs(n, key_kind, restricted, cap_override=cap_override)


@lru_cache(maxsize=None)
def count_no_isolated(n: int) -> int:
    """Number of labeled n-node graphs with no isolated node."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return 1
    if n == 1:
        return 0
    return 2 ** (n * (n - 1) // 2) - sum(count_no_isolated(i) * math.comb(n, i) for i in range(n))


def nu(n: int, j: int) -> int:
    """Number of labeled n-node graphs with exactly j isolated nodes."""
    if not 0 <= j <= n:
        raise ValueError(f"need 0 <= j <= n, got j={j}, n={n}")
    return math.comb(n, j) * count_no_isolated(n - j)


def dominance_ratio(n: int) -> float:
    if n < 1:
        raise ValueError("n must be at least 1")
    return float(Fraction(count_no_isolated(n), 2 ** (n * (n - 1) // 2)))


def reference_pair(n: int) -> tuple[int, int]:
    return degree_pairs(n)[-1]
