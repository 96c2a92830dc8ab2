"""The 2K model on graphs without isolated nodes.

The sufficient statistic is the scaled bi-degree vector with the reference
pair (n-1, n-1) removed.  Its coordinates are the raw bi-degree counts
multiplied by (k1+k2)/(k1*k2), a coordinate-wise bijection.  Each parameter
``alpha_{k1k2}`` multiplies the raw count n_{k1k2}, so
psi(alpha) = log sum_g exp(sum alpha_{k1k2} n_{k1k2}(g)); on three nodes
this is log(1 + 3 exp(2 alpha_12)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .enumeration import PartitionTable, partition_table
from .errors import OutOfSupportError
from .expfam import log_partition, moments, newton_fit
from .graph import Graph, bi_degree_vector, degree_pairs, pair_scales, scaled_bi_degree
from .polytope import membership


def free_pairs(n: int) -> tuple[tuple[int, int], ...]:
    """Degree pairs carrying a parameter: all but the reference (n-1, n-1)."""
    return degree_pairs(n)[:-1]


def _scales(n):
    return np.array([float(s) for s in pair_scales(n)[:-1]])


@dataclass(frozen=True)
class NaturalParams2K:
    n: int
    alpha: np.ndarray = field(compare=False)

    def __post_init__(self):
        size = len(free_pairs(self.n))
        a = np.asarray(self.alpha, dtype=float).reshape(-1).copy()
        if a.shape != (size,):
            raise ValueError(f"2K parameters for n={self.n} need {size} entries, got {a.size}")
        if np.any(np.isnan(a)) or np.any(a == np.inf):
            raise ValueError("parameters must be finite or -inf")
        a.flags.writeable = False
        object.__setattr__(self, "alpha", a)

    @classmethod
    def zeros(cls, n: int) -> "NaturalParams2K":
        return cls(n, np.zeros(len(free_pairs(n))))

    @classmethod
    def from_mapping(cls, n: int, values: dict, default: float = 0.0) -> "NaturalParams2K":
        pairs = free_pairs(n)
        unknown = set(values) - set(pairs)
        if unknown:
            raise ValueError(f"not a free degree pair for n={n}: {sorted(unknown)}")
        return cls(n, np.array([values.get(p, default) for p in pairs], dtype=float))

    @property
    def dropped(self) -> frozenset[tuple[int, int]]:
        pairs = free_pairs(self.n)
        return frozenset(pairs[i] for i in np.flatnonzero(self.alpha == -np.inf))

    def as_dict(self) -> dict:
        return dict(zip(free_pairs(self.n), self.alpha.tolist()))

    def to_json(self) -> list:
        return [
            {"pair": list(p), "alpha": "-inf" if a == -np.inf else float(a)}
            for p, a in zip(free_pairs(self.n), self.alpha)
        ]


def _check_table(params, table):
    if table.n != params.n or table.key_kind != "scaled-bi-degree" or not table.restricted:
        raise ValueError("2K model needs the restricted scaled-bi-degree table for the same n")


def _support(params, table):
    _check_table(params, table)
    raw = table.keys / _scales(params.n) if table.keys.shape[1] else table.keys
    raw = np.rint(raw)
    drop = np.flatnonzero(params.alpha == -np.inf)
    rows = np.all(raw[:, drop] == 0, axis=1) if drop.size else np.ones(len(raw), dtype=bool)
    theta = np.where(params.alpha == -np.inf, 0.0, params.alpha)
    return raw[rows], table.log_counts[rows], theta


def _default_table(n, table):
    return partition_table(n, "scaled-bi-degree", True) if table is None else table


def psi_2k(params: NaturalParams2K, table: PartitionTable | None = None) -> float:
    K, logc, theta = _support(params, _default_table(params.n, table))
    return log_partition(K, logc, theta)


def _check_support(g: Graph):
    if 0 in g.degrees():
        raise OutOfSupportError("graph has an isolated node; the 2K model gives it probability zero")


def log_prob_2k(g: Graph, params: NaturalParams2K, table: PartitionTable | None = None) -> float:
    if g.n != params.n:
        raise ValueError(f"graph has {g.n} nodes, parameters are for n={params.n}")
    _check_support(g)
    raw = np.array(bi_degree_vector(g)[:-1], dtype=float)
    drop = params.alpha == -np.inf
    if np.any(raw[drop] > 0):
        return -math.inf
    theta = np.where(drop, 0.0, params.alpha)
    return float(raw @ theta) - psi_2k(params, table)


def gradient_2k(params: NaturalParams2K, table: PartitionTable | None = None) -> np.ndarray:
    """d psi / d alpha: the model mean of the raw reduced bi-degree counts."""
    K, logc, theta = _support(params, _default_table(params.n, table))
    _, mean, _ = moments(K, logc, theta)
    return mean


def expected_stats_2k(params: NaturalParams2K, table: PartitionTable | None = None) -> np.ndarray:
    """Model mean of the scaled reduced bi-degree vector."""
    return gradient_2k(params, table) * _scales(params.n)


@dataclass
class FitResult2K:
    exists: bool | str
    alpha_hat: NaturalParams2K | None
    moment_residual: float | None
    iterations: int
    dropped_pairs: tuple[tuple[int, int], ...]
    mean_stats: tuple[Fraction, ...]
    converged: bool = True

    def to_json(self) -> dict:
        return {
            "model": "2k",
            "exists": self.exists,
            "alpha": None if self.alpha_hat is None else self.alpha_hat.to_json(),
            "moment_residual": self.moment_residual,
            "iterations": self.iterations,
            "dropped": [list(p) for p in self.dropped_pairs],
            "mean_stats": [str(x) for x in self.mean_stats],
        }


def mean_scaled_bidegrees(observations: Sequence[Graph]) -> tuple[Fraction, ...]:
    if not observations:
        raise ValueError("need at least one observation")
    n = observations[0].n
    if any(g.n != n for g in observations):
        raise ValueError("all observations must have the same number of nodes")
    for g in observations:
        _check_support(g)
    m = len(observations)
    totals = [Fraction(0)] * len(free_pairs(n))
    for g in observations:
        for i, x in enumerate(scaled_bi_degree(g)[:-1]):
            totals[i] += x
    return tuple(t / m for t in totals)


def fit_2k(
    observations: Sequence[Graph],
    tolerance: float = 1e-8,
    max_iter: int = 200,
    *,
    start: Sequence[float] | None = None,
    table: PartitionTable | None = None,
) -> FitResult2K:
    """Maximum likelihood for the 2K model.

    Pairs never observed are dropped (alpha = -inf).  Existence is decided by
    the generic hull oracle on the statistics attainable without those pairs;
    the moment residual is measured on the scaled statistic.
    """
    mean = mean_scaled_bidegrees(observations)
    n = observations[0].n
    table = _default_table(n, table)
    pairs = free_pairs(n)

    drop_idx = tuple(i for i, x in enumerate(mean) if x == 0)
    free = [i for i in range(len(pairs)) if i not in drop_idx]
    keys = [k for k in table.entries if all(k[d] == 0 for d in drop_idx)]
    points = list(dict.fromkeys(tuple(k[f] for f in free) for k in keys))
    target = tuple(mean[f] for f in free)
    # with every pair dropped there is nothing left to estimate
    verdict = membership(points, target) if free else "boundary"
    dropped = tuple(pairs[i] for i in drop_idx)

    if verdict != "interior":
        exists = "boundary-undetermined" if verdict == "undetermined" else False
        return FitResult2K(exists, None, None, 0, dropped, mean)

    params0 = NaturalParams2K(n, np.where(np.isin(np.arange(len(pairs)), drop_idx), -np.inf, 0.0))
    K, logc, _ = _support(params0, table)
    scales = _scales(n)
    raw_target = np.array([float(x) for x in target]) / scales[free]
    init = None if start is None else np.asarray(start, float)[free]
    res = newton_fit(
        K[:, free], logc, raw_target, tol=tolerance, max_iter=max_iter, start=init, residual_scale=scales[free]
    )
    alpha = np.full(len(pairs), -np.inf)
    alpha[free] = res.theta
    hat = NaturalParams2K(n, alpha)
    residual = float(np.max(np.abs(expected_stats_2k(hat, table) - np.array([float(x) for x in mean])))) if free else 0.0
    return FitResult2K(True, hat, residual, res.iterations, dropped, mean, converged=res.converged)


BOUND_DENOMINATORS = ("n(n+1)/2", "n(n-1)/2")


def bidegree_nonzero_upper_bound(n: int, strict: bool = False, denominator: str = "n(n+1)/2") -> tuple[int, float]:
    """Greedy ceiling on the number of non-zero bi-degree entries.

    Every non-zero entry contributes at least (k1+k2)/(k1*k2) to a scaled sum
    that totals n on graphs without isolated nodes; adding the smallest
    weights first while the running sum stays <= n (< n with ``strict``)
    bounds how many entries can be non-zero.  The ratio divides by
    n(n+1)/2 by default, or by the true vector length n(n-1)/2.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    if denominator not in BOUND_DENOMINATORS:
        raise ValueError(f"denominator must be one of {BOUND_DENOMINATORS}")
    weights = sorted(pair_scales(n))
    total, count = Fraction(0), 0
    for w in weights:
        nxt = total + w
        if nxt > n or (strict and nxt == n):
            break
        total, count = nxt, count + 1
    size = n * (n + 1) // 2 if denominator == "n(n+1)/2" else n * (n - 1) // 2
    return count, count / size

