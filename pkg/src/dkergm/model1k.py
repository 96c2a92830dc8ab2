"""The 1K model: exponential family with the degree vector as sufficient statistic.

Parameters are log-ratios ``alpha_k = log(p_k / p_{n-1})`` for
k = 0..n-2; the coordinate n-1 is the reference and fixed at 0.  A
coordinate equal to ``-inf`` removes every graph with a node of that degree
from the support.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.special import logsumexp

from .enumeration import PartitionTable, partition_table
from .errors import ReferenceCoordinateError
from .expfam import log_partition, moments, newton_fit
from .graph import Graph, degree_vector
from .polytope import membership, existence_failures


@dataclass(frozen=True)
class NaturalParams1K:
    n: int
    alpha: np.ndarray = field(compare=False)

    def __post_init__(self):
        a = np.asarray(self.alpha, dtype=float).copy()
        if a.shape != (self.n - 1,):
            raise ValueError(f"1K parameters for n={self.n} need {self.n - 1} entries, got shape {a.shape}")
        if np.any(np.isnan(a)) or np.any(a == np.inf):
            raise ValueError("parameters must be finite or -inf")
        a.flags.writeable = False
        object.__setattr__(self, "alpha", a)

    @classmethod
    def zeros(cls, n: int) -> "NaturalParams1K":
        return cls(n, np.zeros(n - 1))

    @property
    def dropped(self) -> frozenset[int]:
        return frozenset(int(k) for k in np.flatnonzero(self.alpha == -np.inf))

    def full(self) -> np.ndarray:
        """All n coordinates, with the reference alpha_{n-1} = 0 appended."""
        return np.append(self.alpha, 0.0)

    def to_json(self) -> list:
        return [("-inf" if a == -np.inf else float(a)) for a in self.alpha]


def alpha_from_p(p: Sequence[float]) -> NaturalParams1K:
    """Natural parameters from degree probabilities p_0..p_{n-1}."""
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or p.size < 2:
        raise ValueError("need a probability vector of length n >= 2")
    if np.any(p < 0) or abs(p.sum() - 1.0) > 1e-9:
        raise ValueError("degree probabilities must be non-negative and sum to 1")
    if p[-1] <= 0:
        raise ReferenceCoordinateError("p_{n-1} must be positive to serve as the reference coordinate")
    with np.errstate(divide="ignore"):
        alpha = np.log(p[:-1] / p[-1])
    return NaturalParams1K(p.size, alpha)


def p_from_alpha(params: NaturalParams1K) -> np.ndarray:
    full = params.full()
    return np.exp(full - logsumexp(full))


def _reduced_keys(params: NaturalParams1K, table: PartitionTable) -> np.ndarray:
    if table.n != params.n:
        raise ValueError(f"table is for n={table.n}, parameters for n={params.n}")
    if table.restricted:
        raise ValueError("1K model needs the unrestricted table")
    if table.key_kind == "reduced-degree-vector":
        return table.keys
    if table.key_kind == "degree-vector":
        return table.keys[:, :-1]
    raise ValueError(f"1K model needs a degree-vector table, got {table.key_kind!r}")


def _support(params, table):
    """Rows of the table with positive probability, and alpha with -inf zeroed."""
    K = _reduced_keys(params, table)
    dropped = sorted(params.dropped)
    rows = np.all(K[:, dropped] == 0, axis=1) if dropped else np.ones(len(K), dtype=bool)
    theta = np.where(params.alpha == -np.inf, 0.0, params.alpha)
    return K[rows], table.log_counts[rows], theta, rows


def _default_table(params, table):
    return partition_table(params.n, "reduced-degree-vector") if table is None else table


def psi_1k(params: NaturalParams1K, table: PartitionTable | None = None) -> float:
    """Log-partition function: log of the sum over all labeled graphs of exp(<alpha, n_-(g)>)."""
    K, logc, theta, _ = _support(params, _default_table(params, table))
    return log_partition(K, logc, theta)


def log_prob_1k(g: Graph, params: NaturalParams1K, table: PartitionTable | None = None) -> float:
    if g.n != params.n:
        raise ValueError(f"graph has {g.n} nodes, parameters are for n={params.n}")
    key = np.array(degree_vector(g)[:-1], dtype=float)
    if any(key[k] > 0 for k in params.dropped):
        return -math.inf
    theta = np.where(params.alpha == -np.inf, 0.0, params.alpha)
    return float(key @ theta) - psi_1k(params, table)


def expected_stats_1k(params: NaturalParams1K, table: PartitionTable | None = None) -> np.ndarray:
    """Model mean of the reduced degree vector (the gradient of psi)."""
    K, logc, theta, _ = _support(params, _default_table(params, table))
    _, mean, _ = moments(K, logc, theta)
    return mean


def change_statistic(params: NaturalParams1K, k: int, k_prime: int) -> float:
    """Log-probability change from adding an edge between nodes of degrees k and k'."""
    n = params.n
    if not (0 <= k <= n - 2 and 0 <= k_prime <= n - 2):
        raise ValueError(f"degrees must lie in 0..{n - 2} for an edge to be addable")
    a = params.full()
    if a[k] == -np.inf or a[k_prime] == -np.inf:
        raise ValueError("no node of that degree has positive probability")
    return float(a[k + 1] + a[k_prime + 1] - (a[k] + a[k_prime]))


def prob_degree_present(n: int, k: int, params: NaturalParams1K, table: PartitionTable | None = None) -> float:
    """Exact probability that some node has degree k."""
    if not 0 <= k <= n - 1:
        raise ValueError(f"k must lie in 0..{n - 1}")
    if params.n != n:
        raise ValueError("parameter size does not match n")
    table = partition_table(n, "degree-vector") if table is None else table
    if table.key_kind != "degree-vector":
        raise ValueError("presence probabilities need a full degree-vector table")
    K, logc, theta, rows = _support(params, table)
    z = K @ theta + logc
    present = table.keys[rows][:, k] > 0
    if not present.any():
        return 0.0
    return float(np.exp(logsumexp(z[present]) - logsumexp(z)))


# -- fitting ---------------------------------------------------------------


@dataclass
class FitResult1K:
    exists: bool
    exists_full: bool
    alpha_hat: NaturalParams1K | None
    moment_residual: float | None
    iterations: int
    dropped_indices: tuple[int, ...]
    mean_stats: tuple[Fraction, ...]
    failed_clauses: list[str]
    converged: bool = True

    def to_json(self) -> dict:
        return {
            "model": "1k",
            "exists": self.exists,
            "exists_full": self.exists_full,
            "alpha": None if self.alpha_hat is None else self.alpha_hat.to_json(),
            "moment_residual": self.moment_residual,
            "iterations": self.iterations,
            "dropped": list(self.dropped_indices),
            "mean_stats": [str(x) for x in self.mean_stats],
            "failed_clauses": self.failed_clauses,
        }


def mean_reduced_degrees(observations: Sequence[Graph]) -> tuple[Fraction, ...]:
    if not observations:
        raise ValueError("need at least one observation")
    n = observations[0].n
    if any(g.n != n for g in observations):
        raise ValueError("all observations must have the same number of nodes")
    m = len(observations)
    totals = [0] * (n - 1)
    for g in observations:
        for k, c in enumerate(degree_vector(g)[:-1]):
            totals[k] += c
    return tuple(Fraction(t, m) for t in totals)


def fit_1k(
    observations: Sequence[Graph],
    tolerance: float = 1e-8,
    max_iter: int = 200,
    *,
    start: Sequence[float] | None = None,
    table: PartitionTable | None = None,
) -> FitResult1K:
    """Maximum likelihood for the 1K model from i.i.d. observed graphs.

    Degrees never observed get ``alpha_k = -inf`` and leave the problem.
    On the remaining coordinates the MLE exists iff the observed mean is an
    interior point of the hull of statistics attainable without the dropped
    degrees; only then is Newton run.  ``exists_full`` is the verdict for the
    full model, which is false whenever a coordinate was dropped.
    """
    nbar = mean_reduced_degrees(observations)
    n = observations[0].n
    table = partition_table(n, "reduced-degree-vector") if table is None else table
    if table.n != n or table.key_kind != "reduced-degree-vector" or table.restricted:
        raise ValueError("fit_1k needs the unrestricted reduced-degree-vector table for n")

    dropped = tuple(k for k, x in enumerate(nbar) if x == 0)
    free = [k for k in range(n - 1) if k not in dropped]
    keys = [k for k in table.entries if all(k[d] == 0 for d in dropped)]
    points = list(dict.fromkeys(tuple(k[f] for f in free) for k in keys))
    target = tuple(nbar[f] for f in free)
    # with every coordinate dropped there is nothing left to estimate
    exists = bool(free) and membership(points, target) == "interior"
    failed = existence_failures(n, nbar) if n >= 2 else []

    if not exists:
        return FitResult1K(False, False, None, None, 0, dropped, nbar, failed)

    params0 = NaturalParams1K(n, np.where(np.isin(np.arange(n - 1), dropped), -np.inf, 0.0))
    K, logc, _, _ = _support(params0, table)
    Kf = K[:, free]
    init = None if start is None else np.asarray(start, float)[free]
    res = newton_fit(Kf, logc, np.array([float(x) for x in target]), tol=tolerance, max_iter=max_iter, start=init)

    alpha = np.full(n - 1, -np.inf)
    alpha[free] = res.theta
    hat = NaturalParams1K(n, alpha)
    residual = float(np.max(np.abs(expected_stats_1k(hat, table) - np.array([float(x) for x in nbar]))))
    return FitResult1K(
        True, not dropped, hat, residual, res.iterations, dropped, nbar, failed, converged=res.converged
    )


# -- Erdos-Renyi embedding ---------------------------------------------------


def er_theta(p: float) -> float:
    """Per-degree slope making the 1K model coincide with G(n, p).

    <alpha, n^(1)> with alpha_i = i*theta equals 2*theta*e(g), so matching
    p^e (1-p)^(C(n,2)-e) requires theta = log(p/(1-p)) / 2.
    """
    if not 0 < p < 1:
        raise ValueError("p must lie strictly between 0 and 1")
    return 0.5 * math.log(p / (1 - p))


def er_embedding(n: int, p: float, theta: float | None = None) -> NaturalParams1K:
    """1K parameters reproducing the Erdos-Renyi distribution G(n, p).

    Uses alpha_i = i*theta shifted by -(n-1)*theta so the reference
    coordinate n-1 sits at 0; the shift is a constant and cancels in psi.
    """
    if not 0 < p < 1:
        raise ValueError("p must lie strictly between 0 and 1")
    t = er_theta(p) if theta is None else theta
    return NaturalParams1K(n, np.array([(i - (n - 1)) * t for i in range(n - 1)]))


def er_distribution_gap(n: int, p: float, theta: float | None = None) -> float:
    """Max over all labeled n-node graphs of |P_1K(g) - P_ER(g)| for the embedding."""
    params = er_embedding(n, p, theta)
    table = partition_table(n, "reduced-degree-vector")
    psi = psi_1k(params, table)
    slots = n * (n - 1) // 2
    gap = 0.0
    for mask in range(1 << slots):
        g = Graph(n, mask)
        key = np.array(degree_vector(g)[:-1], dtype=float)
        p1k = math.exp(float(key @ params.alpha) - psi)
        e = g.num_edges
        gap = max(gap, abs(p1k - p**e * (1 - p) ** (slots - e)))
    return gap


def er_theta_report(n: int, p: float) -> dict:
    """Compare the derived slope with the plain log-odds alternative."""
    derived = er_theta(p)
    log_odds = math.log(p / (1 - p))
    return {
        "n": n,
        "p": p,
        "theta_derived": derived,
        "theta_log_odds": log_odds,
        "max_gap_derived": er_distribution_gap(n, p, derived),
        "max_gap_log_odds": er_distribution_gap(n, p, log_odds),
    }
