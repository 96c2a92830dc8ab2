"""Experiments on degree presence, non-zero degree counts and the ER comparison.

Monte Carlo draws come from G(n, p) directly.  Every trial owns a Philox
stream keyed by (seed, n, trial), so results do not depend on how trials are
spread over workers.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.special import gammaln, logsumexp, xlogy

from .enumeration import dominance_ratio, nu, partition_table
from .model1k import NaturalParams1K, prob_degree_present, psi_1k

SEQUENCE_KINDS = ("sqrt-n", "sqrt-n-log-n")


@dataclass(frozen=True)
class ExperimentConfig:
    n_values: tuple[int, ...]
    trials: int = 500
    seed: int = 0
    sequence_kind: str = "sqrt-n-log-n"
    c: float = 0.0
    output_path: str | None = None
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "n_values", tuple(int(n) for n in self.n_values))
        if not self.n_values:
            raise ValueError("n_values must be non-empty")
        if any(n < 2 for n in self.n_values):
            raise ValueError("every n must be at least 2")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.sequence_kind not in SEQUENCE_KINDS:
            raise ValueError(f"sequence_kind must be one of {SEQUENCE_KINDS}")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")

    def a_n(self, n: int) -> float:
        if self.sequence_kind == "sqrt-n":
            return self.c * math.sqrt(n)
        return self.c * math.sqrt(n * math.log(n))

    def target_degree(self, n: int) -> tuple[int, bool]:
        """k(n) = (n-1)/2 + a_n rounded half-up, clipped to 0..n-1; also whether clipping happened."""
        k = math.floor((n - 1) / 2 + self.a_n(n) + 0.5)
        clipped = min(max(k, 0), n - 1)
        return clipped, clipped != k


@dataclass
class ExperimentReport:
    experiment: str
    columns: tuple[str, ...]
    rows: list[tuple] = field(default_factory=list)
    seed: int | None = None
    trials: int | None = None

    def column(self, name: str) -> list:
        i = self.columns.index(name)
        return [r[i] for r in self.rows]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        w.writerows(self.rows)
        return buf.getvalue()

    def to_json(self) -> dict:
        return {
            "experiment": self.experiment,
            "seed": self.seed,
            "trials": self.trials,
            "rows": [dict(zip(self.columns, r)) for r in self.rows],
        }

    def write(self, path: str) -> None:
        with open(path, "w", newline="") as fh:
            fh.write(self.to_csv())

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


# -- closed forms -----------------------------------------------------------


def log_lambda_k(n: int, k: int) -> float:
    if not 0 <= k <= n - 1:
        raise ValueError(f"k must lie in 0..{n - 1}")
    return math.log(n) + gammaln(n) - gammaln(k + 1) - gammaln(n - k) - (n - 1) * math.log(2)


def lambda_k(n: int, k: int) -> float:
    """Expected number of degree-k nodes in G(n, 1/2): n C(n-1, k) 2^-(n-1)."""
    return math.exp(log_lambda_k(n, k))


def h_sequence(n: int, a_n: float) -> float:
    """(1 - 2a/n)^(1/2 - a/n) (1 + 2a/n)^(1/2 + a/n), with 0^0 = 1."""
    if not 0 <= a_n <= n / 2:
        raise ValueError(f"a_n must lie in [0, n/2] = [0, {n / 2}]")
    u, v = 1 - 2 * a_n / n, 1 + 2 * a_n / n
    # (1/2 - a/n) = u/2 and (1/2 + a/n) = v/2
    return float(np.exp(0.5 * (xlogy(u, u) + xlogy(v, v))))


# -- sampling ---------------------------------------------------------------


def trial_rng(seed: int, n: int, trial: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, n, trial])))


def sample_degrees(n: int, rng: np.random.Generator, p: float = 0.5) -> np.ndarray:
    """Degree sequence of one G(n, p) draw, via a strict upper-triangular adjacency."""
    if p == 0.5:
        bits = rng.integers(0, 2, size=(n, n), dtype=np.uint8)
    else:
        bits = (rng.random((n, n)) < p).astype(np.uint8)
    upper = np.triu(bits, 1)
    return upper.sum(axis=0, dtype=np.int64) + upper.sum(axis=1, dtype=np.int64)


def _run_trials(config: ExperimentConfig, n: int, fn: Callable[[np.ndarray], float]) -> np.ndarray:
    def one(t):
        return fn(sample_degrees(n, trial_rng(config.seed, n, t)))

    if config.workers == 1:
        return np.array([one(t) for t in range(config.trials)], dtype=float)
    with ThreadPoolExecutor(config.workers) as pool:
        return np.array(list(pool.map(one, range(config.trials))), dtype=float)


def _mean_and_se(x: np.ndarray) -> tuple[float, float]:
    m = float(x.mean())
    se = float(x.std(ddof=1) / math.sqrt(x.size)) if x.size > 1 else 0.0
    return m, se


def mc_degree_presence(config: ExperimentConfig) -> ExperimentReport:
    """Frequency of n_{k(n)} > 0 in G(n, 1/2), with its binomial standard error."""
    report = ExperimentReport(
        "prop5", ("n", "a_n", "k", "clipped", "frequency", "stderr", "lambda_k"), seed=config.seed, trials=config.trials
    )
    for n in config.n_values:
        k, clipped = config.target_degree(n)
        hits = _run_trials(config, n, lambda d: float(np.any(d == k)))
        freq = float(hits.mean())
        se = math.sqrt(freq * (1 - freq) / config.trials)
        report.rows.append((n, config.a_n(n), k, clipped, freq, se, lambda_k(n, k)))
    return report


def mc_nonzero_count(config: ExperimentConfig) -> ExperimentReport:
    """Mean number N of distinct degrees in G(n, 1/2), also scaled by sqrt(n log n)."""
    report = ExperimentReport("prop6", ("n", "mean", "stderr", "scaled_mean"), seed=config.seed, trials=config.trials)
    for n in config.n_values:
        counts = _run_trials(config, n, lambda d: float(np.unique(d).size))
        mean, se = _mean_and_se(counts)
        report.rows.append((n, mean, se, mean / math.sqrt(n * math.log(n))))
    return report


def presence_exact(n: int, k: int, params: NaturalParams1K | None = None) -> float:
    """Exact P(n_k > 0) from enumeration; uniform model by default."""
    params = NaturalParams1K.zeros(n) if params is None else params
    return prob_degree_present(n, k, params)


# -- exact experiments ------------------------------------------------------


def band_bound_check(params: NaturalParams1K) -> list[tuple[int, float, float, float]]:
    """Rows (k, P_alpha(n_k > 0), (C/c)^n P_0(n_k > 0), (C/c)^n lambda_k(n)).

    c and C are the smallest and largest of exp(alpha) including the
    reference coordinate, so c <= 1 <= C.
    """
    n = params.n
    full = params.full()
    if np.any(full == -np.inf):
        raise ValueError("the band bound needs finite parameters")
    log_ratio = float(full.max() - full.min())
    factor = math.exp(n * log_ratio)
    zero = NaturalParams1K.zeros(n)
    table = partition_table(n, "degree-vector")
    out = []
    for k in range(n):
        pa = prob_degree_present(n, k, params, table)
        p0 = prob_degree_present(n, k, zero, table)
        out.append((k, pa, factor * p0, factor * lambda_k(n, k)))
    return out


def singularity_experiment(n: int, p: float, C: float, alpha: NaturalParams1K) -> tuple[float, float]:
    """Exact probabilities of the degree-band event under G(n, p) and under the 1K model.

    The band holds every degree within (n-1)p +- C sqrt(n log n).
    """
    if not 0 < p < 1:
        raise ValueError("p must lie strictly between 0 and 1")
    if alpha.n != n:
        raise ValueError("parameter size does not match n")
    table = partition_table(n, "degree-vector")
    K = table.keys
    degrees = np.arange(n)
    half_width = C * math.sqrt(n * math.log(n))
    outside = np.abs(degrees - (n - 1) * p) > half_width
    in_band = ~np.any(K[:, outside] > 0, axis=1)

    slots = n * (n - 1) // 2
    edges = K @ degrees / 2
    log_er = table.log_counts + edges * math.log(p) + (slots - edges) * math.log1p(-p)
    prob_er = float(np.exp(logsumexp(log_er[in_band]))) if in_band.any() else 0.0

    theta = np.where(alpha.alpha == -np.inf, 0.0, alpha.alpha)
    support = np.all(K[:, :-1][:, alpha.alpha == -np.inf] == 0, axis=1)
    z = K[:, :-1] @ theta + table.log_counts
    mask = in_band & support
    prob_1k = float(np.exp(logsumexp(z[mask]) - psi_1k(alpha, table))) if mask.any() else 0.0
    return min(prob_er, 1.0), min(prob_1k, 1.0)


def singularity_report(n_values: Sequence[int], p: float, C: float) -> ExperimentReport:
    """Band probabilities under G(n, p) and the uniform 1K model for each n."""
    report = ExperimentReport("singularity", ("n", "p", "C", "prob_er", "prob_1k"))
    for n in n_values:
        er, ok = singularity_experiment(n, p, C, NaturalParams1K.zeros(n))
        report.rows.append((n, p, C, er, ok))
    return report


def nu_dominance_report(n_values: Sequence[int]) -> ExperimentReport:
    """nu_n(j) for every j, its share of all graphs, and f(n) / 2^C(n,2)."""
    report = ExperimentReport("nu-dominance", ("n", "j", "nu", "fraction", "dominance_ratio"))
    for n in n_values:
        total = 2 ** (n * (n - 1) // 2)
        ratio = dominance_ratio(n)
        for j in range(n + 1):
            v = nu(n, j)
            report.rows.append((n, j, v, v / total, ratio))
    return report


def h_sequence_report(n_values: Sequence[int], c: float, sequence_kind: str = "sqrt-n") -> ExperimentReport:
    report = ExperimentReport("h-sequence", ("n", "a_n", "h_n", "log_bound"))
    cfg = ExperimentConfig(tuple(n_values), sequence_kind=sequence_kind, c=c)
    for n in n_values:
        a = min(cfg.a_n(n), n / 2)
        h = h_sequence(n, a)
        # log of sqrt(n) / h_n^n, the order of the presence bound at c_n = C_n = 1
        report.rows.append((n, a, h, 0.5 * math.log(n) - n * math.log(h)))
    return report
