"""Model polytopes of the 1K family and interior-membership tests.

The MLE of an exponential family exists exactly when the mean observed
statistic is an interior point of the convex hull of attainable statistics.
For the degree-vector model that hull has a closed form
(:func:`polytope_B`, :func:`polytope_A`) and the existence test collapses to
a handful of inequalities (:func:`mle_exists_1k`).  :func:`interior_membership`
is the generic oracle: a margin-maximizing LP over barycentric weights,
solved in exact rational arithmetic when the query point is rational.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Sequence

import numpy as np

FLOAT_TOL = 1e-9


@dataclass(frozen=True)
class PolytopeSpec:
    dimension: int
    vertices: tuple[tuple, ...]
    label: str = "hull-of-observed"


def _e(n, k):
    v = [0] * n
    v[k] = n
    return tuple(v)


def _e2(n, k, l):
    v = [0] * n
    v[k] = n - 1
    v[l] = 1
    return tuple(v)


def polytope_B(n: int) -> PolytopeSpec:
    """Convex hull of all full degree vectors on n nodes."""
    if n < 2:
        raise ValueError("need n >= 2")
    if n % 2 == 0:
        verts = [_e(n, k) for k in range(n)]
    else:
        verts = [_e(n, l) for l in range(0, n, 2)]
        verts += [_e2(n, k, l) for k in range(1, n, 2) for l in range(0, n, 2)]
    return PolytopeSpec(n, tuple(verts), f"B_{n}")


def polytope_A(n: int) -> PolytopeSpec:
    """Projection of :func:`polytope_B` that drops the n_{n-1} coordinate.

    For odd n this includes the images (n-1)*u_k of e_{k,n-1} (k odd), which
    are extreme in the projection alongside e_l, e_{kl} (l < n-1) and 0.
    """
    seen = {}
    for v in polytope_B(n).vertices:
        seen.setdefault(v[:-1], None)
    return PolytopeSpec(n - 1, tuple(seen), f"A_{n - 1}")


def existence_failures(n: int, avg_stats: Sequence) -> list[str]:
    """Clauses of the closed-form 1K existence criterion violated by ``avg_stats``."""
    if len(avg_stats) != n - 1:
        raise ValueError(f"mean reduced degree vector must have length {n - 1}, got {len(avg_stats)}")
    failed = []
    zeros = [k for k, x in enumerate(avg_stats) if not x > 0]
    if zeros:
        failed.append(f"mean degree count is zero at k={zeros}")
    if not sum(avg_stats) < n:
        failed.append(f"sum of mean counts over k<=n-2 is not below n={n}")
    if n % 2 == 1:
        # at most n-1 nodes can have odd degree, so the facet is on the sum;
        # it implies the per-coordinate bound and matches it when n = 3
        capped = [k for k in range(1, n - 1, 2) if not avg_stats[k] < n - 1]
        if capped:
            failed.append(f"odd-degree mean count reaches n-1={n - 1} at k={capped}")
        elif not sum(avg_stats[k] for k in range(1, n - 1, 2)) < n - 1:
            failed.append(f"mean number of odd-degree nodes reaches n-1={n - 1}")
    return failed


def mle_exists_1k(n: int, avg_stats: Sequence) -> bool:
    """Closed-form MLE existence for the 1K model from the mean reduced degree vector.

    Every entry positive and the total below n; for odd n also the odd-degree
    entries summing to less than n-1.
    """
    return not existence_failures(n, avg_stats)


# -- exact LP ------------------------------------------------------------


def _pivot(T, r, c):
    pr = T[r]
    pv = pr[c]
    if pv != 1:
        pr = T[r] = [x / pv for x in pr]
    for i, row in enumerate(T):
        if i != r and row[c] != 0:
            f = row[c]
            T[i] = [a - f * b for a, b in zip(row, pr)]


def _optimize(T, basis, cost, allowed):
    """Primal simplex on tableau ``T`` (last column = rhs), Bland's rule, maximizing."""
    width = len(T[0]) - 1
    while True:
        cb = [cost[b] for b in basis]
        enter = None
        for j in range(width):
            if not allowed[j] or j in basis:
                continue
            red = cost[j] - sum(cbi * row[j] for cbi, row in zip(cb, T) if cbi)
            if red > 0:
                enter = j
                break
        if enter is None:
            return True
        leave, best = None, None
        for i, row in enumerate(T):
            a = row[enter]
            if a > 0:
                ratio = row[-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    leave, best = i, ratio
        if leave is None:
            return False  # unbounded
        _pivot(T, leave, enter)
        basis[leave] = enter


def lp_max_exact(A, b, c):
    """Maximize c.x subject to A x = b, x >= 0 over the rationals.

    Returns the optimal value, ``None`` if infeasible.  Raises on unboundedness.
    """
    m, nv = len(A), len(c)
    T = []
    for i in range(m):
        row = [Fraction(x) for x in A[i]]
        rhs = Fraction(b[i])
        if rhs < 0:
            row, rhs = [-x for x in row], -rhs
        T.append(row + [Fraction(int(k == i)) for k in range(m)] + [rhs])
    basis = [nv + i for i in range(m)]

    phase1 = [0] * nv + [-1] * m
    _optimize(T, basis, phase1, [True] * (nv + m))
    if sum(T[i][-1] for i, bv in enumerate(basis) if bv >= nv) > 0:
        return None

    # drive zero-level artificials out of the basis; drop redundant rows
    i = 0
    while i < len(T):
        if basis[i] >= nv:
            col = next((j for j in range(nv) if T[i][j] != 0), None)
            if col is None:
                del T[i], basis[i]
                continue
            _pivot(T, i, col)
            basis[i] = col
        i += 1
    if not T:
        return Fraction(0)

    cost = [Fraction(x) for x in c] + [0] * m
    if not _optimize(T, basis, cost, [True] * nv + [False] * m):
        raise ArithmeticError("LP unbounded")
    return sum(cost[bv] * T[i][-1] for i, bv in enumerate(basis))


def exact_rank(rows) -> int:
    M = [[Fraction(x) for x in r] for r in rows]
    rank, col = 0, 0
    ncols = len(M[0]) if M else 0
    while rank < len(M) and col < ncols:
        piv = next((i for i in range(rank, len(M)) if M[i][col] != 0), None)
        if piv is None:
            col += 1
            continue
        M[rank], M[piv] = M[piv], M[rank]
        for i in range(rank + 1, len(M)):
            if M[i][col] != 0:
                f = M[i][col] / M[rank][col]
                M[i] = [a - f * b for a, b in zip(M[i], M[rank])]
        rank += 1
        col += 1
    return rank


def _is_rational(x) -> bool:
    return all(isinstance(v, (int, Rational, np.integer)) for v in x)


def _margin_system(points, x):
    # weights lambda_i = mu_i + t with mu_i, t >= 0; maximize t
    N, d = len(points), len(x)
    A = [[p[r] for p in points] + [sum(p[r] for p in points)] for r in range(d)]
    A.append([1] * N + [N])
    b = list(x) + [1]
    c = [0] * N + [1]
    return A, b, c


def hull_margin(points: Sequence[Sequence], x: Sequence, exact: bool | None = None):
    """Largest t such that x is a convex combination of ``points`` with every weight >= t.

    ``None`` when x lies outside the hull.  A positive margin means x is in
    the relative interior.  Exact (``Fraction``) when ``exact`` is true or,
    by default, when every coordinate of x is rational.
    """
    points = [tuple(p) for p in points]
    if not points:
        return None
    if exact is None:
        exact = _is_rational(x)
    A, b, c = _margin_system(points, list(x))
    if exact:
        return lp_max_exact(A, [Fraction(v) for v in b], c)

    from scipy.optimize import linprog

    res = linprog(
        -np.asarray(c, float),
        A_eq=np.asarray(A, float),
        b_eq=np.asarray(b, float),
        bounds=(0, None),
        method="highs",
    )
    if res.status == 2:
        return None
    if res.status != 0:
        raise ArithmeticError(f"LP solver failed: {res.message}")
    return -res.fun


def is_full_dimensional(points: Sequence[Sequence], exact: bool = True) -> bool:
    points = [tuple(p) for p in points]
    if not points:
        return False
    d = len(points[0])
    if d == 0:
        return True
    diffs = [[a - b for a, b in zip(p, points[0])] for p in points[1:]]
    if not diffs:
        return False
    if exact:
        return exact_rank(diffs) == d
    return np.linalg.matrix_rank(np.asarray(diffs, float)) == d


def membership(points: Sequence[Sequence], x: Sequence, tol: float = FLOAT_TOL) -> str:
    """Classify x against conv(points): 'interior', 'boundary', 'exterior' or 'undetermined'.

    'undetermined' only arises for floating inputs whose margin is within
    ``tol`` of zero.
    """
    points = [tuple(p) for p in points]
    if len(x) != (len(points[0]) if points else 0):
        raise ValueError("query point dimension does not match the polytope")
    exact = _is_rational(x)
    margin = hull_margin(points, x, exact)
    if margin is None:
        return "exterior"
    if not is_full_dimensional(points, exact=_is_rational(points[0])):
        return "boundary"
    if exact:
        return "interior" if margin > 0 else "boundary"
    return "interior" if margin > tol else "undetermined"


def interior_membership(p: PolytopeSpec, x: Sequence) -> bool:
    """True iff x lies in the interior of the polytope (near-boundary floats count as outside)."""
    if len(x) != p.dimension:
        raise ValueError(f"point has dimension {len(x)}, polytope has {p.dimension}")
    return membership(p.vertices, x) == "interior"


def in_hull(points: Sequence[Sequence], x: Sequence) -> bool:
    return hull_margin(points, x, exact=True) is not None


def extreme_points(points: Sequence[Sequence]) -> list[tuple]:
    """Points of a finite rational set that are not convex combinations of the others."""
    pts = list(dict.fromkeys(tuple(p) for p in points))
    return [p for i, p in enumerate(pts) if not in_hull(pts[:i] + pts[i + 1 :], p)]
