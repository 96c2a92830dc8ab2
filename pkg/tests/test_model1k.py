import math
import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.optimize import brentq

from dkergm.enumeration import partition_table
from dkergm.errors import ReferenceCoordinateError
from dkergm.graph import Graph, degree_vector
from dkergm.model1k import (
    NaturalParams1K,
    alpha_from_p,
    change_statistic,
    er_distribution_gap,
    er_embedding,
    er_theta,
    er_theta_report,
    expected_stats_1k,
    fit_1k,
    log_prob_1k,
    p_from_alpha,
    prob_degree_present,
    psi_1k,
)
from dkergm.polytope import mle_exists_1k

from conftest import EDGE3, EMPTY3, PATH, TRIANGLE, all_graphs


def P(n, *alpha):
    return NaturalParams1K(n, np.array(alpha, dtype=float))


def psi_brute(params):
    # direct sum over labeled graphs, no table
    a = params.full()
    terms = []
    for g in all_graphs(params.n):
        d = degree_vector(g)
        if any(d[k] and a[k] == -np.inf for k in range(params.n)):
            continue
        terms.append(sum(c * a[k] for k, c in enumerate(d) if c))
    return float(np.logaddexp.reduce(terms))


def test_psi_examples():
    assert psi_1k(P(3, 0, 0)) == pytest.approx(math.log(8), rel=1e-14)
    assert psi_1k(P(3, math.log(2), math.log(3))) == pytest.approx(math.log(90), rel=1e-14)
    for a in (-1.3, 0.0, 0.7):
        assert psi_1k(P(2, a)) == pytest.approx(math.log1p(math.exp(2 * a)), rel=1e-14)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_psi_matches_direct_sum(n):
    rng = np.random.default_rng(n)
    for _ in range(5):
        params = NaturalParams1K(n, rng.uniform(-2, 2, n - 1))
        assert psi_1k(params) == pytest.approx(psi_brute(params), rel=1e-12)


def test_log_prob_examples():
    assert log_prob_1k(TRIANGLE, P(3, 0, 0)) == pytest.approx(math.log(1 / 8))
    assert log_prob_1k(EDGE3, P(3, math.log(2), math.log(3))) == pytest.approx(math.log(1 / 5))
    assert log_prob_1k(EMPTY3, P(3, -np.inf, 0)) == -math.inf


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_normalization(n):
    rng = np.random.default_rng(100 + n)
    table = partition_table(n, "reduced-degree-vector")
    for _ in range(20):
        params = NaturalParams1K(n, rng.uniform(-2, 2, n - 1))
        total = sum(math.exp(log_prob_1k(g, params, table)) for g in all_graphs(n))
        assert abs(total - 1) <= 1e-10


def test_normalization_with_dropped_coordinate():
    params = P(4, -np.inf, 0.3, -0.2)
    total = sum(math.exp(log_prob_1k(g, params)) for g in all_graphs(4))
    assert abs(total - 1) <= 1e-12


def test_alpha_from_p_examples():
    assert np.allclose(alpha_from_p([1 / 4] * 4).alpha, 0)
    assert np.allclose(alpha_from_p([1 / 6, 2 / 6, 3 / 6]).alpha, [math.log(1 / 3), math.log(2 / 3)])
    a = alpha_from_p([0, 0.5, 0.5])
    assert a.alpha[0] == -np.inf and a.dropped == {0}
    with pytest.raises(ReferenceCoordinateError):
        alpha_from_p([0.5, 0.5, 0])
    with pytest.raises(ValueError):
        alpha_from_p([0.5, 0.6])


@given(st.lists(st.floats(0.01, 1.0), min_size=2, max_size=8))
def test_alpha_p_round_trip(w):
    p = np.array(w) / sum(w)
    assert np.allclose(p_from_alpha(alpha_from_p(p)), p, atol=1e-12)


def test_params_validation():
    with pytest.raises(ValueError):
        P(3, 0)
    with pytest.raises(ValueError):
        P(3, np.inf, 0)
    with pytest.raises(ValueError):
        P(3, np.nan, 0)
    p = P(3, 1, 2)
    with pytest.raises(ValueError):
        p.alpha[0] = 5


def test_expected_stats_examples():
    assert np.allclose(expected_stats_1k(P(3, 0, 0)), [0.75, 1.5])
    assert expected_stats_1k(P(3, -np.inf, 0.4))[0] == 0


@pytest.mark.parametrize("n", [3, 4, 5])
def test_gradient_identity(n):
    rng = np.random.default_rng(n)
    a = rng.uniform(-1, 1, n - 1)
    h = 1e-4
    grad = expected_stats_1k(NaturalParams1K(n, a))
    for k in range(n - 1):
        step = np.zeros(n - 1)
        step[k] = h
        fd = (psi_1k(NaturalParams1K(n, a + step)) - psi_1k(NaturalParams1K(n, a - step))) / (2 * h)
        assert abs(fd - grad[k]) < 1e-6


def test_change_statistic_examples():
    assert change_statistic(P(4, 0, 0, 0), 1, 2) == 0
    assert change_statistic(P(4, 0, 1, 3), 0, 1) == 3
    er = er_embedding(5, 0.3)
    theta = er_theta(0.3)
    for k in range(4):
        for kp in range(4):
            assert change_statistic(er, k, kp) == pytest.approx(2 * theta)
    with pytest.raises(ValueError):
        change_statistic(P(4, 0, 0, 0), 3, 0)


def test_change_statistic_is_log_probability_ratio():
    rng = random.Random(5)
    params = P(5, 0.3, -0.8, 1.1, 0.2)
    for _ in range(30):
        g = Graph(5, rng.getrandbits(10))
        missing = [(i, j) for j in range(5) for i in range(j) if not g.has_edge(i, j)]
        if not missing:
            continue
        i, j = rng.choice(missing)
        h = Graph(5, g.edges | Graph.from_edges(5, [(i, j)]).edges)
        deg = g.degrees()
        delta = log_prob_1k(h, params) - log_prob_1k(g, params)
        assert delta == pytest.approx(change_statistic(params, deg[i], deg[j]))


def test_permutation_invariance():
    rng = random.Random(9)
    params = P(6, 0.2, -0.4, 0.9, -1.2, 0.5)
    table = partition_table(6, "reduced-degree-vector")
    for _ in range(20):
        g = Graph(6, rng.getrandbits(15))
        perm = list(range(6))
        rng.shuffle(perm)
        assert log_prob_1k(g.relabel(perm), params, table) == log_prob_1k(g, params, table)


def test_prob_degree_present_examples():
    assert prob_degree_present(3, 2, P(3, 0, 0)) == pytest.approx(0.5)
    assert prob_degree_present(2, 1, P(2, 0)) == pytest.approx(0.5)
    for n in range(2, 6):
        graphs = all_graphs(n)
        for k in range(n):
            frac = sum(1 for g in graphs if k in g.degrees()) / len(graphs)
            assert prob_degree_present(n, k, NaturalParams1K.zeros(n)) == pytest.approx(frac, abs=1e-14)


# -- fitting ------------------------------------------------------------------


def test_fit_three_graphs():
    res = fit_1k([TRIANGLE, EDGE3, PATH])
    assert res.exists and res.exists_full
    assert res.moment_residual <= 1e-8
    assert np.allclose(expected_stats_1k(res.alpha_hat), [1 / 3, 4 / 3], atol=1e-8)


def test_fit_single_observation_never_exists_fully():
    for g in all_graphs(4):
        assert not fit_1k([g]).exists_full


def test_fit_repeated_path_is_on_reduced_boundary():
    res = fit_1k([PATH, PATH])
    assert res.dropped_indices == (0,)
    assert not res.exists and res.alpha_hat is None


def test_fit_triangle_and_edge():
    # mean (1/2, 1); oracle: the closed-form criterion gives interior (1/2 > 0, 1 > 0, sum < 3, 1 < 2)
    res = fit_1k([TRIANGLE, EDGE3])
    assert res.exists == mle_exists_1k(3, res.mean_stats) is True
    assert res.moment_residual <= 1e-8


def test_fit_one_dimensional_against_bisection():
    # n=2: psi = log(1 + e^{2a}); the mean of n_0 is 2 e^{2a} / (1 + e^{2a})
    g0, g1 = Graph(2, 0), Graph(2, 1)
    res = fit_1k([g0, g1, g1])
    target = 2 / 3
    a = brentq(lambda a: 2 / (1 + math.exp(-2 * a)) - target, -10, 10, xtol=1e-14)
    assert res.alpha_hat.alpha[0] == pytest.approx(a, abs=1e-7)


def test_fit_all_coordinates_dropped_is_not_existing():
    res = fit_1k([Graph.complete(3)])
    assert res.dropped_indices == (0, 1)
    assert not res.exists


def test_fit_rejects_mixed_sizes():
    with pytest.raises(ValueError):
        fit_1k([TRIANGLE, Graph(4)])
    with pytest.raises(ValueError):
        fit_1k([])


@pytest.mark.parametrize("n", [3, 4, 5])
def test_fit_agrees_with_closed_form_without_dropped(n):
    rng = random.Random(31 * n)
    slots = n * (n - 1) // 2
    seen = 0
    for _ in range(120):
        obs = [Graph(n, rng.getrandbits(slots)) for _ in range(rng.randint(2, 6))]
        res = fit_1k(obs)
        if res.dropped_indices:
            continue
        seen += 1
        assert res.exists == mle_exists_1k(n, res.mean_stats)
        if res.exists:
            assert res.moment_residual <= 1e-8
    assert seen > 10


def test_newton_converges_to_same_point_from_different_starts():
    rng = np.random.default_rng(4)
    obs = [Graph(4, m) for m in (3, 7, 12, 33, 45, 60)]
    a = fit_1k(obs)
    assert a.exists
    b = fit_1k(obs, start=rng.uniform(-2, 2, 3))
    assert np.max(np.abs(a.alpha_hat.alpha - b.alpha_hat.alpha)) <= 1e-6


def test_fit_with_dropped_coordinate_exists_on_reduced_set():
    # no observation has an isolated node, the rest of the mean is interior
    res = fit_1k([Graph(4, m) for m in (13, 62, 27, 46)])
    assert res.dropped_indices == (0,)
    assert res.exists and not res.exists_full
    assert res.moment_residual <= 1e-8
    js = res.to_json()
    assert js["alpha"][0] == "-inf" and js["dropped"] == [0]


# -- Erdos-Renyi ------------------------------------------------------------------


def test_er_half_is_uniform():
    assert np.all(er_embedding(5, 0.5).alpha == 0)


@pytest.mark.parametrize("n", [3, 4])
@pytest.mark.parametrize("p", [0.3, 0.5, 0.7])
def test_er_embedding_reproduces_gnp(n, p):
    assert er_distribution_gap(n, p) <= 1e-12


def test_er_theta_report_shows_log_odds_mismatch():
    r = er_theta_report(3, 0.3)
    assert r["theta_derived"] == pytest.approx(r["theta_log_odds"] / 2)
    assert r["max_gap_derived"] <= 1e-12
    assert r["max_gap_log_odds"] > 0.1


def test_band_bound_small_n():
    from dkergm.asymptotics import band_bound_check

    rng = np.random.default_rng(0)
    for n in (2, 3, 4, 5):
        for _ in range(10):
            params = NaturalParams1K(n, rng.uniform(-0.2, 0.2, n - 1))
            for _, pa, b0, bl in band_bound_check(params):
                assert pa <= b0 * (1 + 1e-12) and b0 <= bl * (1 + 1e-12)
